"""Exception hierarchy shared by all modules."""


class CosseratError(Exception):
    """Base class for every error raised by this package."""


class InadmissibleParams(CosseratError, ValueError):
    """Material constants violate an admissibility bound."""


class InvalidField(CosseratError, ValueError):
    """A sampled field is too short, non-finite, or leaves the admissible branch."""


class PoleError(CosseratError, ArithmeticError):
    """Evaluation hit a pole (e.g. v = v_elas in b(v))."""


class ForbiddenRegion(CosseratError, ValueError):
    """The requested speed lies where k^2 < 0 or the rescaling is undefined."""


class NoSoliton(CosseratError, ValueError):
    """No traveling kink of the double sine-Gordon family exists for these inputs."""


class NumericalInstability(CosseratError, RuntimeError):
    """Time stepping produced non-finite values."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step
