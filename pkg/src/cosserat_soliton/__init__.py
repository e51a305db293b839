"""One-axis Cosserat micropolar elasticity: energies, dispersion, DSG kinks and their dynamics."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CosseratError,
    ForbiddenRegion,
    InadmissibleParams,
    InvalidField,
    NoSoliton,
    NumericalInstability,
    PoleError,
)
from .params import MaterialParams, fixture, load_params  # noqa: E402

__all__ = [
    "CosseratError",
    "ForbiddenRegion",
    "InadmissibleParams",
    "InvalidField",
    "MaterialParams",
    "NoSoliton",
    "NumericalInstability",
    "PoleError",
    "__version__",
    "fixture",
    "load_params",
]
