"""Material constants of the one-axis Cosserat model."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, replace
from importlib import resources
from pathlib import Path

from .errors import InadmissibleParams

PARAM_KEYS = (
    "kappa1", "kappa2", "kappa3", "chi1", "chi3",
    "rho", "rho_rot", "mu_c", "lambda", "mu",
)

FIXTURES = ("type_a", "type_b", "type_b_strict", "type_c", "type_d", "mu_c_zero")


@dataclass(frozen=True)
class MaterialParams:
    """Constitutive constants.

    ``lam`` is the first Lame parameter; it is spelled ``lambda`` in params
    files and reports.
    """

    kappa1: float
    kappa2: float
    kappa3: float
    chi1: float
    chi3: float
    rho: float
    rho_rot: float
    mu_c: float
    lam: float
    mu: float

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not math.isfinite(value):
                raise InadmissibleParams(f"{_external(name)} must be finite, got {value!r}")
        if self.rho <= 0:
            raise InadmissibleParams("rho > 0 violated")
        if self.rho_rot <= 0:
            raise InadmissibleParams("rho_rot > 0 violated")
        if self.mu <= 0:
            raise InadmissibleParams("mu > 0 violated")
        if self.mu_c < 0:
            raise InadmissibleParams("mu_c >= 0 violated")
        if self.lam + 2 * self.mu <= 0:
            raise InadmissibleParams("lambda + 2 mu > 0 violated")
        if self.kappa1 + 6 * self.kappa3 <= 0:
            raise InadmissibleParams("kappa1 + 6 kappa3 > 0 violated")

    @classmethod
    def from_caption(cls, kappa1, kappa3, chi1, chi3, rho, rho_rot, mu_c, lam, mu, kappa2=0.0):
        """Build from the nine-tuple order used in the figure captions."""
        return cls(kappa1, kappa2, kappa3, chi1, chi3, rho, rho_rot, mu_c, lam, mu)

    @classmethod
    def from_dict(cls, data: dict) -> "MaterialParams":
        missing = [k for k in PARAM_KEYS if k not in data]
        if missing:
            raise InadmissibleParams(f"missing keys: {', '.join(missing)}")
        values = {}
        for key in PARAM_KEYS:
            value = data[key]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InadmissibleParams(f"{key} must be a number, got {value!r}")
            values[_internal(key)] = float(value)
        return cls(**values)

    def to_dict(self) -> dict:
        return {_external(k): v for k, v in asdict(self).items()}

    def with_(self, **changes) -> "MaterialParams":
        return replace(self, **{_internal(k): v for k, v in changes.items()})


def _internal(key):
    return "lam" if key == "lambda" else key


def _external(key):
    return "lambda" if key == "lam" else key


def load_params(path) -> MaterialParams:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InadmissibleParams(f"cannot read params file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InadmissibleParams("params file must hold a JSON object")
    return MaterialParams.from_dict(data)


def fixture_path(name: str) -> Path:
    if name not in FIXTURES:
        raise KeyError(name)
    return Path(str(resources.files("cosserat_soliton") / "fixtures" / f"{name}.json"))


def fixture(name: str) -> MaterialParams:
    """Parameter sets from the figure captions (plus two helper sets)."""
    return load_params(fixture_path(name))
