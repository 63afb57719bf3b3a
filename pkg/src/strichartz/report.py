"""Common record for verification results."""
import math
from dataclasses import asdict, dataclass, field

import numpy as np


def _clean(v):
    # JSON-safe: numpy scalars to python, inf/nan to strings
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, np.ndarray):
        return [_clean(x) for x in v.tolist()]
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating, float)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(v, complex):
        return [_clean(v.real), _clean(v.imag)]
    return v


@dataclass
class VerificationReport:
    name: str
    lhs: float = float("nan")
    rhs: float = float("nan")
    constant: float = float("nan")
    margin: float = float("nan")
    verdict: bool = False
    meta: dict = field(default_factory=dict)

    @property
    def rel_err(self):
        return self.meta.get("rel_err", float("nan"))

    def to_dict(self):
        return _clean(asdict(self))
