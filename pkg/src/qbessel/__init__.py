"""Jackson and Hahn-Exton q-Bessel functions: zeros, Rayleigh sums, and the
radii of starlikeness and convexity of their normalized forms."""

from .core import (
    Kind,
    Normalization,
    QBesselParams,
    SeriesValue,
    c_nu,
    eval_calJ,
    eval_dini,
    eval_hadamard_truncated,
    eval_J,
    eval_normalized,
    qpochhammer,
)
from .errors import (
    BranchError,
    ConvergenceError,
    DomainError,
    InternalConsistencyError,
    QBesselError,
    UsageError,
    ZeroNotFoundError,
)

__version__ = "0.1.0"

__all__ = [
    "BranchError", "ConvergenceError", "DomainError", "InternalConsistencyError", "Kind", "Normalization",
    "QBesselError", "QBesselParams", "SeriesValue", "UsageError", "ZeroNotFoundError", "c_nu", "eval_J",
    "eval_calJ", "eval_dini", "eval_hadamard_truncated", "eval_normalized", "qpochhammer",
]
