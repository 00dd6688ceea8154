"""Positive zeros of calJ, of J' and of the Dini combinations z J' + c J.

All searches run on the even entire forms

    D_c(x) = sum_n (-1)^n (2n + nu + c) w_n x^(2n) = x calJ'(x) + (nu + c) calJ(x)

(PlainJ is calJ itself, DerivJ is c = 0), which are free of the z^nu factor
and of any branch.  Zeros are bracketed on a geometric grid and refined by
bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Optional

from .core import QBesselParams, _log_weight_step, _series
from .errors import DomainError, InternalConsistencyError, UsageError, ZeroNotFoundError

DEFAULT_TOL = 1e-10
BISECTION_CAP = 200
SCAN_CUTOFF = 1e250
MISS_RTOL = 1e-9
TAIL_SLACK = 0.01


class Family(str, Enum):
    PLAIN_J = "plain"
    DERIV_J = "deriv"
    DINI = "dini"


@dataclass(frozen=True)
class ZeroTarget:
    params: QBesselParams
    family: Family = Family.PLAIN_J
    c: Optional[float] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        if self.family is Family.DINI:
            if self.c is None:
                raise UsageError("Dini family needs the constant c")
            object.__setattr__(self, "c", float(self.c))
            if self.c + self.params.nu <= 0:
                raise DomainError(f"Dini zeros need c + nu > 0, got c={self.c}, nu={self.params.nu}")
        else:
            object.__setattr__(self, "c", None)
            if self.family is Family.DERIV_J and self.params.nu <= 0:
                raise DomainError("zeros of J' are only covered for nu > 0")

    @classmethod
    def plain(cls, params: QBesselParams) -> "ZeroTarget":
        return cls(params, Family.PLAIN_J)

    @classmethod
    def deriv(cls, params: QBesselParams) -> "ZeroTarget":
        return cls(params, Family.DERIV_J)

    @classmethod
    def dini(cls, params: QBesselParams, c: float) -> "ZeroTarget":
        return cls(params, Family.DINI, c)

    @property
    def factors(self) -> tuple[tuple[float, float], ...]:
        if self.family is Family.PLAIN_J:
            return ()
        if self.family is Family.DERIV_J:
            return ((2.0, self.params.nu),)
        return ((2.0, self.params.nu + self.c),)

    def coefficient(self, n: int) -> float:
        """The factor multiplying (-1)^n w_n x^(2n) in the even form."""
        if self.family is Family.PLAIN_J:
            return 1.0
        return 2.0 * n + self.params.nu + (self.c or 0.0)

    def label(self) -> str:
        if self.family is Family.DINI:
            return f"dini(c={self.c:.17g})"
        return self.family.value


@dataclass(frozen=True)
class ZeroTable:
    target: ZeroTarget
    zeros: tuple[float, ...]
    brackets: tuple[tuple[float, float], ...]
    tol: float
    sign_changes: tuple[bool, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.zeros)

    @property
    def squares(self) -> tuple[float, ...]:
        return tuple(z * z for z in self.zeros)


def even_form_sign(target: ZeroTarget, x: float) -> float:
    """Sign (+1, -1 or 0) of the target's even entire form at real x."""
    s = _series(target.params, x, target.factors, 2, 0)
    if s.mantissa > 0:
        return 1.0
    if s.mantissa < 0:
        return -1.0
    return 0.0


def even_form_value(target: ZeroTarget, x: float) -> float:
    s = _series(target.params, x, target.factors, 2, 0)
    return s.mantissa * math.exp(s.log_scale)


def family_rayleigh(target: ZeroTarget) -> tuple[float, float]:
    """(sum 1/z_n^2, sum 1/z_n^4) from the first Maclaurin coefficients.

    The normalized even form D(x)/D(0) = prod(1 - x^2/z_n^2), so the power sums
    follow from its x^2 and x^4 coefficients.
    """
    p = target.params
    w1 = math.exp(_log_weight_step(p, 1))
    w2 = w1 * math.exp(_log_weight_step(p, 2))
    a0, a1, a2 = (target.coefficient(n) for n in range(3))
    e1 = a1 * w1 / a0
    e2 = a2 * w2 / a0
    return e1, e1 * e1 - 2.0 * e2


def _bisect(target: ZeroTarget, lo: float, hi: float, s_lo: float, tol: float) -> tuple[float, float]:
    for _ in range(BISECTION_CAP):
        if hi - lo < tol * max(1.0, lo):
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        s_mid = even_form_sign(target, mid)
        if s_mid == 0.0:
            return mid, mid
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


@lru_cache(maxsize=1024)
def _find_zeros(target: ZeroTarget, n_max: int, tol: float, x0: float) -> ZeroTable:
    rho = target.params.q ** -0.25
    zeros: list[float] = []
    brackets: list[tuple[float, float]] = []
    flags: list[bool] = []
    x_prev = 0.0
    s_prev = even_form_sign(target, 0.0)
    x = x0
    while len(zeros) < n_max:
        if x > SCAN_CUTOFF:
            raise ZeroNotFoundError(
                f"zero {len(zeros) + 1} of {target.label()} not found below cutoff {SCAN_CUTOFF:g}")
        s = even_form_sign(target, x)
        if s == 0.0:
            zeros.append(x)
            brackets.append((x, x))
            flags.append(False)
            s_prev = -s_prev
            x_prev = x
        elif s != s_prev:
            lo, hi = _bisect(target, x_prev, x, s_prev, tol)
            zeros.append(0.5 * (lo + hi))
            brackets.append((lo, hi))
            flags.append(lo < hi)
            s_prev = s
            x_prev = x
        else:
            x_prev = x
        x *= rho
    return ZeroTable(target, tuple(zeros), tuple(brackets), tol, tuple(flags))


def find_zeros(target: ZeroTarget, n_max: int, tol: float = DEFAULT_TOL,
               x0: Optional[float] = None, check: bool = True) -> ZeroTable:
    """First ``n_max`` positive zeros of the target, each bracketed by a sign change.

    With ``check`` and at least 20 zeros, the table is compared against the
    closed-form sum of 1/z_n^2 and an InternalConsistencyError is raised when a
    zero appears to be missing.
    """
    if n_max < 1:
        raise UsageError("n_max must be at least 1")
    if tol <= 0:
        raise UsageError("tol must be positive")
    table = _find_zeros(target, int(n_max), float(tol), float(x0 if x0 is not None else tol))
    if check and n_max >= 20:
        report = zero_count_check(table, family_rayleigh(target)[0], plain_only=False)
        if report.status != "OK":
            raise InternalConsistencyError(
                f"Rayleigh completeness test failed for {target.label()}: {report}")
    return table


def first_zero(target: ZeroTarget, tol: float = DEFAULT_TOL) -> float:
    return find_zeros(target, 1, tol).zeros[0]


@dataclass(frozen=True)
class CountReport:
    partial_sum: float
    tail: float
    closed_form: float
    deficit: float
    status: str  # OK, MISSED_ZERO or SPURIOUS_ZERO


def geometric_tail(values: tuple[float, ...], power: int) -> float:
    """Majorant for sum_{n>N} v_n^-power from the last ratio of an increasing sequence."""
    if len(values) < 2:
        raise UsageError("need at least two values for a ratio tail")
    r = (values[-2] / values[-1]) ** power
    if not r < 1.0:
        raise InternalConsistencyError("zeros are not strictly increasing")
    return values[-1] ** -power * r / (1.0 - r)


def zero_count_check(table: ZeroTable, sigma2_closed: float, plain_only: bool = True) -> CountReport:
    """Compare sum 1/z_n^2 (+ tail) over the table with a closed-form value."""
    if plain_only and table.target.family is not Family.PLAIN_J:
        raise UsageError("zero_count_check applies to PlainJ tables")
    if len(table) < 20:
        raise UsageError(f"need at least 20 zeros, table has {len(table)}")
    partial = math.fsum(z**-2 for z in table.zeros)
    tail = geometric_tail(table.zeros, 2)
    # the ratio tail is a heuristic majorant; allow it a small relative error
    slack = MISS_RTOL * sigma2_closed + TAIL_SLACK * tail
    deficit = sigma2_closed - partial
    if deficit > tail + slack:
        status = "MISSED_ZERO"
    elif deficit < -slack:
        status = "SPURIOUS_ZERO"
    else:
        status = "OK"
    return CountReport(partial, tail, sigma2_closed, deficit, status)
