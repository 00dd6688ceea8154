"""Close-to-convexity thresholds for the Jackson function h_nu(z) = z K(z),
K(t) = prod(1 - t/j_n^2).

* nu_star(q): the order where the first zero j_{nu,1}(q) equals 1.
* nu_zero(q): the order where h'_nu(1) = 0, equivalently sum 1/(j_n^2 - 1) = 1.
* h is close-to-convex on the unit disk exactly when nu >= max(nu_star, nu_zero).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from .core import Kind, QBesselParams, _series
from .errors import ConvergenceError, DomainError
from .radii import _table, mittag_leffler_tail
from .zeros import ZeroTarget, first_zero

NU_FLOOR = -1.0 + 1e-9
NU_CEILING = 5.0
NU_TOL = 1e-13
SCAN_STEP = 0.05


class ThresholdError(ConvergenceError):
    """No sign change of a threshold equation on the scanned order range."""


def _params(nu: float, q: float) -> QBesselParams:
    return QBesselParams(Kind.JACKSON2, nu, q)


def tau(nu: float, q: float) -> float:
    p = _params(nu, q)  # validates
    a, b = p.q ** (p.nu + 1.0), p.q ** (p.nu + 2.0)
    return (4.0 * b - 5.0 * a - 4.0 * q + 4.0) / (4.0 * (q - 1.0) * (a - 1.0))


def j1(nu: float, q: float) -> float:
    return first_zero(ZeroTarget.plain(_params(nu, q)), tol=1e-15)


def h_prime_at_one(nu: float, q: float) -> float:
    """h'_nu(1) = sum (-1)^n (n+1) w_n, a single series."""
    s = _series(_params(nu, q), 1.0, ((1.0, 1.0),), power=1)
    return s.mantissa * math.exp(s.log_scale)


def h_at_one(nu: float, q: float) -> float:
    s = _series(_params(nu, q), 1.0, (), power=1)
    return s.mantissa * math.exp(s.log_scale)


@dataclass(frozen=True)
class CriterionValue:
    value: float  # partial sum plus tail bound
    partial: float
    tail: float
    zeros_used: int


def criterion_value(nu: float, q: float) -> CriterionValue:
    """sum_n 1/(j_n^2 - 1) over a zero table, with a tail bound.  Needs j_1 > 1."""
    table = _table(ZeroTarget.plain(_params(nu, q)))
    if not table.zeros[0] > 1.0:
        raise DomainError(f"criterion undefined: j_1 = {table.zeros[0]!r} <= 1")
    partial = math.fsum(1.0 / (s - 1.0) for s in table.squares)
    tail = mittag_leffler_tail(table, 1.0, 1.0, h_variable=True)
    return CriterionValue(partial + tail, partial, tail, len(table))


def criterion_series(nu: float, q: float) -> float:
    """1 - h'(1)/h(1), the same quantity from the power series."""
    return 1.0 - h_prime_at_one(nu, q) / h_at_one(nu, q)


def _scan_grid(lo: float, hi: float) -> list[float]:
    grid = [lo]
    k = math.floor(lo / SCAN_STEP) + 1
    while k * SCAN_STEP < hi:
        grid.append(k * SCAN_STEP)
        k += 1
    grid.append(hi)
    return grid


def _root_in_nu(fn: Callable[[float], float], lo: float, hi: float, what: str) -> tuple[float, int]:
    """First sign change of fn on a grid over [lo, hi], refined by bisection.

    Returns the root and the number of sign changes seen on the grid.
    """
    grid = _scan_grid(lo, hi)
    values = [fn(x) for x in grid]
    changes = [i for i in range(len(grid) - 1) if (values[i] > 0) != (values[i + 1] > 0)]
    if not changes:
        raise ThresholdError(f"{what}: no sign change on [{lo:g}, {hi:g}]")
    i = changes[0]
    a, b, fa = grid[i], grid[i + 1], values[i]
    while b - a > NU_TOL * max(1.0, abs(a)):
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        fm = fn(mid)
        if fm == 0.0:
            return mid, len(changes)
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b), len(changes)


@lru_cache(maxsize=64)
def _thresholds(q: float) -> tuple[float, int, float, int]:
    s, n_s = _root_in_nu(lambda v: j1(v, q) - 1.0, NU_FLOOR, NU_CEILING, f"nu_star(q={q})")
    # h'(1) < 0 at nu_star because beta_1^2 < j_1^2 = 1 there
    z, n_z = _root_in_nu(lambda v: h_prime_at_one(v, q), s, NU_CEILING, f"nu_zero(q={q})")
    return s, n_s, z, n_z


def nu_star(q: float) -> float:
    return _thresholds(float(q))[0]


def nu_zero(q: float) -> float:
    return _thresholds(float(q))[2]


@dataclass(frozen=True)
class CtcDecision:
    nu: float
    q: float
    j1: float
    criterion: Optional[float]
    nu_star: float
    nu_zero: float
    decision: bool  # nu >= max(nu_star, nu_zero)
    direct: bool  # j_1 >= 1 and criterion <= 1, evaluated at nu itself
    note: str = ""


def ctc_decision(nu: float, q: float) -> CtcDecision:
    s, z = nu_star(q), nu_zero(q)
    first = j1(nu, q)
    if first <= 1.0:
        crit, direct, note = None, False, "criterion undefined, decision false"
    else:
        crit = criterion_value(nu, q).value
        direct, note = crit <= 1.0, ""
    return CtcDecision(nu, q, first, crit, s, z, nu >= max(s, z), direct, note)


@dataclass(frozen=True)
class ThresholdReport:
    q: float
    nu_star: float
    nu_zero: float
    j1_at_nu_star: float
    criterion_at_nu_zero: float
    tau_at_nu_star: float
    nu_star_sign_changes: int
    nu_zero_sign_changes: int

    @property
    def nu_zero_ge_nu_star(self) -> bool:
        return self.nu_zero >= self.nu_star

    def as_dict(self) -> dict:
        return {
            "q": self.q,
            "nu_star": self.nu_star,
            "nu_zero": self.nu_zero,
            "threshold": max(self.nu_star, self.nu_zero),
            "j1_at_nu_star": self.j1_at_nu_star,
            "criterion_at_nu_zero": self.criterion_at_nu_zero,
            "tau_at_nu_star": self.tau_at_nu_star,
            "nu_star_sign_changes": self.nu_star_sign_changes,
            "nu_zero_sign_changes": self.nu_zero_sign_changes,
            "exploratory_nu_zero_ge_nu_star": self.nu_zero_ge_nu_star,
        }


def threshold_report(q: float) -> ThresholdReport:
    s, n_s, z, n_z = _thresholds(float(q))
    return ThresholdReport(q, s, z, j1(s, q), criterion_value(z, q).value, tau(s, q), n_s, n_z)
