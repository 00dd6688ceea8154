"""Radii of starlikeness and convexity of the six normalized q-Bessel functions.

Radii for ``h`` are reported in the h-variable (|z| in the domain of h), so at
alpha = 0 the starlike radius of h equals the square of the first zero of
x J'(x) + (2 - nu) J(x).  Starlike radii are found by bisection on fused
Dini-type series; convex radii by bisection on zero sums of the form
1 - sum 2r^2/(z_n^2 - r^2), with the truncated tail bounded.  Each result also
evaluates the defining quotient directly from the series as a second route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from .core import Normalization, QBesselParams, _series
from .errors import DomainError, InternalConsistencyError, UsageError
from .zeros import ZeroTable, ZeroTarget, find_zeros, geometric_tail

RADIUS_TOL = 1e-12
ZERO_TOL = 1e-13
TABLE_SIZE = 30
TABLE_CAP = 480
TAIL_RTOL = 1e-15


class Mode(str, Enum):
    STARLIKE = "starlike"
    CONVEX = "convex"


@dataclass(frozen=True)
class RadiusQuery:
    norm: Normalization
    params: QBesselParams
    alpha: float
    mode: Mode

    def __post_init__(self) -> None:
        object.__setattr__(self, "norm", Normalization(self.norm))
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "alpha", float(self.alpha))
        if not (0.0 <= self.alpha < 1.0):
            raise DomainError(f"alpha must lie in [0, 1), got {self.alpha!r}")
        nu = self.params.nu
        if self.norm is Normalization.F:
            if nu == 0.0:
                raise DomainError("normalization f needs nu != 0")
            if self.mode is Mode.CONVEX and nu < 0:
                raise DomainError("the convexity radius of f is only covered for nu > 0")


@dataclass(frozen=True)
class Bound:
    name: str
    value: float
    holds: bool


@dataclass(frozen=True)
class RadiusResult:
    query: RadiusQuery
    radius: float
    bracket: tuple[float, float]
    residual: float
    equation_tag: str
    variable: str
    tail_bound: float = 0.0
    route_residual: float = math.nan
    bounds: tuple[Bound, ...] = field(default=())

    def bound(self, name: str) -> Bound:
        for b in self.bounds:
            if b.name == name:
                return b
        raise KeyError(name)

    def as_dict(self) -> dict:
        q = self.query
        return {
            "norm": q.norm.value,
            "kind": q.params.kind.value,
            "nu": q.params.nu,
            "q": q.params.q,
            "alpha": q.alpha,
            "mode": q.mode.value,
            "radius": self.radius,
            "bracket_lo": self.bracket[0],
            "bracket_hi": self.bracket[1],
            "residual": self.residual,
            "route_residual": self.route_residual,
            "tail_bound": self.tail_bound,
            "variable": self.variable,
            "equation": self.equation_tag,
            "bounds": {b.name: {"value": b.value, "holds": b.holds} for b in self.bounds},
        }


# ---------------------------------------------------------------------------
# helpers


def _table(target: ZeroTarget, n: int = TABLE_SIZE) -> ZeroTable:
    """Zero table long enough that the dropped part of sum 1/z_n^2 is negligible."""
    table = find_zeros(target, n, ZERO_TOL)
    while n < TABLE_CAP:
        total = math.fsum(z**-2 for z in table.zeros)
        if geometric_tail(table.zeros, 2) <= TAIL_RTOL * total:
            break
        n *= 2
        table = find_zeros(target, n, ZERO_TOL)
    return table


def _value(params: QBesselParams, x: float, factors, power: int = 2, shift: int = 0,
           alternating: bool = True) -> float:
    s = _series(params, x, factors, power, shift, alternating)
    return s.mantissa * math.exp(s.log_scale)


def _sign(params: QBesselParams, x: float, factors, power: int = 2, alternating: bool = True) -> float:
    m = _series(params, x, factors, power, 0, alternating).mantissa
    return (m > 0) - (m < 0)


def _bisect(sign: Callable[[float], float], lo: float, hi: float,
            tol: float = RADIUS_TOL) -> tuple[float, float]:
    """Bisection for a function positive at ``lo`` and negative at ``hi``."""
    for _ in range(400):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        s = sign(mid)
        if s > 0:
            lo = mid
        elif s < 0:
            hi = mid
        else:
            return mid, mid
    return lo, hi


def mittag_leffler_tail(table: ZeroTable, r: float, weight: float = 2.0,
                        h_variable: bool = False) -> float:
    """Upper bound on sum_{n>N} weight*t/(z_n^2 - t), t = r^2 (or r in the h-variable).

    Uses sum_{n>N} 1/z_n^2 <= z_N^-2 rho/(1-rho), rho = (z_{N-1}/z_N)^2, and
    z_{N+1}^2 >= z_N^2/rho.
    """
    if len(table) < 20:
        raise UsageError(f"need at least 20 zeros, table has {len(table)}")
    t = r if h_variable else r * r
    s = table.squares
    if not (0.0 <= t < s[0]):
        raise UsageError("r must lie below the first zero of the table")
    if t == 0.0:
        return 0.0
    rho = s[-2] / s[-1]
    return weight * t * geometric_tail(table.zeros, 2) / (1.0 - t * rho / s[-1])


def mittag_leffler_sum(table: ZeroTable, t: float, weight: float = 2.0) -> float:
    """sum_n weight*t/(z_n^2 - t) over the table (t in squared units)."""
    return math.fsum(weight * t / (s - t) for s in table.squares)


def _ml_sign(fn: Callable[[float], float], s1: float):
    def sign(t: float) -> float:
        if t >= s1:
            return -1.0
        v = fn(t)
        return (v > 0) - (v < 0)
    return sign


# ---------------------------------------------------------------------------
# starlikeness


def radius_starlike(query: RadiusQuery) -> RadiusResult:
    if query.mode is not Mode.STARLIKE:
        raise UsageError("radius_starlike needs mode=starlike")
    p, a, nu = query.params, query.alpha, query.params.nu
    plain = _table(ZeroTarget.plain(p))
    j1 = plain.zeros[0]

    if query.norm is Normalization.F and nu < 0:
        return _starlike_f_imaginary(query, plain)

    if query.norm is Normalization.H:
        # (1-alpha) K(t) + t K'(t) with K(t) = calJ(sqrt t)
        factors = ((1.0, 1.0 - a),)
        lo, hi = 0.0, j1 * j1
        power = 1
        tag = "r*J'(r) - (2*alpha+nu-2)*J(r) = 0, solved at t = r^2"
        variable = "h"
        kappa = 1.0
    else:
        c = -a * nu if query.norm is Normalization.F else 1.0 - a - nu
        factors = ((2.0, nu + c),)
        lo, hi = 0.0, j1
        power = 2
        kappa = nu if query.norm is Normalization.F else 1.0
        tag = ("r*J'(r) - alpha*nu*J(r) = 0" if query.norm is Normalization.F
               else "r*J'(r) - (alpha+nu-1)*J(r) = 0")
        variable = "z"

    sign = lambda x: _sign(p, x, factors, power)  # noqa: E731
    if not (sign(lo) > 0 and sign(hi) < 0):
        raise InternalConsistencyError(
            f"no sign change of the {query.norm.value}-starlike equation on (0, first zero)")
    lo, hi = _bisect(sign, lo, hi)
    r = 0.5 * (lo + hi)

    # residual of the starlike functional itself: fused series / calJ
    cal = _value(p, r, (), power)
    residual = _value(p, r, factors, power) / (kappa * cal)
    # zero-sum route
    if query.norm is Normalization.H:
        route = 1.0 - mittag_leffler_sum(plain, r, 1.0) - a
        tail = mittag_leffler_tail(plain, r, 1.0, h_variable=True)
    else:
        scale = 1.0 / nu if query.norm is Normalization.F else 1.0
        route = 1.0 - scale * mittag_leffler_sum(plain, r * r) - a
        tail = abs(scale) * mittag_leffler_tail(plain, r)
    bound_value = j1 * j1 if variable == "h" else j1
    bounds = (Bound("first_zero_of_J" + ("_squared" if variable == "h" else ""), bound_value,
                    r < bound_value),)
    return RadiusResult(query, r, (lo, hi), residual, tag, variable, tail, route, bounds)


def _starlike_f_imaginary(query: RadiusQuery, plain: ZeroTable) -> RadiusResult:
    """nu in (-1, 0): the starlike radius of f lives on the imaginary axis.

    On z = i r the quotient Q(r) = i r J'(i r)/J(i r) is a ratio of power series
    with positive coefficients, increasing from nu; the radius solves Q(r) = alpha*nu.
    """
    p, a, nu = query.params, query.alpha, query.params.nu
    fused = ((2.0, nu * (1.0 - a)),)
    sign = lambda r: _sign(p, r, fused, 2, alternating=False)  # noqa: E731
    if not sign(0.0) < 0:
        raise InternalConsistencyError("imaginary-axis starlike equation is not negative at 0")
    lo, hi = 0.0, 1.0
    for _ in range(2000):
        if sign(hi) > 0:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise InternalConsistencyError("no sign change found on the imaginary axis")
    # bisection expects positive at lo
    lo, hi = _bisect(lambda r: -sign(r), lo, hi)
    r = 0.5 * (lo + hi)

    def quotient(x: float) -> float:
        num = _value(p, x, ((2.0, nu),), 2, alternating=False)
        den = _value(p, x, (), 2, alternating=False)
        return num / den

    qs = [quotient(x) for x in (max(lo, 1e-300) * 0.5, r, 2.0 * hi)]
    if not (qs[0] < qs[1] < qs[2]):
        raise InternalConsistencyError("imaginary-axis quotient is not increasing across the bracket")
    residual = quotient(r) - a * nu
    t = r * r
    route = 1.0 + (1.0 / nu) * math.fsum(2.0 * t / (s + t) for s in plain.squares) - a
    tail = abs(2.0 * t / nu) * geometric_tail(plain.zeros, 2)
    j1 = plain.zeros[0]
    bounds = (Bound("first_zero_of_J", j1, r < j1),)
    return RadiusResult(query, r, (lo, hi), residual,
                        "i*r*J'(i*r) - alpha*nu*J(i*r) = 0", "z", tail, route, bounds)


# ---------------------------------------------------------------------------
# convexity


def radius_convex(query: RadiusQuery) -> RadiusResult:
    if query.mode is not Mode.CONVEX:
        raise UsageError("radius_convex needs mode=convex")
    p, a, nu = query.params, query.alpha, query.params.nu
    plain = _table(ZeroTarget.plain(p))
    j1 = plain.zeros[0]

    if query.norm is Normalization.F:
        deriv = _table(ZeroTarget.deriv(p))
        jp1 = deriv.zeros[0]
        lam = 1.0 / nu - 1.0

        def u(t: float) -> float:
            return 1.0 - lam * mittag_leffler_sum(plain, t) - mittag_leffler_sum(deriv, t) - a

        lo, hi = _bisect(lambda r: _ml_sign(u, jp1 * jp1)(r * r), 0.0, jp1)
        r = 0.5 * (lo + hi)
        residual = u(r * r)
        tail = abs(lam) * mittag_leffler_tail(plain, r) + mittag_leffler_tail(deriv, r)
        route = _series_convex_f(p, r) - a
        bounds = (Bound("first_zero_of_Jprime", jp1, r < jp1),
                  Bound("Jprime_below_J", j1, jp1 < j1))
        tag = "1 + r J''/J' + (1/nu - 1) r J'/J = alpha"
        return RadiusResult(query, r, (lo, hi), residual, tag, "z", tail, route, bounds)

    if query.norm is Normalization.G:
        dini = _table(ZeroTarget.dini(p, 1.0 - nu))
        a1 = dini.zeros[0]

        def v(t: float) -> float:
            return 1.0 - mittag_leffler_sum(dini, t) - a

        lo, hi = _bisect(lambda r: _ml_sign(v, a1 * a1)(r * r), 0.0, a1)
        r = 0.5 * (lo + hi)
        residual = v(r * r)
        tail = mittag_leffler_tail(dini, r)
        route = _series_convex_gh(p, r, Normalization.G) - a
        bounds = (Bound("first_dini_1_minus_nu_zero", a1, r < a1),
                  Bound("dini_zero_below_J", j1, a1 < j1))
        tag = "1 - nu + r((2-nu)J' + r J'')/((1-nu)J + r J') = alpha"
        return RadiusResult(query, r, (lo, hi), residual, tag, "z", tail, route, bounds)

    dini = _table(ZeroTarget.dini(p, 2.0 - nu))
    b1 = dini.zeros[0]
    b1sq = b1 * b1

    # h'(t) = prod(1 - t/beta_n^2), so 1 + t h''/h' = 1 - sum t/(beta_n^2 - t)
    def w(t: float) -> float:
        return 1.0 - mittag_leffler_sum(dini, t, 1.0) - a

    lo, hi = _bisect(_ml_sign(w, b1sq), 0.0, b1sq)
    r = 0.5 * (lo + hi)
    residual = w(r)
    tail = mittag_leffler_tail(dini, r, 1.0, h_variable=True)
    route = _series_convex_gh(p, r, Normalization.H) - a
    bounds = (Bound("first_dini_2_minus_nu_zero_squared", b1sq, r < b1sq),
              Bound("first_dini_2_minus_nu_zero", b1, r < b1),
              Bound("dini_zero_below_J", j1, b1 < j1))
    tag = "1 - nu/2 + (sqrt r/2)((3-nu)J' + sqrt r J'')/((2-nu)J + sqrt r J') = alpha, at J(sqrt r)"
    return RadiusResult(query, r, (lo, hi), residual, tag, "h", tail, route, bounds)


def _series_convex_f(p: QBesselParams, r: float) -> float:
    """1 + r f''/f' = 1 + r D'/D + (1/nu - 1) r calJ'/calJ with D = r calJ' + nu calJ."""
    nu = p.nu
    cal = _value(p, r, ())
    cal1 = _value(p, r, ((2.0, 0.0),), 2, 1)
    d = _value(p, r, ((2.0, nu),))
    d1 = _value(p, r, ((2.0, nu), (2.0, 0.0)), 2, 1)
    return 1.0 + r * d1 / d + (1.0 / nu - 1.0) * r * cal1 / cal


def _series_convex_gh(p: QBesselParams, r: float, norm: Normalization) -> float:
    """1 + r g''/g' (or the h analogue) from the fused derivative series."""
    power = 2 if norm is Normalization.G else 1
    first = _value(p, r, ((float(power), 1.0),), power, 0)
    second = _value(p, r, ((float(power), 1.0), (float(power), 0.0)), power, 1)
    return 1.0 + r * second / first


def radius(query: RadiusQuery) -> RadiusResult:
    if query.mode is Mode.STARLIKE:
        return radius_starlike(query)
    return radius_convex(query)
