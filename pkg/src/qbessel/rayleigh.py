"""q-Rayleigh sums sigma(2m) = sum_n 1/z_n^(2m) of the zeros of J^(2) and J^(3)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .core import Kind, QBesselParams
from .errors import InternalConsistencyError, UsageError
from .zeros import DEFAULT_TOL, Family, ZeroTable, ZeroTarget, find_zeros, geometric_tail


def sigma2_closed(params: QBesselParams) -> float:
    q, nu = params.q, params.nu
    qn1 = q ** (nu + 1.0)
    if params.jackson:
        return qn1 / (4.0 * (1.0 - q) * (1.0 - qn1))
    return q / ((1.0 - q) * (1.0 - qn1))


def sigma4_closed(params: QBesselParams) -> float:
    q, nu = params.q, params.nu
    a, b = 1.0 - q ** (nu + 1.0), 1.0 - q ** (nu + 2.0)
    if params.jackson:
        val = (q ** (2 * nu + 2) / (16.0 * (1 - q) ** 2 * a * a)
               - q ** (2 * nu + 4) / (8.0 * (1 - q) * (1 - q * q) * a * b))
    else:
        val = (q * q / ((1 - q) ** 2 * a * a)
               - 2.0 * q**3 / ((1 - q) * (1 - q * q) * a * b))
    if not val > 0:
        raise InternalConsistencyError(f"sigma(4) closed form is not positive: {val!r}")
    return val


@dataclass(frozen=True)
class NumericSum:
    value: float  # partial sum plus tail majorant
    partial: float
    tail: float
    zeros_used: int


def sigma_numeric(table: ZeroTable, m: int) -> NumericSum:
    if m not in (1, 2):
        raise UsageError("only m = 1, 2 are supported")
    if table.target.family is not Family.PLAIN_J:
        raise UsageError("Rayleigh sums are taken over PlainJ tables")
    if len(table) < 20:
        raise UsageError(f"need at least 20 zeros, table has {len(table)}")
    partial = math.fsum(z ** (-2 * m) for z in table.zeros)
    tail = geometric_tail(table.zeros, 2 * m)
    return NumericSum(partial + tail, partial, tail, len(table))


def euler_rayleigh_interval(params: QBesselParams) -> tuple[float, float]:
    """(1/sigma(2), sigma(2)/sigma(4)), which strictly contains the first zero squared."""
    s2, s4 = sigma2_closed(params), sigma4_closed(params)
    lo, hi = 1.0 / s2, s2 / s4
    if not lo < hi:
        raise InternalConsistencyError(f"Euler-Rayleigh interval is empty: ({lo}, {hi})")
    return lo, hi


@dataclass(frozen=True)
class RayleighReport:
    params: QBesselParams
    sigma2_closed: float
    sigma4_closed: float
    sigma2_numeric: NumericSum
    sigma4_numeric: NumericSum
    euler_rayleigh_interval: tuple[float, float]
    first_zero: float

    @property
    def first_zero_squared_inside(self) -> bool:
        lo, hi = self.euler_rayleigh_interval
        return lo < self.first_zero**2 < hi

    def as_dict(self) -> dict:
        return {
            "kind": self.params.kind.value,
            "nu": self.params.nu,
            "q": self.params.q,
            "sigma2_closed": self.sigma2_closed,
            "sigma2_numeric": self.sigma2_numeric.value,
            "sigma2_tail": self.sigma2_numeric.tail,
            "sigma4_closed": self.sigma4_closed,
            "sigma4_numeric": self.sigma4_numeric.value,
            "sigma4_tail": self.sigma4_numeric.tail,
            "zeros_used": self.sigma2_numeric.zeros_used,
            "euler_rayleigh_lo": self.euler_rayleigh_interval[0],
            "euler_rayleigh_hi": self.euler_rayleigh_interval[1],
            "first_zero": self.first_zero,
            "first_zero_squared_inside": self.first_zero_squared_inside,
        }


def rayleigh_report(params: QBesselParams, n_zeros: int = 30, tol: float = DEFAULT_TOL) -> RayleighReport:
    table = find_zeros(ZeroTarget.plain(params), n_zeros, tol)
    return RayleighReport(
        params,
        sigma2_closed(params),
        sigma4_closed(params),
        sigma_numeric(table, 1),
        sigma_numeric(table, 2),
        euler_rayleigh_interval(params),
        table.zeros[0],
    )


def _scaled_sigma2(kind: Kind, nu: float, q: float) -> float:
    p = QBesselParams(kind, nu, q)
    if p.jackson:
        return (1 - q) ** 2 * sigma2_closed(p)
    return ((1 - q) / 2) ** 2 * sigma2_closed(p)


def classical_limit_trend(kind: Kind, nu: float, q_sequence: Iterable[float],
                          identity_tol: float = 1e-14) -> list[dict]:
    """Rescaled first Rayleigh sums along q, next to the Bessel value 1/(4(nu+1)).

    The rescaled sum has the exact form q^(nu+1)(1-q)/(4(1-q^(nu+1))) (Jackson)
    or q(1-q)/(4(1-q^(nu+1))) (Hahn-Exton); that identity is checked at every q.
    Whether the sequence approaches the limit monotonically is reported only.
    """
    kind = Kind(kind)
    target = 1.0 / (4.0 * (nu + 1.0))
    rows = []
    prev_gap: Optional[float] = None
    last_q = -math.inf
    for q in q_sequence:
        if not q > last_q:
            raise UsageError("q_sequence must be increasing")
        last_q = q
        scaled = _scaled_sigma2(kind, nu, q)
        num = q ** (nu + 1) if kind is Kind.JACKSON2 else q
        exact = num * (1 - q) / (4.0 * (1 - q ** (nu + 1)))
        if abs(scaled - exact) > identity_tol * max(1.0, abs(exact)):
            raise InternalConsistencyError(f"rescaled sigma(2) identity failed at q={q}")
        gap = abs(scaled - target)
        rows.append({
            "q": q,
            "scaled_sigma2": scaled,
            "exact_form": exact,
            "classical_limit": target,
            "relative_gap": gap / target,
            "approaching": None if prev_gap is None else gap < prev_gap,
        })
        prev_gap = gap
    return rows
