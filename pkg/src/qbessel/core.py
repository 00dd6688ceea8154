"""q-Pochhammer symbols and the Jackson / Hahn-Exton q-Bessel series.

Every series here has the shape

    sum_n (-1)^n w_n * P(n) * z^(p*n - s)

with the q-Bessel weights ``w_n`` and a product ``P`` of linear factors in
``n``.  Terms are accumulated in log-magnitude form and rescaled by the
largest term, so values near the large zeros (where individual terms reach
q^(-n^2)) neither overflow nor lose their sign.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Union

from .errors import BranchError, ConvergenceError, DomainError, UsageError

Number = Union[float, complex]

Q_MAX = 0.99
MAX_TERMS = 10_000
SERIES_TOL = 1e-16


class Kind(str, Enum):
    JACKSON2 = "jackson2"
    HAHN_EXTON3 = "hahnexton3"


class Normalization(str, Enum):
    F = "f"
    G = "g"
    H = "h"


@dataclass(frozen=True)
class QBesselParams:
    """The triple (kind, nu, q) that fixes one q-Bessel function."""

    kind: Kind
    nu: float
    q: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", Kind(self.kind))
        nu, q = float(self.nu), float(self.q)
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "q", q)
        if not math.isfinite(nu) or nu <= -1.0:
            raise DomainError(f"order nu must satisfy nu > -1, got {nu!r}")
        if not (0.0 < q <= Q_MAX):
            raise DomainError(f"base q must satisfy 0 < q <= {Q_MAX}, got {q!r}")

    @property
    def jackson(self) -> bool:
        return self.kind is Kind.JACKSON2


@dataclass(frozen=True)
class SeriesValue:
    """A truncated series value with its certified absolute truncation bound.

    ``value`` is ``mantissa * exp(log_scale)``; it is +-inf when that
    overflows binary64, in which case ``mantissa``/``log_scale`` still carry
    the result.
    """

    value: Number
    terms_used: int
    tail_bound: float
    mantissa: Number = 1.0
    log_scale: float = 0.0


def _scaled_to_float(mantissa: Number, log_scale: float) -> Number:
    if mantissa == 0:
        return mantissa
    try:
        return mantissa * math.exp(log_scale)
    except OverflowError:
        if isinstance(mantissa, complex):
            return complex(math.copysign(math.inf, mantissa.real) if mantissa.real else 0.0,
                           math.copysign(math.inf, mantissa.imag) if mantissa.imag else 0.0)
        return math.copysign(math.inf, mantissa)


def _safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


# ---------------------------------------------------------------------------
# q-Pochhammer


def qpochhammer(a: float, q: float, n: float = math.inf, tol: float = 1e-15) -> SeriesValue:
    """(a;q)_n for finite ``n``; (a;q)_inf with a certified tail when ``n`` is inf.

    The dropped factors satisfy |log prod_{k>K}(1 - a q^(k-1))| <= s/(1 - |a| q^K)
    with s = |a| q^K / (1 - q), which gives the reported absolute bound.
    """
    if not (0.0 < q < 1.0):
        raise DomainError(f"q-Pochhammer requires 0 < q < 1, got q={q!r}")
    if n != math.inf:
        if n < 0 or int(n) != n:
            raise DomainError(f"n must be a nonnegative integer or inf, got {n!r}")
        prod = 1.0
        for k in range(int(n)):
            prod *= 1.0 - a * q**k
        return SeriesValue(prod, int(n), 0.0, prod, 0.0)
    if tol <= 0:
        raise DomainError("tol must be positive for the infinite product")
    prod = 1.0
    qk = 1.0  # q^K after K factors
    for k in range(MAX_TERMS):
        prod *= 1.0 - a * qk
        qk *= q
        x = abs(a) * qk
        if x < 0.5:
            log_bound = (x / (1.0 - q)) / (1.0 - x)
            tail = abs(prod) * math.expm1(log_bound)
            if tail < tol:
                return SeriesValue(prod, k + 1, tail, prod, 0.0)
    raise ConvergenceError("q-Pochhammer product did not converge")


def c_nu(params: QBesselParams) -> float:
    """c_nu(q) = (q;q)_inf / (q^(nu+1);q)_inf."""
    q = params.q
    num = qpochhammer(q, q, math.inf, 1e-17).value
    den = qpochhammer(q ** (params.nu + 1.0), q, math.inf, 1e-17).value
    return num / den


def _log_c_nu(params: QBesselParams) -> float:
    return math.log(c_nu(params))


# ---------------------------------------------------------------------------
# series engine


Factors = Sequence[tuple[float, float]]


def _log_weight_step(params: QBesselParams, n: int) -> float:
    """log(w_n / w_{n-1}) for n >= 1."""
    q, nu = params.q, params.nu
    lq = math.log(q)
    den = math.log1p(-q**n) + math.log1p(-(q ** (n + nu)))
    if params.jackson:
        return (2 * n - 1 + nu) * lq - math.log(4.0) - den
    return n * lq - den


def _first_positive_index(factors: Factors) -> int:
    """Smallest n0 with every factor a*n + b > 0 (or constant) for all n >= n0."""
    n0 = 0
    for a, b in factors:
        if a < 0:
            raise UsageError("series factors must have nonnegative slope")
        if a > 0 and -b / a >= 0:
            n0 = max(n0, math.floor(-b / a) + 1)
    return n0


@dataclass(frozen=True)
class _Scaled:
    mantissa: Number
    log_scale: float
    log_tail: float
    terms: int

    def to_series_value(self) -> SeriesValue:
        return SeriesValue(
            _scaled_to_float(self.mantissa, self.log_scale),
            self.terms,
            _safe_exp(self.log_tail) if self.log_tail > -math.inf else 0.0,
            self.mantissa,
            self.log_scale,
        )


def _series(
    params: QBesselParams,
    z: Number,
    factors: Factors = (),
    power: int = 2,
    shift: int = 0,
    alternating: bool = True,
    tol: float = SERIES_TOL,
) -> _Scaled:
    """Sum  sum_n (+-1)^n w_n prod(a n + b) z^(power n - shift)  in scaled form.

    Stops once the geometric majorant of the remaining terms is below
    ``tol * max(1, largest term)``.  The term ratio is decreasing in ``n``
    beyond the point where all factors are positive, so the majorant
    |T_{n+1}| / (1 - |T_{n+2}/T_{n+1}|) is a certified bound.
    """
    is_complex = isinstance(z, complex)
    if is_complex and z.imag == 0.0:
        z, is_complex = z.real, False
    if z == 0:
        # only the n with power*n == shift survives
        if shift % power or shift < 0:
            return _Scaled(0.0, 0.0, -math.inf, 1)
        n = shift // power
        lw = 0.0
        for k in range(1, n + 1):
            lw += _log_weight_step(params, k)
        f = 1.0
        for a, b in factors:
            f *= a * n + b
        sign = -1.0 if (alternating and n % 2) else 1.0
        val = sign * f * math.exp(lw)
        return _Scaled(complex(val) if is_complex else val, 0.0, -math.inf, n + 1)

    log_abs = math.log(abs(z))
    if is_complex:
        unit = z / abs(z)
    else:
        unit = 1.0 if z > 0 else -1.0
    n0 = _first_positive_index(factors)
    log_tol = math.log(tol)

    logw = [0.0]

    def term(n: int) -> tuple[float, float]:
        while len(logw) <= n:
            logw.append(logw[-1] + _log_weight_step(params, len(logw)))
        f = 1.0
        for a, b in factors:
            f *= a * n + b
        if f == 0.0:
            return -math.inf, 0.0
        e = power * n - shift
        sign = -1.0 if (alternating and n % 2) else 1.0
        if f < 0:
            sign = -sign
        return logw[n] + math.log(abs(f)) + e * log_abs, sign

    memo: dict[int, tuple[float, float]] = {}

    def get(n: int) -> tuple[float, float]:
        if n not in memo:
            memo[n] = term(n)
        return memo[n]

    biggest = -math.inf
    n = 0
    while True:
        if n >= MAX_TERMS:
            raise ConvergenceError(f"series did not converge within {MAX_TERMS} terms")
        biggest = max(biggest, get(n)[0])
        if n + 1 >= n0:
            l1 = get(n + 1)[0]
            l2 = get(n + 2)[0]
            if l1 == -math.inf:
                log_tail = -math.inf
                break
            if l2 < l1:
                ratio = math.exp(l2 - l1)
                log_tail = l1 - math.log1p(-ratio)
                if log_tail - max(0.0, biggest, l1) <= log_tol:
                    break
        n += 1
    logs = [memo[k][0] for k in range(n + 1)]
    signs = [memo[k][1] for k in range(n + 1)]

    scale = biggest if biggest > -math.inf else 0.0
    if is_complex:
        acc: Number = 0j
        for k, (l, s) in enumerate(zip(logs, signs)):
            if l > -math.inf:
                acc += s * math.exp(l - scale) * unit ** (power * k - shift)
    else:
        acc = 0.0
        odd = unit < 0
        for k, (l, s) in enumerate(zip(logs, signs)):
            if l > -math.inf:
                t = s * math.exp(l - scale)
                if odd and (power * k - shift) % 2:
                    t = -t
                acc += t
    return _Scaled(acc, scale, log_tail, len(logs))


def _falling(p: int, d: int, offset: float = 0.0) -> tuple[tuple[float, float], ...]:
    """Linear factors of the falling factorial (p n + offset)_d."""
    return tuple((float(p), offset - i) for i in range(d))


def _check_order(deriv_order: int) -> None:
    if deriv_order not in (0, 1, 2):
        raise UsageError(f"deriv_order must be 0, 1 or 2, got {deriv_order!r}")


# ---------------------------------------------------------------------------
# public evaluators


def eval_calJ(params: QBesselParams, z: Number, deriv_order: int = 0,
              tol: float = SERIES_TOL) -> SeriesValue:
    """The even entire function calJ(z) = sum (-1)^n w_n z^(2n), or a derivative."""
    _check_order(deriv_order)
    return _series(params, z, _falling(2, deriv_order), 2, deriv_order, tol=tol).to_series_value()


def _log_prefactor(params: QBesselParams) -> float:
    """log of 1/(2^nu c_nu) (Jackson) or 1/c_nu (Hahn-Exton)."""
    lp = -_log_c_nu(params)
    if params.jackson:
        lp -= params.nu * math.log(2.0)
    return lp


def _times_z_power(params: QBesselParams, z: Number, s: _Scaled) -> SeriesValue:
    """Attach the factor z^nu / (2^nu c_nu) (or z^nu / c_nu) to a scaled even series."""
    nu = params.nu
    lp = _log_prefactor(params)
    if z == 0:
        if nu > 0:
            return SeriesValue(0.0, s.terms, 0.0, 0.0, 0.0)
        if nu < 0:
            raise DomainError("J_nu(0) is undefined for nu < 0")
        val = s.mantissa * math.exp(s.log_scale + lp)
        return SeriesValue(val, s.terms, 0.0, val, 0.0)
    if isinstance(z, complex) or z < 0:
        zc = complex(z)
        phase = cmath.exp(1j * nu * cmath.phase(zc))
        log_scale = s.log_scale + lp + nu * math.log(abs(zc))
        mant = s.mantissa * phase
    else:
        log_scale = s.log_scale + lp + nu * math.log(z)
        mant = s.mantissa
    tail = s.log_tail + lp + nu * math.log(abs(z)) if s.log_tail > -math.inf else -math.inf
    return _Scaled(mant, log_scale, tail, s.terms).to_series_value()


def eval_J(params: QBesselParams, z: Number, tol: float = SERIES_TOL) -> SeriesValue:
    """J_nu^(2)(z;q) or J_nu^(3)(z;q), principal branch of z^nu."""
    return _times_z_power(params, z, _series(params, z, (), 2, 0, tol=tol))


def eval_dini(params: QBesselParams, c: float, z: Number, tol: float = SERIES_TOL) -> SeriesValue:
    """z J'(z) + c J(z) as one fused series  z^nu/(...) * sum (-1)^n (2n+nu+c) w_n z^(2n)."""
    return _times_z_power(params, z, _series(params, z, ((2.0, params.nu + c),), 2, 0, tol=tol))


def eval_normalized(norm: Normalization, params: QBesselParams, z: Number,
                    deriv_order: int = 0, tol: float = SERIES_TOL) -> SeriesValue:
    """f, g or h (or their first two derivatives) at z.

    g(z) = z calJ(z) and h(z) = z calJ(sqrt z) are summed as single series;
    h is entire in z, so no square-root branch is ever taken.  f(z) = z calJ(z)^(1/nu)
    uses the principal branch of the power.
    """
    norm = Normalization(norm)
    _check_order(deriv_order)
    if norm is Normalization.G:
        return _series(params, z, _falling(2, deriv_order, 1.0), 2, deriv_order - 1,
                       tol=tol).to_series_value()
    if norm is Normalization.H:
        return _series(params, z, _falling(1, deriv_order, 1.0), 1, deriv_order - 1,
                       tol=tol).to_series_value()

    nu = params.nu
    if nu == 0.0:
        raise DomainError("normalization f is undefined for nu = 0")
    j0 = eval_calJ(params, z, 0, tol)
    if j0.value == 0:
        raise BranchError("f evaluated at a zero of calJ")
    terms = j0.terms_used
    zc = complex(z)
    log_j = cmath.log(complex(j0.mantissa)) + j0.log_scale
    root = cmath.exp(log_j / nu)  # principal calJ^(1/nu)
    if deriv_order == 0:
        val: Number = zc * root
        tail = abs(zc * root) * j0.tail_bound / (abs(nu) * abs(j0.value))
    else:
        j1 = eval_calJ(params, z, 1, tol)
        ratio1 = complex(j1.value) / complex(j0.value)
        terms = max(terms, j1.terms_used)
        if deriv_order == 1:
            val = root * (1.0 + zc * ratio1 / nu)
        else:
            j2 = eval_calJ(params, z, 2, tol)
            ratio2 = complex(j2.value) / complex(j0.value)
            terms = max(terms, j2.terms_used)
            val = root * (2.0 * ratio1 / nu
                          + zc * (1.0 / nu) * (1.0 / nu - 1.0) * ratio1**2
                          + zc * ratio2 / nu)
        tail = abs(val) * (j0.tail_bound / abs(j0.value)) * (1.0 + 1.0 / abs(nu))
    if not isinstance(z, complex) and val.imag == 0.0:
        val = val.real
    return SeriesValue(val, terms, tail, val, 0.0)


class HadamardTarget(str, Enum):
    J = "J"
    JPRIME = "Jprime"
    DINI_G = "DiniG"
    DINI_H = "DiniH"


def eval_hadamard_truncated(params: QBesselParams, target: HadamardTarget, z: float,
                            zeros: Sequence[float], prefactor_rule: str = "entire") -> float:
    """Truncated Hadamard product over the given leading zeros.

    ``prefactor_rule="entire"`` returns the bare product (calJ, the entire
    z^(1-nu) J' form, g' or h').  ``"bessel"`` restores the prefactors of J and
    J' themselves (z^nu/(2^nu c_nu) and nu (z/2)^(nu-1)/(2 c_nu) for Jackson).
    For ``DiniH`` the argument lives in the h-variable and the factor is
    (1 - z / beta_n^2).
    """
    target = HadamardTarget(target)
    if len(zeros) == 0:
        raise UsageError("zero table is empty")
    if prefactor_rule not in ("entire", "bessel"):
        raise UsageError(f"unknown prefactor rule {prefactor_rule!r}")
    prod = 1.0
    for zn in zeros:
        if target is HadamardTarget.DINI_H:
            prod *= 1.0 - z / (zn * zn)
        else:
            prod *= 1.0 - (z / zn) ** 2
    if prefactor_rule == "entire" or target in (HadamardTarget.DINI_G, HadamardTarget.DINI_H):
        return prod
    # bessel prefactors for J and J'
    nu = params.nu
    lp = _log_prefactor(params)
    if target is HadamardTarget.J:
        return math.exp(lp) * z**nu * prod
    return nu * math.exp(lp) * z ** (nu - 1.0) * prod
