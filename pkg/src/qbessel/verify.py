"""Independent checks: circle sampling of the starlike and convex functionals,
hyperbolicity of Jensen polynomials, and the Laguerre inequality.

The circle sampler uses plain truncated polynomials in numpy and shares no code
path with the radius solvers beyond the series weights.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import mpmath
import numpy as np
from numpy.polynomial import polynomial as npoly

from .core import Normalization, QBesselParams, _log_weight_step, eval_calJ
from .errors import DomainError, UsageError
from .radii import Mode

DEFAULT_SAMPLES = 1024
DEGREE_CAP = 64
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


# ---------------------------------------------------------------------------
# circle sampling


def _even_coefficients(params: QBesselParams, rmax: float) -> np.ndarray:
    """(-1)^n w_n, truncated once w_n rmax^(2n) is negligible."""
    logs = [0.0]
    lr = 2.0 * math.log(max(rmax, 1e-300))
    n = 0
    peak = 0.0
    while True:
        n += 1
        logs.append(logs[-1] + _log_weight_step(params, n))
        size = logs[-1] + n * lr
        peak = max(peak, size)
        if size < peak - 40.0 * math.log(10.0) and n > 4:
            break
        if n > 5000:
            raise UsageError("radius too large for direct polynomial sampling")
    w = np.exp(np.array(logs))
    return w * (-1.0) ** np.arange(len(w))


class _Functional:
    """Vectorized evaluation of Re(z f'/f) or Re(1 + z f''/f') on complex arrays."""

    def __init__(self, norm: Normalization, params: QBesselParams, mode: Mode, rmax: float):
        self.norm, self.nu, self.mode = norm, params.nu, mode
        a = _even_coefficients(params, math.sqrt(rmax) if norm is Normalization.H else rmax)
        if norm is Normalization.H:
            p = a
        else:
            p = np.zeros(2 * len(a) - 1)
            p[::2] = a
        self.p = [p, npoly.polyder(p), npoly.polyder(p, 2), npoly.polyder(p, 3)]

    def _derivs(self, z: np.ndarray) -> list[np.ndarray]:
        return [npoly.polyval(z, c) for c in self.p]

    def __call__(self, z: np.ndarray) -> np.ndarray:
        P0, P1, P2, _ = self._derivs(z)
        with np.errstate(all="ignore"):
            if self.norm is Normalization.F:
                L = P1 / P0
                if self.mode is Mode.STARLIKE:
                    val = 1.0 + z * L / self.nu
                else:
                    dL = P2 / P0 - L * L
                    m = 1.0 + z * L / self.nu
                    val = 1.0 + z * L / self.nu + z * (L / self.nu + z * dL / self.nu) / m
            else:
                # g = z P(z) and h = z K(z) share the same algebra
                if self.mode is Mode.STARLIKE:
                    val = 1.0 + z * P1 / P0
                else:
                    val = 1.0 + z * (2.0 * P1 + z * P2) / (P0 + z * P1)
        return val.real


@dataclass(frozen=True)
class CirclesReport:
    radius: float
    samples: int
    mode: str
    min_re: float
    argmin_angle: float
    value_at_zero: float
    value_at_half_pi: float
    skipped: int = 0

    @property
    def min_re_starlike(self) -> Optional[float]:
        return self.min_re if self.mode == Mode.STARLIKE.value else None

    @property
    def min_re_convex(self) -> Optional[float]:
        return self.min_re if self.mode == Mode.CONVEX.value else None


def _golden_min(fn, a: float, b: float, iterations: int = 60) -> tuple[float, float]:
    c, d = b - _GOLDEN * (b - a), a + _GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iterations):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fn(d)
    return (c, fc) if fc < fd else (d, fd)


def min_re_functional(norm: Normalization, params: QBesselParams, r: float,
                      mode: Mode, samples: int = DEFAULT_SAMPLES) -> CirclesReport:
    """Minimum over |z| = r of the real part of the starlike or convex functional."""
    norm, mode = Normalization(norm), Mode(mode)
    if samples < 256:
        raise UsageError("need at least 256 samples")
    if not r > 0:
        raise UsageError("r must be positive")
    if norm is Normalization.F and params.nu == 0:
        raise DomainError("normalization f needs nu != 0")
    fn = _Functional(norm, params, mode, r)
    theta = 2.0 * math.pi * np.arange(samples) / samples
    vals = fn(r * np.exp(1j * theta))
    ok = np.isfinite(vals)
    skipped = int(samples - ok.sum())
    if not ok.any():
        raise UsageError("functional undefined at every sample")
    masked = np.where(ok, vals, np.inf)
    k = int(np.argmin(masked))
    best_t, best_v = float(theta[k]), float(masked[k])

    def at(t: float) -> float:
        v = float(fn(np.array([r * complex(math.cos(t), math.sin(t))]))[0])
        return v if math.isfinite(v) else math.inf

    step = 2.0 * math.pi / samples
    t, v = _golden_min(at, best_t - step, best_t + step)
    if v < best_v:
        best_t, best_v = t % (2.0 * math.pi), v
    return CirclesReport(r, samples, mode.value, best_v, best_t, at(0.0), at(math.pi / 2), skipped)


# ---------------------------------------------------------------------------
# Jensen polynomials


Number = Union[Fraction, float, "mpmath.mpf"]


def _exact_inputs(params: QBesselParams) -> bool:
    return float(params.nu).is_integer()


def _jensen_gammas_exact(params: QBesselParams, n: int) -> list[Fraction]:
    q = Fraction(repr(params.q))
    qn1 = q ** int(params.nu + 1)
    out, qq, qv = [], Fraction(1), Fraction(1)
    for k in range(n + 1):
        if k > 0:
            qq *= 1 - q**k
            qv *= 1 - qn1 * q ** (k - 1)
        e = k * k + int(params.nu) * k if params.jackson else k * (k + 1) // 2
        out.append((-1) ** k * math.factorial(k) * q**e / (qq * qv))
    return out


def _jensen_gammas_mp(params: QBesselParams, n: int, ctx) -> list:
    q, nu = ctx.mpf(repr(params.q)), ctx.mpf(repr(params.nu))
    qn1 = q ** (nu + 1)
    out, qq, qv = [], ctx.mpf(1), ctx.mpf(1)
    for k in range(n + 1):
        if k > 0:
            qq *= 1 - q**k
            qv *= 1 - qn1 * q ** (k - 1)
        e = k * (k + nu) if params.jackson else ctx.mpf(k * (k + 1)) / 2
        out.append((-1) ** k * math.factorial(k) * q**e / (qq * qv))
    return out


@contextmanager
def _iv_dps(dps: int):
    old = mpmath.iv.dps
    mpmath.iv.dps = dps
    try:
        yield
    finally:
        mpmath.iv.dps = old


def _mp_to_fraction(x) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    return (-1) ** sign * Fraction(int(man)) * Fraction(2) ** exp


@dataclass(frozen=True)
class JensenPoly:
    """g_n(zeta) = sum_k C(n,k) gamma_k zeta^k in zeta = z^2/4 (Jackson) or z^2 (Hahn-Exton)."""

    params: QBesselParams
    degree: int
    coefficients: tuple[Fraction, ...]  # ascending powers
    exact: bool
    intervals: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.coefficients[0] != 1:
            raise UsageError("Jensen polynomial must satisfy g_n(0) = 1")


def jensen_poly(params: QBesselParams, n: int) -> JensenPoly:
    if n < 1:
        raise UsageError("degree must be at least 1")
    if n > DEGREE_CAP:
        raise UsageError(f"degree capped at {DEGREE_CAP}")
    binom = [math.comb(n, k) for k in range(n + 1)]
    if _exact_inputs(params):
        gam = _jensen_gammas_exact(params, n)
        return JensenPoly(params, n, tuple(b * g for b, g in zip(binom, gam)), True)
    with mpmath.workdps(60):
        gam = _jensen_gammas_mp(params, n, mpmath.mp)
        coeffs = tuple(Fraction(1) if k == 0 else _mp_to_fraction(b * g)
                       for k, (b, g) in enumerate(zip(binom, gam)))
    with _iv_dps(60):
        gi = _jensen_gammas_mp(params, n, mpmath.iv)
        ivs = tuple(b * g for b, g in zip(binom, gi))
    return JensenPoly(params, n, coeffs, False, ivs)


def combination_poly(poly: JensenPoly, a: float) -> JensenPoly:
    """a g_n - zeta g_n', coefficientwise (a - k) b_k, rescaled so the constant is 1."""
    fa = Fraction(repr(a))
    raw = [(fa - k) * b for k, b in enumerate(poly.coefficients)]
    coeffs = tuple(c / raw[0] for c in raw)
    ivs: tuple = ()
    if poly.intervals:
        with _iv_dps(60):
            ia = mpmath.iv.mpf(repr(a))
            ivs = tuple((ia - k) * b / ia for k, b in enumerate(poly.intervals))
    return JensenPoly(poly.params, poly.degree, coeffs, poly.exact, ivs)


# exact polynomial helpers, ascending coefficient lists


def _trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _deriv(p: Sequence[Fraction]) -> list[Fraction]:
    return _trim([k * p[k] for k in range(1, len(p))] or [Fraction(0)])


def _rem(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and len(a) > 0:
        f = a[-1] / lb
        shift = len(a) - 1 - db
        for i in range(db + 1):
            a[shift + i] -= f * b[i]
        a.pop()
    return _trim(a or [Fraction(0)])


def sturm_sequence(p: Sequence[Fraction]) -> list[list[Fraction]]:
    seq = [_trim(list(p)), _deriv(p)]
    while True:
        r = _rem(seq[-2], seq[-1])
        if len(r) == 1 and r[0] == 0:
            break
        # scale by |leading| to keep numbers small; signs are what matter
        lead = abs(r[-1])
        seq.append([-c / lead for c in r])
    return seq


def _sign_changes(signs: Iterable[int]) -> int:
    s = [x for x in signs if x != 0]
    return sum(1 for a, b in zip(s, s[1:]) if a != b)


def _signs_at_infinity(seq: list[list[Fraction]], positive: bool) -> list[int]:
    out = []
    for p in seq:
        deg, lead = len(p) - 1, p[-1]
        s = (lead > 0) - (lead < 0)
        out.append(s if positive or deg % 2 == 0 else -s)
    return out


@dataclass(frozen=True)
class HyperbolicityResult:
    hyperbolic: bool
    degree: int
    real_roots: int  # counted with multiplicity
    method: str
    variations: tuple[int, int]  # sign variations at -inf and +inf
    separators: tuple[Fraction, ...] = ()


def _count_real_roots(p: list[Fraction]) -> tuple[int, tuple[int, int]]:
    """Real roots with multiplicity, via Sturm on the square-free part recursively."""
    if len(p) == 1:
        return 0, (0, 0)
    seq = sturm_sequence(p)
    v_minus = _sign_changes(_signs_at_infinity(seq, False))
    v_plus = _sign_changes(_signs_at_infinity(seq, True))
    distinct = v_minus - v_plus
    g = seq[-1]
    if len(g) > 1:
        more, _ = _count_real_roots(g)
        return distinct + more, (v_minus, v_plus)
    return distinct, (v_minus, v_plus)


def _approx_roots(coeffs: Sequence[Fraction]) -> list:
    """Roots at 60 digits.  Durand-Kerner stops on an absolute step size, which
    fails when the roots spread over many decades (small q); then seed from the
    companion matrix and polish each root by Newton's method instead."""
    with mpmath.workdps(60):
        mp_coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(coeffs)]
        try:
            return mpmath.polyroots(mp_coeffs, maxsteps=400, extraprec=60)
        except mpmath.libmp.NoConvergence:
            pass
        seeds = np.roots([float(c) for c in mp_coeffs])
        polished = []
        for z in seeds:
            if abs(z.imag) > 1e-8 * abs(z):
                polished.append(mpmath.mpc(z))
                continue
            try:
                polished.append(mpmath.findroot(lambda x: mpmath.polyval(mp_coeffs, x), mpmath.mpf(z.real),
                                                tol=mpmath.mpf(10) ** -50 * max(1.0, abs(z)) ** 2))
            except (ValueError, ZeroDivisionError):
                polished.append(mpmath.mpf(z.real))
        return polished


def _interval_separators(poly: JensenPoly) -> Optional[tuple[Fraction, ...]]:
    """Rational points where the interval enclosure of the polynomial alternates in sign.

    degree + 1 alternating points prove degree distinct real roots.
    """
    roots = _approx_roots(poly.coefficients)
    if any(abs(mpmath.im(x)) > 1e-30 * max(1, abs(x)) for x in roots):
        return None
    xs = sorted(mpmath.re(x) for x in roots)
    pts = [xs[0] / 2] + [(a + b) / 2 for a, b in zip(xs, xs[1:])] + [2 * xs[-1]]
    seps = tuple(_mp_to_fraction(x) for x in pts)
    signs = []
    with _iv_dps(60):
        for s in seps:
            x = mpmath.iv.mpf(s.numerator) / s.denominator
            acc = mpmath.iv.mpf(0)
            for c in reversed(poly.intervals):
                acc = acc * x + c
            if acc.a > 0:
                signs.append(1)
            elif acc.b < 0:
                signs.append(-1)
            else:
                return None
    if all(a != b for a, b in zip(signs, signs[1:])):
        return seps
    return None


def is_hyperbolic(poly: Union[JensenPoly, Sequence]) -> HyperbolicityResult:
    """All roots real?  Exact Sturm count, plus an interval certificate for inexact inputs."""
    if isinstance(poly, JensenPoly):
        coeffs = list(poly.coefficients)
    else:
        coeffs = [c if isinstance(c, Fraction) else Fraction(repr(c)) for c in poly]
        poly = None
    coeffs = _trim(coeffs)
    deg = len(coeffs) - 1
    if deg > DEGREE_CAP:
        raise UsageError(f"degree capped at {DEGREE_CAP}")
    if poly is not None and not poly.exact:
        seps = _interval_separators(poly)
        if seps is not None:
            return HyperbolicityResult(True, deg, deg, "interval-sign-alternation", (deg, 0), seps)
    count, var = _count_real_roots(coeffs)
    method = "sturm-exact" if poly is None or poly.exact else "sturm-rounded"
    return HyperbolicityResult(count == deg, deg, count, method, var)


def _smallest_root(coeffs: Sequence[Fraction]) -> float:
    return float(min(mpmath.re(x) for x in _approx_roots(coeffs)))


@dataclass(frozen=True)
class CombinationResult:
    a: float
    degree: int
    hyperbolic: HyperbolicityResult
    smallest_root: float
    smallest_root_base: float

    @property
    def root_precedes(self) -> bool:
        return 0.0 < self.smallest_root < self.smallest_root_base

    @property
    def ok(self) -> bool:
        return self.hyperbolic.hyperbolic and self.root_precedes


def combination_hyperbolic(params: QBesselParams, a: float, n: int) -> CombinationResult:
    if not a < 0:
        raise DomainError("the combination a g_n - zeta g_n' is only covered for a < 0")
    base = jensen_poly(params, n)
    comb = combination_poly(base, a)
    return CombinationResult(a, n, is_hyperbolic(comb),
                             _smallest_root(comb.coefficients), _smallest_root(base.coefficients))


def jensen_convergence(params: QBesselParams, zeta: float, degrees: Sequence[int]) -> list[float]:
    """|g_n(zeta/n) - J(zeta)| for each n, with zeta in the Jensen variable."""
    z = 2.0 * math.sqrt(zeta) if params.jackson else math.sqrt(zeta)
    target = eval_calJ(params, z).value
    out = []
    for n in degrees:
        c = jensen_poly(params, n).coefficients
        x = Fraction(repr(zeta)) / n
        out.append(abs(float(sum(ck * x**k for k, ck in enumerate(c))) - target))
    return out


# ---------------------------------------------------------------------------
# Laguerre inequality


@dataclass(frozen=True)
class LaguerreReport:
    points: int
    min_value: float
    argmin: float
    violations: tuple[tuple[float, float], ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def laguerre_check(params: QBesselParams, x_grid: Iterable[float]) -> LaguerreReport:
    """(J')^2 - J J'' > 0 for the even entire form, at each grid point."""
    xs = list(x_grid)
    if not xs:
        raise UsageError("empty grid")
    vals = []
    for x in xs:
        j0 = eval_calJ(params, x, 0).value
        j1 = eval_calJ(params, x, 1).value
        j2 = eval_calJ(params, x, 2).value
        vals.append(j1 * j1 - j0 * j2)
    k = min(range(len(xs)), key=vals.__getitem__)
    bad = tuple((x, v) for x, v in zip(xs, vals) if not v > 0)
    return LaguerreReport(len(xs), vals[k], xs[k], bad)
