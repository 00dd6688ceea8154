"""Acceptance suite: one PASS/FAIL line per criterion (run with ``-s`` to see them)."""


from qbessel import Kind, Normalization, QBesselParams
from qbessel import thresholds as th
from qbessel.radii import Mode, RadiusQuery, radius
from qbessel.rayleigh import (
    classical_limit_trend,
    euler_rayleigh_interval,
    sigma2_closed,
    sigma4_closed,
    sigma_numeric,
)
from qbessel.verify import combination_hyperbolic, is_hyperbolic, jensen_poly, min_re_functional
from qbessel.zeros import ZeroTarget, find_zeros, first_zero

GRID = [(kind, nu, q) for kind in Kind for nu in (-0.5, 0.0, 0.5, 1.0, 2.0) for q in (0.1, 0.3, 0.5, 0.7)]
RADIUS_POINTS = [(-0.5, 0.5), (0.5, 0.5), (1.5, 0.3), (2.5, 0.7)]
FIG_Q = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6)


def report(n, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
    assert ok, detail


def _table(kind, nu, q):
    return find_zeros(ZeroTarget.plain(QBesselParams(kind, nu, q)), 30, 1e-13)


def _radius(norm, p, alpha, mode):
    return radius(RadiusQuery(Normalization(norm), p, alpha, Mode(mode)))


def test_criterion_01_sigma2():
    worst = 0.0
    for kind, nu, q in GRID:
        p = QBesselParams(kind, nu, q)
        worst = max(worst, abs(sigma_numeric(_table(kind, nu, q), 1).value - sigma2_closed(p)))
    j = sigma_numeric(_table(Kind.JACKSON2, 0.0, 0.5), 1).value
    h = sigma_numeric(_table(Kind.HAHN_EXTON3, 0.0, 0.5), 1).value
    ok = worst < 1e-8 and abs(j - 0.5) < 1e-8 and abs(h - 2.0) < 1e-8
    report(1, ok, f"sigma2 numeric vs closed, max error {worst:.2e} over {len(GRID)} points; "
                  f"examples {j:.12f}, {h:.12f}")


def test_criterion_02_sigma4():
    worst = 0.0
    for kind, nu, q in GRID:
        p = QBesselParams(kind, nu, q)
        worst = max(worst, abs(sigma_numeric(_table(kind, nu, q), 2).value - sigma4_closed(p)))
    j = sigma_numeric(_table(Kind.JACKSON2, 0.0, 0.5), 2).value
    ok = worst < 1e-8 and abs(j - 7 / 36) < 1e-8
    report(2, ok, f"sigma4 numeric vs closed, max error {worst:.2e}; Jackson nu=0 q=0.5 gives {j:.12f}")


def test_criterion_03_euler_rayleigh():
    bad = []
    for kind, nu, q in GRID:
        p = QBesselParams(kind, nu, q)
        lo, hi = euler_rayleigh_interval(p)
        z2 = first_zero(ZeroTarget.plain(p), 1e-14) ** 2
        if not lo < z2 < hi:
            bad.append((kind.value, nu, q))
    lo, hi = euler_rayleigh_interval(QBesselParams(Kind.JACKSON2, 0.0, 0.5))
    ok = not bad and abs(lo - 2) < 1e-12 and abs(hi - 18 / 7) < 1e-12
    report(3, ok, f"first zero squared inside (1/sigma2, sigma2/sigma4) at all points; failures {bad}")


def test_criterion_04_interlacing():
    bad = []
    for kind in Kind:
        for nu in (0.5, 1.0, 2.5):
            for q in (0.3, 0.5):
                p = QBesselParams(kind, nu, q)
                j = find_zeros(ZeroTarget.plain(p), 11).zeros
                d = find_zeros(ZeroTarget.deriv(p), 13).zeros
                counts = [sum(a < x < b for x in d) for a, b in zip(j, j[1:])]
                if counts != [1] * 10:
                    bad.append((kind.value, nu, q, counts))
    report(4, not bad, f"one J' zero in each of the first 10 gaps between J zeros; failures {bad}")


def test_criterion_05_dini_bound():
    bad, checked = [], 0
    for kind, nu, q in GRID:
        p = QBesselParams(kind, nu, q)
        j1 = first_zero(ZeroTarget.plain(p))
        for c in (1 - nu, 2 - nu, 0.1 - nu + 1e-3):
            if c + nu <= 0:
                continue
            checked += 1
            if not first_zero(ZeroTarget.dini(p, c)) < j1:
                bad.append((kind.value, nu, q, c))
    report(5, not bad, f"first Dini zero strictly below first J zero in {checked} cases; failures {bad}")


def test_criterion_06_radius_sup_definition():
    bad, checked = [], 0
    for kind in Kind:
        for nu, q in RADIUS_POINTS:
            p = QBesselParams(kind, nu, q)
            for norm in Normalization:
                for mode in Mode:
                    if norm is Normalization.F and mode is Mode.CONVEX and nu <= 0:
                        continue
                    for alpha in (0.0, 0.5):
                        r = _radius(norm, p, alpha, mode).radius
                        inner = min_re_functional(norm, p, 0.999 * r, mode).min_re
                        outer = min_re_functional(norm, p, 1.001 * r, mode).min_re
                        checked += 1
                        if not inner > alpha > outer:
                            bad.append((kind.value, nu, q, norm.value, mode.value, alpha))
    report(6, not bad, f"circle minimum above alpha at 0.999 r and below at 1.001 r, {checked} cases; "
                       f"failures {bad}")


def test_criterion_07_radius_dini_identity():
    worst = 0.0
    for kind, nu, q in GRID:
        p = QBesselParams(kind, nu, q)
        r = _radius("g", p, 0.0, "starlike").radius
        worst = max(worst, abs(r - first_zero(ZeroTarget.dini(p, 1 - nu), 1e-14)))
    report(7, worst < 1e-10, f"starlike g radius at alpha=0 vs first Dini(1-nu) zero, max gap {worst:.2e}")


def test_criterion_08_convex_bounds():
    bad, unsquared_fail = [], []
    for kind in Kind:
        for nu, q in RADIUS_POINTS:
            p = QBesselParams(kind, nu, q)
            for alpha in (0.0, 0.5):
                checks = []
                if nu > 0:
                    f = _radius("f", p, alpha, "convex")
                    checks += [f.bound("first_zero_of_Jprime").holds, f.bound("Jprime_below_J").holds]
                g = _radius("g", p, alpha, "convex")
                checks.append(g.bound("first_dini_1_minus_nu_zero").holds)
                h = _radius("h", p, alpha, "convex")
                checks.append(h.bound("first_dini_2_minus_nu_zero_squared").holds)
                if not all(checks):
                    bad.append((kind.value, nu, q, alpha))
                if not h.bound("first_dini_2_minus_nu_zero").holds:
                    unsquared_fail.append((kind.value, nu, q, alpha))
    report(8, not bad, f"convex radii below j'_1 < j_1, alpha_1 and beta_1^2; failures {bad}; "
                       f"unsquared beta_1 bound fails at {unsquared_fail}")


def test_criterion_09_jensen():
    bad, combos = [], 0
    for kind, nu, q in GRID:
        p = QBesselParams(kind, nu, q)
        for n in range(1, 13):
            if not is_hyperbolic(jensen_poly(p, n)).hyperbolic:
                bad.append((kind.value, nu, q, n))
        for a in (-0.25, -1.0):
            for n in (1, 4, 8, 12):
                combos += 1
                if not combination_hyperbolic(p, a, n).ok:
                    bad.append((kind.value, nu, q, "a", a, n))
    report(9, not bad, f"g_n hyperbolic for n<=12 at {len(GRID)} points and {combos} combinations "
                       f"hyperbolic with smaller first root; failures {bad}")


def test_criterion_10_thresholds():
    lines, ok = [], True
    for q in FIG_Q:
        rep = th.threshold_report(q)
        s, z = rep.nu_star, rep.nu_zero
        r_star = th.j1(s, q) - 1
        r_zero = th.criterion_value(z, q).value - 1
        m = max(s, z)
        grid = [m + k * 0.01 for k in range(-20, 21) if k] + [m - 1e-6, m + 1e-6]
        flips = all(th.ctc_decision(nu, q).direct == (nu >= m) for nu in grid if nu > -1)
        ok &= abs(r_star) < 1e-8 and abs(r_zero) < 1e-8 and flips
        lines.append(f"q={q}: nu*={s:.10f} nu0={z:.10f} res {r_star:.1e},{r_zero:.1e} "
                     f"flip {flips} nu0>=nu* {rep.nu_zero_ge_nu_star}")
    report(10, ok, "thresholds; " + "; ".join(lines))


def test_criterion_11_classical_limit():
    worst = 0.0
    for nu in (-0.5, 0.0, 1.0, 2.0):
        for q in (0.1, 0.5, 0.9):
            p = QBesselParams(Kind.JACKSON2, nu, q)
            lhs = (1 - q) ** 2 * sigma2_closed(p)
            rhs = q ** (nu + 1) * (1 - q) / (4 * (1 - q ** (nu + 1)))
            worst = max(worst, abs(lhs - rhs))
    gaps = []
    for nu in (0.0, 1.0):
        row = classical_limit_trend(Kind.JACKSON2, nu, [0.9, 0.99])[-1]
        gaps.append(abs(row["scaled_sigma2"] - 1 / (4 * (nu + 1))) * 4 * (nu + 1))
    ok = worst < 1e-14 and max(gaps) < 0.02
    report(11, ok, f"identity error {worst:.1e}; relative gaps to 1/(4(nu+1)) at q=0.99: "
                   + ", ".join(f"{g:.4f}" for g in gaps))


CLI_RUNS = [
    ["zeros", "--nu", "0", "--q", "0.5", "--n", "30", "--format", "csv"],
    ["radius", "--norm", "h", "--mode", "convex", "--nu", "1.5", "--q", "0.3", "--kind", "hahnexton3"],
    ["thresholds", "--q", "0.5"],
]


def test_criterion_12_determinism(tmp_path):
    import subprocess
    import sys

    same = []
    for argv in CLI_RUNS:
        outs = [subprocess.run([sys.executable, "-m", "qbessel", *argv], capture_output=True, check=True).stdout
                for _ in range(2)]
        same.append(outs[0] == outs[1] and len(outs[0]) > 0)
    fig = []
    for k in range(2):
        d = tmp_path / str(k)
        subprocess.run([sys.executable, "-m", "qbessel", "figures", "--out-dir", str(d), "--q", "0.3,0.5"],
                       capture_output=True, check=True)
        fig.append(((d / "fig1.csv").read_bytes(), (d / "fig2.csv").read_bytes()))
    same.append(fig[0] == fig[1])
    report(12, all(same), f"byte-identical repeated CLI runs: {same}")
