"""Command-line interface: ``qbessel <command> [options]``.

Output is JSON by default, or CSV with ``--format csv`` (header row, floats
with 17 significant digits).  Exit codes: 0 ok, 1 internal consistency
failure, 2 domain or usage error, 3 convergence error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from . import radii, rayleigh, thresholds, verify, zeros
from .core import Kind, Normalization, QBesselParams, eval_calJ, eval_dini, eval_J, eval_normalized
from .errors import ConvergenceError, DomainError, InternalConsistencyError, UsageError

DEFAULT_TOL = 1e-10
FIG_Q = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6)
FIG_NU = (-0.95, -0.05, 0.025)

EXIT_OK, EXIT_INTERNAL, EXIT_DOMAIN, EXIT_CONVERGENCE, EXIT_IO = 0, 1, 2, 3, 4


def default_tol() -> float:
    raw = os.environ.get("QBESSEL_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"QBESSEL_TOL is not a number: {raw!r}") from None
    if not tol > 0:
        raise UsageError("QBESSEL_TOL must be positive")
    return tol


# ---------------------------------------------------------------------------
# formatting


def _clean(x: Any) -> Any:
    """JSON-safe copy: NaN/inf become null, complex becomes {re, im}."""
    if isinstance(x, float):
        return x if math.isfinite(x) else None
    if isinstance(x, complex):
        return {"re": _clean(x.real), "im": _clean(x.imag)}
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def _cell(x: Any) -> str:
    if isinstance(x, bool) or x is None:
        return "" if x is None else str(x).lower()
    if isinstance(x, float):
        return f"{x:.17g}"
    if isinstance(x, complex):
        return f"{x.real:.17g}{x.imag:+.17g}j"
    return str(x)


def to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        header = list(rows[0])
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(row.get(k)) for k in header])
    return buf.getvalue()


def to_json(obj: Any) -> str:
    return json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"


def _flat(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        if isinstance(v, dict):
            out.update(_flat(v, f"{prefix}{k}."))
        else:
            out[prefix + k] = v
    return out


def _emit(args: argparse.Namespace, obj: Any, rows: Sequence[dict]) -> None:
    text = to_csv(rows) if args.format == "csv" else to_json(obj)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# argument helpers


def _params(args: argparse.Namespace) -> QBesselParams:
    return QBesselParams(Kind(args.kind), args.nu, args.q)


def _complex(text: str) -> complex | float:
    try:
        v = complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    return v.real if v.imag == 0 and "j" not in text else v


_C_EXPR = re.compile(r"^\s*([+-]?[0-9.eE+-]*?)\s*([+-])\s*nu\s*$")


def parse_c(text: str, nu: float) -> float:
    """A Dini constant: a number, or 'A-nu' / 'A+nu' / '-nu'."""
    try:
        return float(text)
    except ValueError:
        pass
    m = _C_EXPR.match(text)
    if not m:
        raise UsageError(f"cannot parse Dini constant {text!r}")
    a = float(m.group(1)) if m.group(1) else 0.0
    return a - nu if m.group(2) == "-" else a + nu


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _nu_grid(start: float, stop: float, step: float) -> list[float]:
    count = int(round((stop - start) / step)) + 1
    return [round(start + k * step, 12) for k in range(count)]


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args: argparse.Namespace) -> None:
    p = _params(args)
    if args.norm:
        sv = eval_normalized(Normalization(args.norm), p, args.z, args.deriv, args.tol)
        what = f"{args.norm}^({args.deriv})"
    elif args.function == "calJ":
        sv = eval_calJ(p, args.z, args.deriv, args.tol)
        what = f"calJ^({args.deriv})"
    elif args.function == "J":
        sv = eval_J(p, args.z, args.tol)
        what = "J"
    else:
        if args.c is None:
            raise UsageError("--function dini needs --c")
        c = parse_c(args.c, p.nu)
        sv = eval_dini(p, c, args.z, args.tol)
        what = f"dini(c={c:.17g})"
    value = sv.value
    row = {"kind": p.kind.value, "nu": p.nu, "q": p.q, "function": what,
           "z_re": complex(args.z).real, "z_im": complex(args.z).imag,
           "value_re": complex(value).real, "value_im": complex(value).imag,
           "terms_used": sv.terms_used, "tail_bound": sv.tail_bound, "tol": args.tol}
    _emit(args, row, [row])


def _family_target(args: argparse.Namespace, p: QBesselParams) -> zeros.ZeroTarget:
    if args.family == "dini":
        if args.c is None:
            raise UsageError("--family dini needs --c")
        return zeros.ZeroTarget.dini(p, parse_c(args.c, p.nu))
    return zeros.ZeroTarget(p, zeros.Family(args.family))


def cmd_zeros(args: argparse.Namespace) -> None:
    p = _params(args)
    target = _family_target(args, p)
    check = args.n >= 20
    table = zeros.find_zeros(target, args.n, args.tol, check=False)
    status = "SKIPPED"
    report = None
    if check:
        closed = (rayleigh.sigma2_closed(p) if target.family is zeros.Family.PLAIN_J
                  else zeros.family_rayleigh(target)[0])
        report = zeros.zero_count_check(table, closed, plain_only=False)
        status = "PASS" if report.status == "OK" else report.status
    rows = [{"index": i + 1, "zero": z, "bracket_lo": lo, "bracket_hi": hi, "tol": args.tol,
             "sigma2_check": status}
            for i, (z, (lo, hi)) in enumerate(zip(table.zeros, table.brackets))]
    obj = {"kind": p.kind.value, "nu": p.nu, "q": p.q, "family": target.label(), "tol": args.tol,
           "zeros": rows, "sigma2_check": status,
           "sigma2": None if report is None else {
               "partial_sum": report.partial_sum, "tail": report.tail,
               "closed_form": report.closed_form, "deficit": report.deficit}}
    _emit(args, obj, rows)
    if status not in ("PASS", "SKIPPED"):
        raise InternalConsistencyError(f"zero table failed the completeness check: {status}")


def cmd_radius(args: argparse.Namespace) -> None:
    p = _params(args)
    res = radii.radius(radii.RadiusQuery(Normalization(args.norm), p, args.alpha, radii.Mode(args.mode)))
    d = res.as_dict()
    _emit(args, d, [_flat(d)])


def cmd_rayleigh(args: argparse.Namespace) -> None:
    rep = rayleigh.rayleigh_report(_params(args), args.n, args.tol).as_dict()
    _emit(args, rep, [rep])


def cmd_thresholds(args: argparse.Namespace) -> None:
    rows = [thresholds.threshold_report(q).as_dict() for q in args.q]
    _emit(args, rows if len(rows) > 1 else rows[0], rows)


def cmd_figures(args: argparse.Namespace) -> None:
    out = Path(args.out_dir)
    nus = _nu_grid(args.nu_start, args.nu_stop, args.nu_step)
    fig1, fig2 = [], []
    for q in args.q:
        for nu in nus:
            fig1.append({"q": q, "nu": nu, "j_nu_1": thresholds.j1(nu, q)})
            fig2.append({"q": q, "nu": nu, "tau": thresholds.tau(nu, q)})
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "fig1.csv").write_text(to_csv(fig1))
        (out / "fig2.csv").write_text(to_csv(fig2))
    except OSError as exc:
        raise OSError(f"cannot write figure data to {out}: {exc}") from exc
    summary = {"fig1": str(out / "fig1.csv"), "fig2": str(out / "fig2.csv"),
               "q_values": len(args.q), "nu_points": len(nus), "rows": len(fig1)}
    _emit(args, summary, [summary])


def cmd_verify(args: argparse.Namespace) -> None:
    p = _params(args)
    norm, mode = Normalization(args.norm), radii.Mode(args.mode)
    res = radii.radius(radii.RadiusQuery(norm, p, args.alpha, mode))
    inner = verify.min_re_functional(norm, p, (1 - args.eps) * res.radius, mode, args.samples)
    outer = verify.min_re_functional(norm, p, (1 + args.eps) * res.radius, mode, args.samples)
    jensen = [verify.is_hyperbolic(verify.jensen_poly(p, n)) for n in range(1, args.jensen_degree + 1)]
    x_max = zeros.find_zeros(zeros.ZeroTarget.plain(p), 3, args.tol).zeros[-1]
    lag = verify.laguerre_check(p, [x_max * k / 100 for k in range(1, 101)])
    circle_ok = inner.min_re > args.alpha and outer.min_re < args.alpha
    obj = {
        "kind": p.kind.value, "nu": p.nu, "q": p.q, "norm": norm.value, "mode": mode.value,
        "alpha": args.alpha, "radius": res.radius, "eps": args.eps, "samples": args.samples,
        "min_re_inside": inner.min_re, "argmin_inside": inner.argmin_angle,
        "min_re_outside": outer.min_re, "argmin_outside": outer.argmin_angle,
        "circle_check": circle_ok,
        "jensen_degrees": args.jensen_degree,
        "jensen_hyperbolic": all(j.hyperbolic for j in jensen),
        "jensen_methods": sorted({j.method for j in jensen}),
        "laguerre_min": lag.min_value, "laguerre_ok": lag.ok,
    }
    row = dict(obj, jensen_methods=";".join(obj["jensen_methods"]))
    _emit(args, obj, [row])
    if not (circle_ok and obj["jensen_hyperbolic"] and lag.ok):
        raise InternalConsistencyError("verification failed")


def cmd_dini_sweep(args: argparse.Namespace) -> None:
    """First Dini zero along a nu grid at fixed c; monotonicity is reported only."""
    rows = []
    prev: Optional[float] = None
    for nu in args.nu:
        p = QBesselParams(Kind(args.kind), nu, args.q)
        c = parse_c(args.c, nu)
        z1 = zeros.first_zero(zeros.ZeroTarget.dini(p, c), args.tol)
        rows.append({"nu": nu, "c": c, "first_zero": z1,
                     "increasing": None if prev is None else z1 > prev})
        prev = z1
    obj = {"kind": Kind(args.kind).value, "q": args.q, "c": args.c, "rows": rows,
           "monotone_increasing": all(r["increasing"] for r in rows[1:])}
    _emit(args, obj, rows)


# ---------------------------------------------------------------------------
# parser


def _add_common(sp: argparse.ArgumentParser, params: bool = True) -> None:
    if params:
        sp.add_argument("--kind", choices=[k.value for k in Kind], default=Kind.JACKSON2.value)
        sp.add_argument("--nu", type=float, required=True)
        sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--output", "-o", default=None, help="write to a file instead of stdout")
    sp.add_argument("--tol", type=float, default=None, help="tolerance (default QBESSEL_TOL or 1e-10)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qbessel", description="Jackson and Hahn-Exton q-Bessel numerics")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("eval", help="evaluate a series")
    _add_common(sp)
    sp.add_argument("--z", type=_complex, required=True)
    sp.add_argument("--norm", choices=[n.value for n in Normalization], default=None)
    sp.add_argument("--function", choices=("calJ", "J", "dini"), default="calJ")
    sp.add_argument("--deriv", type=int, choices=(0, 1, 2), default=0)
    sp.add_argument("--c", default=None, help="Dini constant, e.g. 0.5 or 1-nu")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("zeros", help="positive zeros of J, J' or a Dini combination")
    _add_common(sp)
    sp.add_argument("--n", type=int, default=30)
    sp.add_argument("--family", choices=[f.value for f in zeros.Family], default="plain")
    sp.add_argument("--c", default=None)
    sp.set_defaults(func=cmd_zeros)

    sp = sub.add_parser("radius", help="radius of starlikeness or convexity")
    _add_common(sp)
    sp.add_argument("--norm", choices=[n.value for n in Normalization], required=True)
    sp.add_argument("--mode", choices=[m.value for m in radii.Mode], required=True)
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.set_defaults(func=cmd_radius)

    sp = sub.add_parser("rayleigh", help="closed and numeric Rayleigh sums")
    _add_common(sp)
    sp.add_argument("--n", type=int, default=30)
    sp.set_defaults(func=cmd_rayleigh)

    sp = sub.add_parser("thresholds", help="close-to-convexity thresholds of h (Jackson)")
    _add_common(sp, params=False)
    sp.add_argument("--q", type=_float_list, required=True, help="one value or a comma list")
    sp.set_defaults(func=cmd_thresholds)

    sp = sub.add_parser("figures", help="write fig1.csv and fig2.csv")
    _add_common(sp, params=False)
    sp.add_argument("--out-dir", default=".")
    sp.add_argument("--q", type=_float_list, default=list(FIG_Q))
    sp.add_argument("--nu-start", type=float, default=FIG_NU[0])
    sp.add_argument("--nu-stop", type=float, default=FIG_NU[1])
    sp.add_argument("--nu-step", type=float, default=FIG_NU[2])
    sp.set_defaults(func=cmd_figures)

    sp = sub.add_parser("verify", help="circle sampling, Jensen and Laguerre checks")
    _add_common(sp)
    sp.add_argument("--norm", choices=[n.value for n in Normalization], required=True)
    sp.add_argument("--mode", choices=[m.value for m in radii.Mode], required=True)
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--eps", type=float, default=1e-3)
    sp.add_argument("--samples", type=int, default=verify.DEFAULT_SAMPLES)
    sp.add_argument("--jensen-degree", type=int, default=12)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("dini-sweep", help="exploratory: first Dini zero along nu")
    _add_common(sp, params=False)
    sp.add_argument("--kind", choices=[k.value for k in Kind], default=Kind.JACKSON2.value)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--c", required=True)
    sp.add_argument("--nu", type=_float_list, required=True, help="comma list")
    sp.set_defaults(func=cmd_dini_sweep)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.tol is None:
            args.tol = default_tol()
        if not args.tol > 0:
            raise UsageError("--tol must be positive")
        args.func(args)
    except (DomainError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except InternalConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
