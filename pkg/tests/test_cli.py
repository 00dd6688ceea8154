import csv
import io
import json
import subprocess
import sys

import pytest

from qbessel import Kind, Normalization, QBesselParams
from qbessel.cli import main, parse_c
from qbessel.core import eval_normalized


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_eval_at_origin(capsys):
    d = run_json(capsys, "eval", "--kind", "jackson2", "--nu", "0", "--q", "0.5", "--z", "0")
    assert d["value_re"] == 1.0 and d["value_im"] == 0.0
    assert d["tail_bound"] <= d["tol"] == 1e-10


def test_eval_matches_library_bit_for_bit(capsys):
    d = run_json(capsys, "eval", "--norm", "g", "--kind", "jackson2", "--nu", "0.5", "--q", "0.5", "--z", "0.3")
    lib = eval_normalized(Normalization.G, QBesselParams(Kind.JACKSON2, 0.5, 0.5), 0.3, 0, 1e-10)
    assert d["value_re"] == lib.value
    assert d["terms_used"] == lib.terms_used


def test_eval_complex_and_dini(capsys):
    d = run_json(capsys, "eval", "--nu", "0.5", "--q", "0.5", "--z", "1+0.5j")
    assert d["value_im"] != 0.0
    d = run_json(capsys, "eval", "--nu", "0.5", "--q", "0.5", "--z", "1", "--function", "dini", "--c", "1-nu")
    assert "c=0.5" in d["function"]


def test_eval_bad_q(capsys):
    code, _, err = run(capsys, "eval", "--nu", "0", "--q", "1.5", "--z", "0")
    assert code == 2 and "q" in err


def test_eval_dini_needs_c(capsys):
    code, _, err = run(capsys, "eval", "--nu", "0", "--q", "0.5", "--z", "1", "--function", "dini")
    assert code == 2 and "--c" in err


def test_zeros_table(capsys):
    d = run_json(capsys, "zeros", "--kind", "jackson2", "--nu", "0", "--q", "0.5", "--n", "30")
    rows = d["zeros"]
    assert len(rows) == 30 and d["sigma2_check"] == "PASS"
    zs = [r["zero"] for r in rows]
    assert all(a < b for a, b in zip(zs, zs[1:]))
    assert all(r["bracket_lo"] <= r["zero"] <= r["bracket_hi"] and r["sigma2_check"] == "PASS" for r in rows)


def test_zeros_short_table_skips_check(capsys):
    d = run_json(capsys, "zeros", "--nu", "0", "--q", "0.5", "--n", "5")
    assert d["sigma2_check"] == "SKIPPED"


@pytest.mark.parametrize("kind", ["jackson2", "hahnexton3"])
def test_radius_equals_dini_zero(capsys, kind):
    common = ["--kind", kind, "--nu", "0.5", "--q", "0.5"]
    r = run_json(capsys, "radius", "--mode", "starlike", "--norm", "g", "--alpha", "0", *common)
    z = run_json(capsys, "zeros", "--family", "dini", "--c", "1-nu", "--n", "3", *common)
    assert abs(r["radius"] - z["zeros"][0]["zero"]) < 1e-10


def test_radius_domain_error(capsys):
    code, _, err = run(capsys, "radius", "--mode", "convex", "--norm", "f", "--nu", "-0.5", "--q", "0.5")
    assert code == 2


def test_rayleigh(capsys):
    d = run_json(capsys, "rayleigh", "--nu", "0", "--q", "0.5")
    assert d["sigma2_closed"] == pytest.approx(0.5)
    assert d["first_zero_squared_inside"] is True


def test_thresholds(capsys):
    d = run_json(capsys, "thresholds", "--q", "0.5")
    for key in ("nu_star", "nu_zero", "exploratory_nu_zero_ge_nu_star"):
        assert key in d
    assert -1 < d["nu_star"] < d["nu_zero"]
    rows = run_json(capsys, "thresholds", "--q", "0.3,0.5")
    assert [r["q"] for r in rows] == [0.3, 0.5]


def test_verify_command(capsys):
    d = run_json(capsys, "verify", "--nu", "0.5", "--q", "0.5", "--norm", "g", "--mode", "starlike",
                 "--jensen-degree", "6")
    assert d["circle_check"] and d["jensen_hyperbolic"] and d["laguerre_ok"]
    assert d["min_re_inside"] > 0 > d["min_re_outside"]


def test_dini_sweep(capsys):
    d = run_json(capsys, "dini-sweep", "--q", "0.5", "--c", "1-nu", "--nu", "0,0.5,1,2")
    assert len(d["rows"]) == 4 and d["monotone_increasing"] is True


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_figures_schema_and_counts(capsys, tmp_path):
    run_json(capsys, "figures", "--out-dir", str(tmp_path))
    fig1, fig2 = _read_csv(tmp_path / "fig1.csv"), _read_csv(tmp_path / "fig2.csv")
    assert list(fig1[0]) == ["q", "nu", "j_nu_1"] and list(fig2[0]) == ["q", "nu", "tau"]
    assert len(fig1) == len(fig2) == 6 * 37
    qs = sorted({float(r["q"]) for r in fig1})
    assert qs == [0.1, 0.2, 0.3, 0.4, 0.5, 0.6]
    for q in qs:
        rows = [r for r in fig1 if float(r["q"]) == q]
        nus = [float(r["nu"]) for r in rows]
        js = [float(r["j_nu_1"]) for r in rows]
        assert nus[0] == -0.95 and nus[-1] == -0.05 and nus == sorted(nus)
        assert all(a < b for a, b in zip(js, js[1:]))


def test_fig2_tau_approaches_half(capsys, tmp_path):
    run_json(capsys, "figures", "--out-dir", str(tmp_path), "--q", "0.5")
    taus = [float(r["tau"]) for r in _read_csv(tmp_path / "fig2.csv")]
    gaps = [abs(t - 0.5) for t in taus[-5:]]
    assert all(a > b for a, b in zip(gaps, gaps[1:])) and gaps[-1] < 0.05


def test_figures_unwritable_path(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _, err = run(capsys, "figures", "--out-dir", str(blocker / "sub"), "--q", "0.5")
    assert code == 4 and err


def test_output_unwritable(capsys, tmp_path):
    code, _, _ = run(capsys, "eval", "--nu", "0", "--q", "0.5", "--z", "0", "-o", str(tmp_path / "no" / "x.json"))
    assert code == 4


def test_env_tolerance(capsys, monkeypatch):
    monkeypatch.setenv("QBESSEL_TOL", "1e-6")
    d = run_json(capsys, "eval", "--nu", "0", "--q", "0.5", "--z", "1")
    assert d["tol"] == 1e-6
    d = run_json(capsys, "eval", "--nu", "0", "--q", "0.5", "--z", "1", "--tol", "1e-12")
    assert d["tol"] == 1e-12
    monkeypatch.setenv("QBESSEL_TOL", "abc")
    assert run(capsys, "eval", "--nu", "0", "--q", "0.5", "--z", "1")[0] == 2


def test_csv_seventeen_digits(capsys):
    code, out, _ = run(capsys, "eval", "--nu", "0.5", "--q", "0.5", "--z", "0.3", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert out.splitlines()[0].startswith("kind,nu,q,function")
    v = rows[0]["value_re"]
    assert v == f"{float(v):.17g}"
    assert len(v.replace("-", "").replace(".", "").lstrip("0").split("e")[0]) == 17


def test_parse_c():
    assert parse_c("1-nu", 0.3) == pytest.approx(0.7)
    assert parse_c("2+nu", 0.5) == 2.5
    assert parse_c("-nu", 0.5) == -0.5
    assert parse_c("0.25", 9.0) == 0.25


def test_module_entry_point_deterministic():
    argv = [sys.executable, "-m", "qbessel", "zeros", "--nu", "0.5", "--q", "0.3", "--n", "20", "--format", "csv"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a.startswith(b"index,zero,bracket_lo,bracket_hi,tol,sigma2_check")
