import json

import numpy as np
import pytest

from gcmlab.cli import main, read_column, ParseError
from gcmlab.config import bundled_config_path
from gcmlab.limits import LimitSpec, DriverSpec, sample_limit_batch
from gcmlab.processes import DependenceModel, fgn_autocovariance


def _csv(path, header, rows):
    path.write_text(header + "\n" + "\n".join(",".join(repr(float(v)) for v in r) for r in rows) + "\n")
    return path


def _load(path):
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def test_fit_isoreg_returns_monotone_input(tmp_path, rng):
    n = 40
    t = np.arange(1, n + 1) / n
    y = np.sort(rng.normal(size=n))
    inp = _csv(tmp_path / "in.csv", "index,t,y", zip(range(1, n + 1), t, y))
    out = tmp_path / "fit.csv"
    assert main(["fit", "--estimator", "isoreg", "--input", str(inp), "--output", str(out)]) == 0
    res = _load(out)
    assert np.array_equal(res[:, 0], t)
    assert np.array_equal(res[:, 2], y)
    side = json.loads(out.with_suffix(".json").read_text())
    assert side["estimator"] == "isoreg" and side["n"] == n


def test_fit_grenander_single_observation(tmp_path):
    inp = tmp_path / "x.csv"
    inp.write_text("x\n-2\n")
    out = tmp_path / "g.csv"
    assert main(["fit", "--estimator", "grenander", "--input", str(inp), "--output", str(out)]) == 0
    res = _load(out)
    assert res[:, 0].tolist() == [-2.0, 0.0]
    assert res[1, 2] == 0.5  # left-continuous on (-2, 0]
    assert json.loads(out.with_suffix(".json").read_text())["integral_check"]["integral_of_estimate"] == 1.0


@pytest.mark.parametrize("estimator", ["convexreg", "isokernel"])
def test_fit_kernel_regressions(tmp_path, estimator):
    n = 200
    t = np.arange(1, n + 1) / n
    inp = _csv(tmp_path / "in.csv", "index,t,y", zip(range(1, n + 1), t, t**2))
    out = tmp_path / "fit.csv"
    assert main(["fit", "--estimator", estimator, "--input", str(inp), "--output", str(out),
                 "--bandwidth", "0.1"]) == 0
    res = _load(out)
    assert np.all(np.diff(res[:, 2]) >= -1e-12)  # hull slopes are nondecreasing


def test_fit_convexdensity(tmp_path, rng):
    x = rng.beta(1, 3, size=400)
    inp = _csv(tmp_path / "d.csv", "x", x[:, None])
    out = tmp_path / "cd.csv"
    assert main(["fit", "--estimator", "convexdensity", "--input", str(inp), "--output", str(out),
                 "--support", "0", "1"]) == 0
    assert np.all(np.diff(_load(out)[:, 2]) >= -1e-12)


def test_fit_missing_file_exit_2(tmp_path, capsys):
    missing = tmp_path / "nope.csv"
    assert main(["fit", "--estimator", "isoreg", "--input", str(missing)]) == 2
    assert str(missing) in capsys.readouterr().err


def test_fit_parse_error_names_line(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("index,t,y\n1,0.5,0.1\n2,1.0,oops\n")
    assert main(["fit", "--estimator", "isoreg", "--input", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "line 3" in err and str(bad) in err


def test_fit_precondition_failure_exit_3(tmp_path):
    inp = tmp_path / "x.csv"
    inp.write_text("x\n0.5\n")  # positive observation for the increasing estimator
    assert main(["fit", "--estimator", "grenander", "--input", str(inp)]) == 3


def test_read_column_rules(tmp_path):
    p = tmp_path / "e.csv"
    p.write_text("")
    with pytest.raises(ParseError, match="line 1"):
        read_column(p)
    p.write_text("a,b\n1,2\n")
    with pytest.raises(ParseError, match="--column"):
        read_column(p)
    assert read_column(p, "b").tolist() == [2.0]


def test_simulate_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert main(["simulate", "--model", "iid", "--seed", "7", "--n", "10", "--output", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    res = _load(a)
    assert res[:, 0].tolist() == list(range(1, 11))
    # thin adapter: same numbers as the module API
    assert np.array_equal(res[:, 1], DependenceModel("iid").generate(10, 7))


def test_simulate_fgn_lag_one_covariance(tmp_path):
    out = tmp_path / "f.csv"
    assert main(["simulate", "--model", "fgn", "--H", "0.75", "--n", "200000", "--seed", "1",
                 "--output", str(out)]) == 0
    x = _load(out)[:, 1]
    lag1 = np.mean(x[1:] * x[:-1])
    assert abs(lag1 - fgn_autocovariance(0.75, 1)) < 0.02


def test_simulate_rejects_bad_H():
    assert main(["simulate", "--model", "fgn", "--H", "1.2", "--n", "10", "--seed", "1"]) == 3


def test_limit_none_driver_all_zero(tmp_path):
    out = tmp_path / "l.csv"
    assert main(["limit", "--driver", "none", "--R", "5", "--output", str(out)]) == 0
    assert np.all(_load(out) == 0.0)


def test_limit_draw_matches_module(tmp_path):
    out = tmp_path / "l.csv"
    assert main(["limit", "draw", "--driver", "bm", "--R", "4", "--seed", "9", "--output", str(out)]) == 0
    ref = sample_limit_batch(LimitSpec(driver=DriverSpec("bm"), seed=9), 4)
    assert np.array_equal(_load(out)[:, 2], ref["argmin"])


def test_limit_rate(capsys):
    assert main(["limit", "rate", "--a", "-0.5", "--b", "0", "--beta", "0.5", "--p", "2"]) == 0
    assert capsys.readouterr().out.strip() == "n^{-1/3}"
    assert main(["limit", "rate", "--a", "-0.5", "--b", "0", "--beta", "2", "--p", "2"]) == 3


def test_limit_chernoff_centred(tmp_path):
    out = tmp_path / "c.csv"
    assert main(["limit", "chernoff", "--R", "1000", "--seed", "0", "--output", str(out)]) == 0
    x = _load(out)[:, 0]
    assert x.shape == (1000,)
    assert abs(x.mean()) <= 4 * x.std() / np.sqrt(1000)


def test_limit_constants(capsys):
    assert main(["limit", "constants", "--theorem", "3i", "--param", "sigma=0.3", "--param", "m1=1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["rate_exponent"] == pytest.approx(-1 / 3)


def test_verify_bundled_config_passes(tmp_path, capsys):
    assert main(["verify", "examples/thm3i.cfg", "--output-dir", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "fitted exponent" in out and "6400" in out
    names = sorted(p.name for p in tmp_path.iterdir())
    assert len([n for n in names if n.endswith(".csv")]) == 3
    assert any(n.startswith("isoreg_6400_") for n in names)


def test_verify_zero_tolerance_exit_1(tmp_path):
    assert main(["verify", str(bundled_config_path("thm3i")), "--output-dir", str(tmp_path),
                 "--exponent-tol", "0"]) == 1


def test_verify_hypothesis_violation_exit_3(tmp_path, capsys):
    doc = json.loads(bundled_config_path("thm3i").read_text())
    doc["experiment"]["truth"]["coefficients"] = [0.5]
    p = tmp_path / "bad.cfg"
    p.write_text(json.dumps(doc))
    assert main(["verify", str(p)]) == 3
    err = capsys.readouterr().err
    assert "m'(t0) > 0" in err and "/experiment/truth" in err


def test_verify_schema_violation_exit_3(tmp_path, capsys):
    doc = json.loads(bundled_config_path("thm3i").read_text())
    doc["experiment"]["n_grid"] = "many"
    p = tmp_path / "bad.cfg"
    p.write_text(json.dumps(doc))
    assert main(["verify", str(p)]) == 3
    assert "/experiment/n_grid" in capsys.readouterr().err
