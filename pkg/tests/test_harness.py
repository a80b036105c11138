import numpy as np
import pytest
from scipy import stats

from gcmlab._errors import DegenerateInputError, InputError, ValidationError
from gcmlab.harness import (
    ExperimentConfig,
    PolynomialTruth,
    integral_error_check,
    ks_distance,
    rate_regression,
    run_experiment,
)


def _small(**kw):
    base = dict(scenario="isoreg", truth={"coefficients": [0, 1]}, t0=0.5,
                dependence={"kind": "iid", "sigma": 0.3}, n_grid=(100, 200, 400), R=100, seed=3,
                limit={"R": 200})
    base.update(kw)
    return ExperimentConfig(**base)


def test_ks_distance_examples():
    assert ks_distance([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 0.0
    assert ks_distance([0.0, 1.0], [5.0, 6.0]) == 1.0
    assert ks_distance([0.0, 1.0], [0.5]) == 0.5


def test_ks_distance_matches_scipy(rng):
    a, b = rng.normal(size=300), rng.normal(0.2, 1, size=170)
    assert abs(ks_distance(a, b) - stats.ks_2samp(a, b).statistic) < 1e-12


def test_rate_regression_exact_power_law():
    ns = np.array([100, 400, 1600, 6400])
    slope, se = rate_regression(ns, 3.0 * ns ** (-1 / 3))
    assert abs(slope + 1 / 3) < 1e-12
    assert se < 1e-12


def test_rate_regression_noisy(rng):
    ns = np.array([400, 1600, 6400, 25600])
    y = ns ** (-0.4) * np.exp(rng.normal(0, 0.02, size=4))
    slope, se = rate_regression(ns, y)
    assert abs(slope + 0.4) < 3 * se + 0.01


def test_rate_regression_rejects_bad_input():
    with pytest.raises(InputError):
        rate_regression([100, 200], [1.0, 0.5])
    with pytest.raises(DegenerateInputError):
        rate_regression([100, 200, 400], [1.0, 0.0, 0.5])


def test_polynomial_truth_density_helpers():
    f = PolynomialTruth((3.0, -6.0, 3.0), (0.0, 1.0))  # 3 (1 - t)^2
    f.check_density()
    u = np.linspace(0.01, 0.99, 25)
    assert np.max(np.abs(f.cdf(f.ppf(u)) - u)) < 1e-10
    with pytest.raises(ValidationError):
        PolynomialTruth((1.0, 1.0)).check_density()


def test_zero_noise_isoreg_is_exact():
    rep = run_experiment(_small(dependence={"kind": "iid", "sigma": 0.0}))
    for r in rep.results:
        assert np.all(r.errors == 0.0)
    assert rep.exponent is None


@pytest.mark.parametrize(
    "kw, hypothesis",
    [
        (dict(truth={"coefficients": [0.5]}), "m'(t0) > 0"),
        (dict(scenario="convexreg", truth={"coefficients": [0, 1]}), "m''(t0) > 0"),
        (dict(t0=1.0), "t0 interior"),
        (dict(scenario="grenander", truth={"coefficients": [1.0], "support": [-1, 0]}, t0=-0.5), "f'(t0) > 0"),
        (dict(scenario="isokernel", bandwidth={"exponent": -0.5}), "h = a n^(-1/3) or h >> n^(-1/3)"),
    ],
)
def test_hypothesis_violations_are_named(kw, hypothesis):
    with pytest.raises(ValidationError) as exc:
        _small(**kw)
    assert exc.value.hypothesis == hypothesis
    assert hypothesis in str(exc.value)


def test_small_R_rejected():
    with pytest.raises(ValidationError, match="R >= 100"):
        _small(R=10)


def test_experiment_is_deterministic_and_worker_independent():
    a = run_experiment(_small())
    b = run_experiment(_small())
    c = run_experiment(_small(workers=2))
    for ra, rb, rc in zip(a.results, b.results, c.results):
        assert np.array_equal(ra.errors, rb.errors)
        assert np.array_equal(ra.errors, rc.errors)
    assert np.array_equal(a.limit_sample, c.limit_sample)


def test_replications_do_not_depend_on_grid_position():
    # replication seeds depend on (n-index, j) only, so dropping the last n keeps the others
    a = run_experiment(_small())
    b = run_experiment(_small(n_grid=(100, 200)))
    assert np.array_equal(a.results[1].errors, b.results[1].errors)
    assert not any(c["name"] == "exponent" for c in b.checks)


def test_report_json_round_trip():
    import json

    rep = run_experiment(_small())
    doc = json.loads(json.dumps(rep.to_json()))
    assert doc["theorem"] == "3i"
    assert [r["n"] for r in doc["per_n"]] == [100, 200, 400]
    assert ExperimentConfig.from_dict(doc["config"]).digest() == _small().digest()


def test_zero_exponent_tolerance_fails():
    rep = run_experiment(_small(tolerances={"exponent": 0.0, "ks": None}))
    assert not rep.passed
    assert [c["name"] for c in rep.checks] == ["exponent"]


def test_integral_check_statistic_is_standardised():
    out = integral_error_check(_small(R=200), n=400)
    s = out["statistic"]
    assert abs(np.mean(s)) < 0.25
    assert 0.8 < np.std(s) < 1.2
