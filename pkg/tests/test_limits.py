import numpy as np
import pytest
from scipy import stats
from scipy.integrate import trapezoid

from gcmlab._errors import DomainError, InputError, ValidationError
from gcmlab.limits import (
    DriverSpec,
    LimitSpec,
    chernoff_sample,
    rate_dn,
    sample_driver,
    sample_limit_batch,
    sample_limit_functional,
    sample_two_sided_bm,
    sample_two_sided_fbm,
    theorem_constants,
)
from gcmlab.processes import derive_seed

DELTA = 2.0**-9


def test_bm_basic_properties():
    b = sample_two_sided_bm(2.0, 0.01, 1.0, 0)
    assert b(0.0) == 0.0
    assert b.knots[0] == pytest.approx(-2.0) and b.knots[-1] == pytest.approx(2.0)
    v1 = np.array([sample_two_sided_bm(1.0, 0.125, 1.5, derive_seed(1, j)) (1.0) for j in range(4000)])
    vm = np.array([sample_two_sided_bm(1.0, 0.125, 1.5, derive_seed(1, j)) (-1.0) for j in range(4000)])
    assert np.var(v1) == pytest.approx(1.5**2, rel=0.08)
    assert abs(np.corrcoef(v1, vm)[0, 1]) < 3 / np.sqrt(4000)


def test_bm_truncation_is_nested():
    short = sample_two_sided_bm(2.0, DELTA, 1.0, 9).values
    long = sample_two_sided_bm(4.0, DELTA, 1.0, 9).values
    m, M = len(short) // 2, len(long) // 2
    np.testing.assert_array_equal(short, long[M - m: M + m + 1])


def test_fbm_scaling_and_bm_case():
    R = 3000
    p = [sample_two_sided_fbm(0.75, 2.0, 0.125, 1.0, derive_seed(2, j)) for j in range(R)]
    v1 = np.var([x(1.0) for x in p])
    v2 = np.var([x(2.0) for x in p])
    assert v2 / v1 == pytest.approx(2**1.5, rel=0.1)
    assert p[0](0.0) == 0.0
    half = np.array([sample_two_sided_fbm(0.5, 1.0, 0.125, 1.0, derive_seed(3, j))(1.0) for j in range(R)])
    bm = np.array([sample_two_sided_bm(1.0, 0.125, 1.0, derive_seed(4, j))(1.0) for j in range(R)])
    assert stats.ks_2samp(half, bm).statistic < 0.05
    with pytest.raises(ValidationError):
        sample_two_sided_fbm(1.2, 1.0, 0.1, 1.0, 0)


def test_zero_driver_is_deterministic():
    d = sample_limit_functional(LimitSpec(driver=DriverSpec("none")))
    assert (d.t_value, d.slope, d.argmin) == (0.0, 0.0, 0.0)
    assert d.stable
    # a gridded Brownian driver with zero scale: chord slope of the parabola over [0, delta]
    g = sample_limit_functional(LimitSpec(driver=DriverSpec("bm", scale=0.0)))
    assert g.t_value == 0.0 and g.argmin == 0.0
    assert g.slope == pytest.approx(DELTA)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_linear_driver_slope(seed):
    d = sample_limit_functional(LimitSpec(driver=DriverSpec("linear")), seed=seed)
    z = np.random.default_rng(np.random.SeedSequence(seed)).standard_normal()
    assert d.slope == z
    assert d.argmin == pytest.approx(-z / 2, rel=1e-15)
    assert d.t_value == 0.0
    a = np.linspace(-3, 3, 101)
    np.testing.assert_array_equal(d.slope < a, d.argmin_shift(a) > 0)


def test_switch_relation_every_draw():
    spec = LimitSpec(A=1.7, driver=DriverSpec("bm", scale=0.8), c_max=4.0, delta=2**-7)
    a_grid = np.linspace(-3, 3, 61)
    for j in range(30):
        d = sample_limit_functional(spec, seed=derive_seed(5, j))
        lhs = d.slope < a_grid
        rhs = d.argmin_shift(a_grid) > 0
        np.testing.assert_array_equal(lhs, rhs)
        # the hull-based minimiser agrees with a brute-force argmin of y(s) - a s
        u = d.hull.knots
        s = u * d.lam
        for a in (-1.0, 0.0, 0.5):
            vals = d.hull(u) - a * s
            assert d.hull(d.argmin_shift(a) / d.lam) - a * d.argmin_shift(a) == pytest.approx(vals.min(), abs=1e-9)


def test_slope_argmin_identity_small():
    A, R = 2.5, 1500
    slope = sample_limit_batch(LimitSpec(A=A), R, seed=6)["slope"]
    arg = sample_limit_batch(LimitSpec(A=1.0, driver=DriverSpec("bm", scale=A**-0.25)), R, seed=7)["argmin"]
    # argmin(s^2 + B(s / sqrt(A))) with B(s/sqrt A) = A^{-1/4} B(s) in law
    assert stats.ks_2samp(slope, 2 * np.sqrt(A) * arg).statistic < 0.06


def test_self_similarity_small():
    A, sigma, R = 3.0, 0.5, 1500
    lhs = sample_limit_batch(LimitSpec(A=A, driver=DriverSpec("bm", scale=sigma)), R, seed=8)["t_value"]
    rhs = sample_limit_batch(LimitSpec(), R, seed=9)["t_value"] * A ** (-1 / 3) * sigma ** (4 / 3)
    assert stats.ks_2samp(lhs, rhs).statistic < 0.06


def test_chernoff_symmetry_and_scale():
    x = chernoff_sample(2000, seed=3)
    assert abs(x.mean()) < 4 * x.std() / np.sqrt(2000)
    # standard deviation of the Chernoff argmin is about 0.52
    assert x.std() == pytest.approx(0.52, abs=0.03)


def test_chernoff_truncation_coupled():
    a = chernoff_sample(300, c_max=2.0, seed=4)
    b = chernoff_sample(300, c_max=4.0, seed=4)
    assert abs(np.quantile(a, 0.9) - np.quantile(b, 0.9)) < 0.02


def test_smoothed_driver_matches_direct_convolution():
    drv = DriverSpec("smoothed", scale=1.3)
    v = sample_driver(drv, 2.0, 2**-6, 11)
    base = sample_driver(DriverSpec("bm"), 2.0 + 1.0 + 2 * 2**-6, 2**-6, 11)
    kern = drv.kernel
    uu = np.linspace(-1, 1, 2_000_001)
    for s in (-1.5, 0.25, 1.0):
        direct = trapezoid((base(s - uu) - base(-uu)) * kern._dk(uu), uu)  # k' on the closed support
        assert v(s) == pytest.approx(1.3 * direct, abs=1e-8)
    assert v(0.0) == 0.0


def test_spec_validation():
    with pytest.raises(ValidationError):
        LimitSpec(p=1.0)
    with pytest.raises(ValidationError):
        LimitSpec(A=0.0)
    with pytest.raises(ValidationError):
        DriverSpec("levy")
    spec = LimitSpec(A=2.0, driver=DriverSpec("smoothed", scale=0.5))
    again = LimitSpec.from_dict(spec.to_dict())
    assert again.driver.kind == "smoothed" and again.driver.base.kind == "bm"
    with pytest.raises(InputError):
        sample_two_sided_bm(1.0, 0.1, 1.0, None)


def test_rate_dn_examples():
    assert rate_dn((-0.5, 0), (0, 0), 0.5, 2) == pytest.approx((-1 / 3, 0.0))
    r, d = 1, 0.5
    e = rate_dn((-r * d / 2, 0), (0, 0), 1 - r * d / 2, 2)
    assert e[0] == pytest.approx(-r * d / (2 + r * d)) and e[0] == pytest.approx(-0.2)
    assert rate_dn((-0.5, 0.5), (0, 1), 1.0, 2) == pytest.approx((-0.5, -0.5))
    with pytest.raises(DomainError):
        rate_dn((0, 0), (0, 0), 2.0, 2.0)


def test_theorem_constants_examples():
    c = theorem_constants("3i", {"m1": 1.0, "sigma": 1.0})
    assert c.c1 == pytest.approx(2 ** (-2 / 3)) and c.c2 == pytest.approx(2 ** (-1 / 3))
    assert theorem_constants("3ii", {"m1": 1.0, "kappa": 2.0}).c1 == pytest.approx(2 ** (-4 / 3))
    assert theorem_constants("10", {"f": 1.0, "f1": 2.0}).c1 == pytest.approx(0.5)
    c = theorem_constants("3iii", {"m1": 1.0, "eta": 1.0, "r": 1, "d": 0.5})
    assert c.rate_exponent == pytest.approx(-0.2)
    # beta = 1/2 reduces 3(iii) to the Brownian constants of 3(i) with sigma = eta
    c = theorem_constants("3iii", {"m1": 2.0, "eta": 1.5, "r": 1, "d": 1.0})
    b = theorem_constants("3i", {"m1": 2.0, "sigma": 1.5})
    assert c.c1 == pytest.approx(b.c1) and c.c2 == pytest.approx(b.c2)
    c = theorem_constants("4i", {"m2": 2.0, "a": 1.0, "sigma": 0.5})
    assert c.extra["A"] == 1.0 and c.extra["c"] == 0.5 and c.extra["bias"] == pytest.approx(0.2)
    assert theorem_constants("6i", {"sigma": 1.0}).extra["variance"] == pytest.approx(0.6)
    with pytest.raises(DomainError):
        theorem_constants("3i", {"m1": 0.0, "sigma": 1.0})
    with pytest.raises(DomainError):
        theorem_constants("10", {"f": 1.0, "f1": -1.0})
