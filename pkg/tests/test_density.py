import numpy as np
import pytest

from gcmlab._errors import DomainError, InputError
from gcmlab.density import (
    DensitySample,
    convex_density_estimate,
    empirical_cdf,
    grenander_decreasing,
    grenander_increasing,
    kernel_density,
)
from gcmlab.kernels import KernelSpec
from oracles import hull_by_chords


def test_ecdf_examples(rng):
    one = empirical_cdf([3.0])
    assert one(2.9) == 0 and one(3.0) == 1 and one(10) == 1
    two = empirical_cdf([1.0, 2.0])
    np.testing.assert_allclose(two(np.array([0.5, 1.0, 1.5, 2.0])), [0, 0.5, 0.5, 1])
    x = rng.normal(size=50)
    q = rng.normal(size=200) * 1.5
    counts = np.array([np.mean(x <= s) for s in q])
    np.testing.assert_allclose(empirical_cdf(x)(q), counts)


def test_grenander_examples():
    single = grenander_increasing([-2.0])
    assert single(-1.0) == pytest.approx(0.5)
    assert single(0.0) == pytest.approx(0.5)
    pair = grenander_increasing([-2.0, -1.0])
    np.testing.assert_allclose(pair(np.array([-1.9, -1.0, -0.5])), 0.5)
    with pytest.raises(DomainError):
        grenander_increasing([-1.0, 0.5])


def test_grenander_properties(rng):
    for _ in range(20):
        x = -rng.beta(1, 2, size=int(rng.integers(1, 300)))
        fit = grenander_increasing(x)
        assert fit.integral() == pytest.approx(1.0, abs=1e-12)
        assert np.all(np.diff(fit.heights) >= -1e-12)
        assert np.all(fit.heights >= 0)


def test_grenander_matches_hull_oracle(rng):
    x = np.sort(-rng.uniform(size=9))
    px = np.append(x, 0.0)
    py = np.append(np.arange(9) / 9, 1.0)
    fit = grenander_increasing(x)
    np.testing.assert_allclose(fit.hull(px), [hull_by_chords(px, py, t) for t in px], atol=1e-12)


def test_decreasing_mirror(rng):
    x = rng.exponential(size=200)
    dec = grenander_decreasing(x)
    inc = grenander_increasing(-x)
    t = np.linspace(0.001, x.max() - 1e-3, 300)
    np.testing.assert_allclose(dec(t), inc(-t), atol=1e-12)
    assert np.all(np.diff(dec.heights) <= 1e-12)
    assert dec.integral() == pytest.approx(1.0)


@pytest.mark.parametrize("family", ["epanechnikov", "triweight"])
def test_kernel_density_exact(rng, family):
    k = KernelSpec(family)
    obs = rng.uniform(size=400)
    t = np.linspace(-0.1, 1.1, 97)
    h = 0.07
    direct = np.array([k.pdf((s - obs) / h).sum() for s in t]) / (400 * h)
    np.testing.assert_allclose(kernel_density(obs, k, h, t), direct, atol=1e-10)


def test_convex_density(rng):
    obs = 1 - rng.uniform(size=2000) ** (1 / 3)  # density 3(1-t)^2
    res = convex_density_estimate(DensitySample(obs, (0, 1)), h=0.2)
    assert np.all(res.fit(res.grid) <= res.x_n + 1e-12)
    assert np.all(np.diff(res.fit.slopes) > 0)
    assert res.integral > 0
    assert res.normalized(res.grid).max() > res.fit(res.grid).max()
    with pytest.raises(DomainError):
        convex_density_estimate([-0.1, 0.2], h=0.1)
    with pytest.raises(DomainError):
        DensitySample([0.5, 2.0], (0, 1))
    with pytest.raises(DomainError):
        DensitySample([], (0, 1))


def test_convex_density_identity_and_hull_oracle(rng):
    grid = np.linspace(0.3, 0.7, 256)
    # a sample whose KDE is exactly convex on the grid is hard to build; use the
    # hull oracle on a small sample instead and check the convex case separately
    obs = rng.uniform(0.2, 0.8, size=12)
    res = convex_density_estimate(DensitySample(obs, (0, 1)), h=0.15, grid=grid)
    sub = np.arange(0, 256, 16)
    expected = [hull_by_chords(grid[sub], res.x_n[sub], t) for t in grid[sub]]
    from gcmlab.gcm import GridFunction, gcm

    np.testing.assert_allclose(gcm(GridFunction(grid[sub], res.x_n[sub]))(grid[sub]), expected, atol=1e-12)
    convex_part = np.linspace(0.81, 0.95, 64)
    flat = convex_density_estimate(DensitySample(np.full(5, 0.5), (0, 1)), h=0.3, grid=convex_part)
    # beyond the kernel support the estimate is identically zero: convex, fit equals x_n
    np.testing.assert_allclose(flat.fit(convex_part), flat.x_n, atol=1e-14)
    assert flat.integral == pytest.approx(0.0, abs=1e-14)
