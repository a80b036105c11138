import numpy as np
import pytest

from gcmlab._errors import DegenerateInputError, DomainError, ValidationError
from gcmlab.gcm import GridFunction, gcm, pava
from gcmlab.kernels import epanechnikov
from gcmlab.regression import (
    convexified_kernel_regression,
    cumulative_polygon,
    gasser_muller,
    isotonic_regression,
    isotonized_kernel_regression,
)
from oracles import isotonic_by_partitions


def _direct_polygon(y, t):
    """x_n(t) = n^-1 sum_{i<=m} y_i + ((nt - 1/2) - m) y_{m+1}/n, m = floor(nt - 1/2)."""
    n = len(y)
    m = int(np.floor(n * t - 0.5))
    head = np.sum(y[:m]) / n
    tail = ((n * t - 0.5) - m) * y[m] / n if m < n else 0.0
    return head + tail


def test_cumulative_polygon_examples(rng):
    assert np.all(cumulative_polygon(np.zeros(5)).values == 0)
    two = cumulative_polygon([1.0, 1.0])
    assert two(1.0) == pytest.approx(0.75)
    assert two(1.25) == pytest.approx(1.0)
    y = rng.normal(size=4)
    poly = cumulative_polygon(y)
    for t in np.linspace(1 / 8, 1 + 1 / 8 - 1e-9, 100):
        assert poly(t) == pytest.approx(_direct_polygon(y, t), abs=1e-14)


def test_isotonic_examples(rng):
    np.testing.assert_allclose(isotonic_regression([0.1, 0.5, 2.0]), [0.1, 0.5, 2.0])
    np.testing.assert_allclose(isotonic_regression([3, 1, 2]), [2, 2, 2])
    for _ in range(100):
        y = rng.normal(size=int(rng.integers(2, 9)))
        np.testing.assert_allclose(
            isotonic_regression(y), isotonic_by_partitions(y, np.ones_like(y)), atol=1e-10
        )


def test_isotonic_properties(rng):
    y = np.cumsum(rng.normal(size=300)) * 0.1 + rng.normal(size=300)
    fit = isotonic_regression(y)
    assert np.all(np.diff(fit) >= -1e-12)
    assert fit.mean() == pytest.approx(y.mean())
    np.testing.assert_allclose(fit, pava(y), atol=1e-12)
    ssq = np.sum((y - fit) ** 2)
    for _ in range(1000):
        cand = np.sort(rng.normal(y.mean(), y.std(), size=300))
        assert ssq <= np.sum((y - cand) ** 2)


def test_gasser_muller_examples(rng):
    n = 200
    t = np.arange(1, n + 1) / n
    gm = gasser_muller(np.full(n, 2.5), h=0.1)
    assert gm(0.5) == pytest.approx(2.5)
    lin = gasser_muller(t, h=0.1)
    for s in (0.3, 0.5, 0.8):
        assert abs(lin(s) - s) <= 10 / n
    noisy = gasser_muller(rng.normal(size=n), h=0.1)
    assert not noisy.is_boundary(0.5) and noisy.is_boundary(0.05)
    # boundary evaluation renormalises the kernel, so constants are still reproduced
    assert gasser_muller(np.full(n, 2.5), h=0.1)(0.02) == pytest.approx(2.5)
    with pytest.raises(DomainError):
        gm(1.5)
    with pytest.raises(ValidationError):
        gasser_muller(t, h=0.5)


def test_gasser_muller_lattice_agrees_with_evaluator(rng):
    y = rng.normal(size=150)
    gm = gasser_muller(y, h=0.13)
    grid, values = gm.on_lattice()
    assert len(grid) >= 600
    idx = np.linspace(0, len(grid) - 1, 25).astype(int)
    np.testing.assert_allclose(values[idx], gm(grid[idx]), atol=1e-12)


def test_convexified_regression(rng):
    n = 400
    t = np.arange(1, n + 1) / n
    convex = convexified_kernel_regression(2 * (t - 0.5) ** 2, h=0.1)
    assert convex.c == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(convex.fit(convex.grid), convex.x_n, atol=1e-10)
    bump = convexified_kernel_regression(1 + np.exp(-((t - 0.5) ** 2) / 0.01), h=0.05)
    assert bump.c < 1
    peak = np.argmin(np.abs(bump.grid - 0.5))
    assert bump.fit(bump.grid[peak]) < bump.x_n[peak] - 0.1
    from scipy.integrate import trapezoid

    assert trapezoid(bump.normalized(bump.grid), bump.grid) == pytest.approx(
        trapezoid(bump.x_n, bump.grid), rel=1e-12
    )
    assert np.all(bump.fit(bump.grid) <= bump.x_n + 1e-12)
    with pytest.raises(DegenerateInputError):
        convexified_kernel_regression(-np.ones(n), h=0.1)


def test_isotonized_regression(rng):
    n, h = 800, 0.08
    t = np.arange(1, n + 1) / n
    const = isotonized_kernel_regression(np.full(n, 1.7), h=h)
    np.testing.assert_allclose(const.fit.slopes, 1.7, atol=1e-10)
    m = t**2 + t  # increasing, m'' = 2
    fit = isotonized_kernel_regression(m, h=h)
    for t0 in (0.3, 0.5, 0.7):
        bias = 0.5 * 2 * h**2 * epanechnikov.moment(2)
        assert fit.raw_at(t0) == pytest.approx(t0**2 + t0 + bias, abs=1e-6)
        # the isotonized slope is the chord over one lattice cell to the right of t0
        assert fit(t0) == pytest.approx(t0**2 + t0 + bias, abs=(2 * t0 + 1) * (fit.grid[1] - fit.grid[0]))
    # monotone m_n: isotonization leaves the slopes of x_n alone
    raw_slopes = np.diff(fit.x_n) / np.diff(fit.grid)
    np.testing.assert_allclose(fit.fit.derivative()(fit.grid[:-1]), raw_slopes, atol=1e-9)


def test_isotonized_equals_pava_of_lattice_slopes(rng):
    n = 300
    y = np.arange(1, n + 1) / n + 0.5 * rng.normal(size=n)
    fit = isotonized_kernel_regression(y, h=0.1)
    raw = np.diff(fit.x_n) / np.diff(fit.grid)
    iso = pava(raw, np.diff(fit.grid))
    np.testing.assert_allclose(fit.fit.derivative()(fit.grid[:-1]), iso, atol=1e-9)
