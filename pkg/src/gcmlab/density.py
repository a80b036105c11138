"""Monotone (Grenander-type) and convex density estimation."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np
from scipy.integrate import trapezoid

from ._errors import DomainError, InputError, ValidationError
from ._validation import as_float_vector, check_positive
from .gcm import ConcaveFit, ConvexFit, GridFunction, _lower_hull, gcm
from .kernels import _as_kernel

__all__ = [
    "DensitySample",
    "EmpiricalCDF",
    "empirical_cdf",
    "MonotoneDensityFit",
    "grenander_increasing",
    "grenander_decreasing",
    "kernel_density",
    "ConvexDensityFit",
    "convex_density_estimate",
]


@dataclass(frozen=True, eq=False)
class DensitySample:
    """Observations together with the declared support interval.

    Parameters
    ----------
    observations : array_like
    support : (lo, hi), optional
        Closed support; either end may be infinite. Default ``(-inf, inf)``.
    """

    observations: np.ndarray
    support: tuple = (-np.inf, np.inf)

    def __post_init__(self):
        obs = as_float_vector(self.observations, "observations", min_length=1)
        lo, hi = (float(s) for s in self.support)
        if not lo < hi:
            raise InputError(f"invalid support ({lo}, {hi})")
        if np.any(obs < lo) or np.any(obs > hi):
            raise DomainError(f"observations must lie in the support [{lo}, {hi}]")
        object.__setattr__(self, "observations", obs)
        object.__setattr__(self, "support", (lo, hi))

    @property
    def n(self) -> int:
        return self.observations.shape[0]


def _as_density_sample(sample, support=(-np.inf, np.inf)) -> DensitySample:
    return sample if isinstance(sample, DensitySample) else DensitySample(sample, support)


class EmpiricalCDF(GridFunction):
    """Right-continuous empirical distribution function.

    Unlike a plain step :class:`GridFunction` it is defined on the whole line:
    0 below the smallest observation and 1 from the largest on.
    """

    def __call__(self, t, extrapolate=True):
        t_arr = np.asarray(t, dtype=float)
        j = np.searchsorted(self.knots, t_arr, side="right") - 1
        out = np.where(j < 0, 0.0, self.values[np.clip(j, 0, len(self) - 1)])
        return float(out) if np.ndim(out) == 0 else out


def empirical_cdf(sample) -> EmpiricalCDF:
    """ECDF jumping by (multiplicity)/n at each distinct observation."""
    s = _as_density_sample(sample)
    xs, counts = np.unique(s.observations, return_counts=True)
    return EmpiricalCDF(xs, np.cumsum(counts) / s.n, interpolation="step")


@dataclass(frozen=True, eq=False)
class MonotoneDensityFit:
    """Grenander-type estimate: piecewise-constant density from a hull of the ECDF.

    Attributes
    ----------
    hull : ConvexFit or ConcaveFit
        The hull of the empirical distribution function.
    increasing : bool
    """

    hull: object
    increasing: bool

    @property
    def knots(self):
        return self.hull.knots

    @property
    def heights(self):
        return self.hull.slopes

    @property
    def domain(self):
        return self.hull.domain

    def __call__(self, t):
        """Density estimate; zero outside the fitted range.

        The increasing estimate is left-continuous on ``(min obs, 0]``, the
        decreasing one right-continuous on ``[0, max obs)``, so each equals the
        slope of its hull on the segment to the left (resp. right) of ``t``.
        """
        t_arr = np.asarray(t, dtype=float)
        k, s = self.knots, self.heights
        lo, hi = self.domain
        if self.increasing:
            j = np.clip(np.searchsorted(k, t_arr, side="left") - 1, 0, len(s) - 1)
            inside = (t_arr > lo) & (t_arr <= hi)
        else:
            j = np.clip(np.searchsorted(k, t_arr, side="right") - 1, 0, len(s) - 1)
            inside = (t_arr >= lo) & (t_arr < hi)
        out = np.where(inside, s[j], 0.0)
        return float(out) if np.ndim(out) == 0 else out

    def integral(self) -> float:
        return float(np.sum(self.heights * np.diff(self.knots)))


def _unique_min(x, y):
    """Collapse repeated abscissae keeping the smallest ordinate."""
    xs, first = np.unique(x, return_index=True)
    ys = np.minimum.reduceat(y, first) if xs.shape[0] < x.shape[0] else y[first]
    return xs, ys


def grenander_increasing(sample) -> MonotoneDensityFit:
    """Nondecreasing density estimate on (min observation, 0].

    Slopes of the convex minorant of the ECDF on [min obs, 0]. The ECDF's graph
    is approached from below at every jump, so the hull is built on the points
    ``(x_(i), (i-1)/n)`` and ``(0, 1)``.

    Examples
    --------
    >>> fit = grenander_increasing([-2.0])
    >>> fit(-1.0)
    0.5
    """
    s = _as_density_sample(sample, (-np.inf, 0.0))
    x = np.sort(s.observations)
    if x[-1] > 0:
        raise DomainError("increasing Grenander estimate needs observations <= 0")
    n = s.n
    px = np.append(x, 0.0)
    py = np.append(np.arange(n) / n, 1.0)
    px, py = _unique_min(px, py)
    if px.shape[0] < 2:
        raise DomainError("all observations sit at 0; the estimate is undefined")
    idx = _lower_hull(px, py, 1e-12)
    hull = ConvexFit(px[idx], py[idx], touch_points=px)
    return MonotoneDensityFit(hull=hull, increasing=True)


def grenander_decreasing(sample) -> MonotoneDensityFit:
    """Nonincreasing density estimate on [0, max observation).

    Slopes of the concave majorant of the ECDF; the mirror image of
    :func:`grenander_increasing` applied to the negated sample.
    """
    s = _as_density_sample(sample, (0.0, np.inf))
    mirrored = grenander_increasing(-s.observations)
    k = -mirrored.knots[::-1]
    v = 1.0 - mirrored.hull.values[::-1]
    hull = ConcaveFit(k, v, touch_points=np.sort(-mirrored.hull.touch_points))
    return MonotoneDensityFit(hull=hull, increasing=False)


def kernel_density(observations, kernel=None, h=0.1, t=None) -> np.ndarray:
    """Exact ``x_n(t) = (nh)^{-1} sum_i k((t - t_i)/h)`` for a polynomial kernel.

    Uses prefix sums of powers of the sorted observations, expanded about a
    local anchor per bandwidth-wide block, so the cost does not grow with ``nh``.
    """
    kern = _as_kernel(kernel)
    obs = np.sort(as_float_vector(observations, "observations"))
    h = check_positive(float(h), "h")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    coef = np.array(kern.coefficients)
    deg = coef.shape[0] - 1
    total = np.zeros_like(t)
    # Expand about a local anchor per block of width h so every power stays O(1).
    block = np.floor(t / h).astype(np.int64)
    for b in np.unique(block):
        sel = block == b
        anchor = (b + 0.5) * h
        lo_obs = np.searchsorted(obs, anchor - 1.5 * h, side="left")
        hi_obs = np.searchsorted(obs, anchor + 1.5 * h, side="right")
        u = (obs[lo_obs:hi_obs] - anchor) / h
        prefix = np.zeros((deg + 1, u.shape[0] + 1))
        prefix[:, 1:] = np.cumsum(np.vstack([u**q for q in range(deg + 1)]), axis=1)
        tb = t[sel]
        lo = np.searchsorted(obs, tb - h, side="left") - lo_obs
        hi = np.searchsorted(obs, tb + h, side="right") - lo_obs
        window = prefix[:, hi] - prefix[:, lo]  # sums of u_i^q over |t - t_i| <= h
        z = (tb - anchor) / h
        acc = np.zeros_like(tb)
        # k((t - t_i)/h) = sum_p c_p (z - u_i)^p
        for p in range(deg + 1):
            if coef[p] == 0.0:
                continue
            for q in range(p + 1):
                acc += coef[p] * comb(p, q) * z ** (p - q) * (-1) ** q * window[q]
        total[sel] = acc
    return total / (obs.shape[0] * h)


@dataclass(frozen=True, eq=False)
class ConvexDensityFit:
    """Result of :func:`convex_density_estimate`.

    Attributes
    ----------
    fit : ConvexFit
        ``T(x_n)`` on the grid (not normalised).
    integral : float
        ``I_n``, the integral of the fit over the grid window.
    grid, x_n : ndarray
        Evaluation grid and the kernel density on it.
    """

    fit: ConvexFit
    integral: float
    grid: np.ndarray
    x_n: np.ndarray

    def __call__(self, t):
        return self.fit(t)

    def normalized(self, t):
        return self.fit(t) / self.integral


def convex_density_estimate(sample, kernel=None, h=0.1, window=None, grid=None, grid_size=None):
    """Convex minorant of the kernel density estimate.

    Parameters
    ----------
    sample : DensitySample or array_like
        Observations, all >= 0.
    kernel : KernelSpec, optional
    h : float
    window : (lo, hi), optional
        Interval on which the hull is taken. Default: the declared support
        shrunk by ``h`` on finite sides, or the data range otherwise.
    grid : array_like, optional
        Explicit evaluation grid (overrides ``window`` and ``grid_size``).
    grid_size : int, optional
        Number of uniform grid points, default ``max(512, 4n)``.

    Returns
    -------
    ConvexDensityFit
    """
    s = _as_density_sample(sample, (0.0, np.inf))
    if np.any(s.observations < 0):
        raise DomainError("convex density estimate needs observations >= 0")
    h = check_positive(float(h), "h")
    if grid is None:
        if window is None:
            lo, hi = s.support
            lo = max(lo, 0.0) + h if np.isfinite(lo) else float(s.observations.min())
            hi = hi - h if np.isfinite(hi) else float(s.observations.max())
        else:
            lo, hi = (float(w) for w in window)
        if not lo < hi:
            raise ValidationError(f"empty estimation window [{lo}, {hi}]", hypothesis="h < 1/2")
        size = max(512, 4 * s.n) if grid_size is None else int(grid_size)
        grid = np.linspace(lo, hi, size)
    else:
        grid = as_float_vector(grid, "grid", min_length=2)
    x_n = kernel_density(s.observations, kernel, h, grid)
    fit = gcm(GridFunction(grid, x_n))
    return ConvexDensityFit(fit=fit, integral=float(trapezoid(fit(grid), grid)), grid=grid, x_n=x_n)
