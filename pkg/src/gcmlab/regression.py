"""Shape-restricted regression on the equispaced design t_i = i/n.

All kernel estimators are exact: the data polygon is smoothed with the
closed-form correction of :mod:`gcmlab.kernels` on a lattice aligned with the
design, and the convex minorant is taken on the lattice points of the window
where the kernel never leaves the data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from ._errors import DegenerateInputError, DomainError, InputError, ValidationError
from ._validation import as_float_vector, check_positive
from .gcm import ConvexFit, GridFunction, gcm, pava
from .kernels import KernelSpec, _as_kernel, smooth_polygon_lattice, smooth_segments

__all__ = [
    "RegressionSample",
    "cumulative_polygon",
    "isotonic_regression",
    "gasser_muller",
    "GasserMullerEvaluator",
    "convexified_kernel_regression",
    "ConvexifiedFit",
    "isotonized_kernel_regression",
    "IsotonizedFit",
    "lattice_factor",
]

MIN_GRID = 512


@dataclass(frozen=True, eq=False)
class RegressionSample:
    """Responses ``y_i`` observed at ``t_i = i/n``, i = 1..n."""

    y: np.ndarray

    def __post_init__(self):
        y = as_float_vector(self.y, "y", min_length=2)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def t(self) -> np.ndarray:
        return np.arange(1, self.n + 1) / self.n


def _as_sample(sample) -> RegressionSample:
    return sample if isinstance(sample, RegressionSample) else RegressionSample(sample)


def lattice_factor(n: int, window_length: float, grid_size=None) -> int:
    """Smallest even refinement ``q`` giving enough lattice points in the window.

    The lattice has spacing ``1/(q n)``; the default target is ``max(512, 4n)``
    points inside a window of the given length.
    """
    target = max(MIN_GRID, 4 * n) if grid_size is None else int(grid_size)
    q = int(np.ceil(target / max(window_length * n, 1e-300)))
    q = max(q, 2)
    return q + (q % 2)


def cumulative_polygon(sample) -> GridFunction:
    """Primitive of the cell-wise constant interpolation of the responses.

    The polygon has knots ``(k + 1/2)/n`` for k = 0..n and values
    ``n^{-1} sum_{i<=k} y_i``, so its slope on the cell centred at ``t_i`` is
    ``y_i``. Inside [1/(2n), 1 + 1/(2n)] this is the function
    ``x_n(t) = n^{-1} sum_{i<=m} y_i + ((nt - 1/2) - m) y_{m+1} / n`` with
    ``m = floor(nt - 1/2)``.

    Examples
    --------
    >>> p = cumulative_polygon([1.0, 1.0])
    >>> p.knots.tolist(), p.values.tolist()
    ([0.25, 0.75, 1.25], [0.0, 0.5, 1.0])
    """
    s = _as_sample(sample)
    n = s.n
    knots = (np.arange(n + 1) + 0.5) / n
    values = np.concatenate(([0.0], np.cumsum(s.y) / n))
    return GridFunction(knots, values)


def isotonic_regression(sample) -> np.ndarray:
    """Least-squares nondecreasing fit, read at the design points.

    This is the slope of the convex minorant of :func:`cumulative_polygon`
    at the design points. It is computed by unweighted PAVA, which gives the
    same values without the roundoff of differencing cumulative sums, so
    monotone responses are returned unchanged.
    """
    return pava(_as_sample(sample).y)


def _check_bandwidth(h, n, usable_length):
    h = check_positive(float(h), "h")
    if 2 * h >= usable_length - 1.0 / n:
        raise ValidationError(
            f"bandwidth h={h} leaves no exact window (need 2h < {usable_length - 1.0 / n:.6g})",
            hypothesis="h < 1/2",
        )
    return h


class GasserMullerEvaluator:
    """Callable ``t -> x_n(t) = h^{-1} int k((t-u)/h) ybar_n(u) du``.

    ``ybar_n`` is the linear interpolation of ``(t_i, y_i)`` on [1/n, 1].
    Inside the exact window ``[1/n + h, 1 - h]`` the integral is exact;
    outside it the kernel is renormalised by its mass inside [1/n, 1] and the
    point is reported by :meth:`is_boundary`.
    """

    def __init__(self, sample, kernel=None, h=0.1):
        self.sample = _as_sample(sample)
        self.kernel = _as_kernel(kernel)
        n = self.sample.n
        self.h = _check_bandwidth(h, n, 1.0)
        self.window = (1.0 / n + self.h, 1.0 - self.h)

    def is_boundary(self, t):
        t = np.asarray(t, dtype=float)
        tol = 1e-12
        return (t < self.window[0] - tol) | (t > self.window[1] + tol)

    def __call__(self, t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        s = self.sample
        if np.any(t_arr < 1.0 / s.n) or np.any(t_arr > 1.0):
            raise DomainError("Gasser-Mueller estimate is defined on [1/n, 1]")
        val, mass = smooth_segments(s.t, s.y, self.kernel, self.h, t_arr)
        out = val / mass
        return float(out[0]) if np.ndim(t) == 0 else out

    def on_lattice(self, grid_size=None):
        """Exact values on the aligned lattice points of the window.

        Returns
        -------
        grid, values : ndarray
        """
        s = self.sample
        n = s.n
        q = lattice_factor(n, self.window[1] - self.window[0], grid_size)
        delta = 1.0 / (q * n)
        lattice = 1.0 / n + np.arange(q * (n - 1) + 1) * delta
        values = smooth_polygon_lattice(np.interp(lattice, s.t, s.y), delta, self.kernel, self.h)
        keep = ~self.is_boundary(lattice)
        return lattice[keep], values[keep]


def gasser_muller(sample, kernel=None, h=0.1) -> GasserMullerEvaluator:
    """Gasser-Mueller kernel estimate as an evaluator; see :class:`GasserMullerEvaluator`."""
    return GasserMullerEvaluator(sample, kernel, h)


@dataclass(frozen=True, eq=False)
class ConvexifiedFit:
    """Result of :func:`convexified_kernel_regression`.

    Attributes
    ----------
    fit : ConvexFit
        ``T(x_n)`` on the lattice window.
    c : float
        ``int T(x_n) / int x_n`` (trapezoid on the shared grid).
    grid, x_n : ndarray
        The lattice and the kernel estimate on it.
    """

    fit: ConvexFit
    c: float
    grid: np.ndarray
    x_n: np.ndarray

    def normalized(self, t):
        return self.fit(t) / self.c


def convexified_kernel_regression(sample, kernel=None, h=0.1, grid_size=None) -> ConvexifiedFit:
    """Convex minorant of the Gasser-Mueller estimate on the exact window."""
    gm = gasser_muller(sample, kernel, h)
    grid, x_n = gm.on_lattice(grid_size)
    fit = gcm(GridFunction(grid, x_n))
    int_x = trapezoid(x_n, grid)
    if int_x <= 0:
        raise DegenerateInputError(f"integral of x_n over the window is {int_x:.3g} <= 0")
    c = trapezoid(fit(grid), grid) / int_x
    return ConvexifiedFit(fit=fit, c=float(c), grid=grid, x_n=x_n)


@dataclass(frozen=True, eq=False)
class IsotonizedFit:
    """Result of :func:`isotonized_kernel_regression`.

    Attributes
    ----------
    grid : ndarray
        Lattice points of the window.
    x_n : ndarray
        ``int K((t-u)/h) ytilde_n(u) du`` on the grid.
    m_n : ndarray
        Raw kernel estimate ``x_n'`` (right derivative) on the grid.
    fit : ConvexFit
        ``T(x_n)``; its slopes form the isotonized estimate.
    """

    grid: np.ndarray
    x_n: np.ndarray
    m_n: np.ndarray
    fit: ConvexFit

    def __call__(self, t):
        """Isotonized estimate ``m_hat(t) = T(x_n)'(t)`` (right derivative).

        Points within rounding error of a lattice point are snapped to it, so
        that e.g. ``t = 0.7`` uses the segment starting at the lattice point 0.7.
        """
        return self.fit.slope_at(_snap(self.grid, t))

    def raw_at(self, t):
        """Raw kernel estimate ``m_n(t)``; exact at lattice points, interpolated between."""
        return np.interp(_snap(self.grid, t), self.grid, self.m_n)

    @property
    def slopes(self) -> GridFunction:
        return self.fit.derivative()


def _snap(grid, t):
    t_arr = np.asarray(t, dtype=float)
    j = np.clip(np.searchsorted(grid, t_arr), 1, grid.shape[0] - 1)
    nearest = np.where(np.abs(grid[j - 1] - t_arr) < np.abs(grid[j] - t_arr), grid[j - 1], grid[j])
    tol = 1e-9 * (grid[1] - grid[0])
    out = np.where(np.abs(nearest - t_arr) <= tol, nearest, t_arr)
    return float(out) if np.ndim(out) == 0 else out


def isotonized_kernel_regression(sample, kernel=None, h=0.1, grid_size=None) -> IsotonizedFit:
    """Kernel-smooth the responses, then isotonize via the convex minorant of the primitive.

    ``x_n = k_h * Y`` where ``Y`` is :func:`cumulative_polygon`; the window is
    ``[1/(2n) + h, 1 + 1/(2n) - h]`` so the kernel only sees data cells.
    """
    s = _as_sample(sample)
    kern = _as_kernel(kernel)
    n = s.n
    h = _check_bandwidth(h, n, 1.0 + 1.0 / n)
    lo, hi = 0.5 / n + h, 1.0 + 0.5 / n - h
    q = lattice_factor(n, hi - lo, grid_size)
    delta = 1.0 / (q * n)
    lattice = 0.5 / n + np.arange(q * n + 1) * delta
    Y = cumulative_polygon(s)
    y_lat = np.interp(lattice, Y.knots, Y.values)
    x_n = smooth_polygon_lattice(y_lat, delta, kern, h)
    m_n = smooth_polygon_lattice(y_lat, delta, kern, h, derivative=True)
    keep = (lattice >= lo - 1e-12) & (lattice <= hi + 1e-12)
    grid = lattice[keep]
    fit = gcm(GridFunction(grid, x_n[keep]))
    return IsotonizedFit(grid=grid, x_n=x_n[keep], m_n=m_n[keep], fit=fit)
