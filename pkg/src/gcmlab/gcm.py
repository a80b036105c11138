"""Greatest convex minorant, least concave majorant and PAVA on finite grids.

Everything here is knot based. A :class:`GridFunction` is a finite list of
points together with an interpolation rule; the convex minorant of such a
function is the lower convex hull of its graph, which only depends on finitely
many points and is computed with a single monotone-chain sweep.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from ._errors import DomainError, InputError
from ._validation import as_float_vector, check_strictly_increasing

__all__ = [
    "GridFunction",
    "ConvexFit",
    "ConcaveFit",
    "WeightedSequence",
    "gcm",
    "lcm",
    "gcm_slope_at",
    "pava",
    "gcm_derivative_grid",
]

DEFAULT_ATOL = 1e-12
_INTERPOLATIONS = ("linear", "step")


# ---------------------------------------------------------------------------
# compiled kernels
# ---------------------------------------------------------------------------


@njit(cache=True)
def _lower_hull(x, y, atol):
    # Monotone chain: keep a stack of vertices whose consecutive slopes are
    # strictly increasing (up to atol). Collinear middle points are popped.
    n = x.shape[0]
    idx = np.empty(n, dtype=np.int64)
    k = 0
    for i in range(n):
        while k >= 2:
            a = idx[k - 2]
            b = idx[k - 1]
            s_ab = (y[b] - y[a]) / (x[b] - x[a])
            s_bi = (y[i] - y[b]) / (x[i] - x[b])
            if s_ab >= s_bi - atol:
                k -= 1
            else:
                break
        idx[k] = i
        k += 1
    return idx[:k]


@njit(cache=True)
def _pava(y, w):
    n = y.shape[0]
    val = np.empty(n)
    wt = np.empty(n)
    cnt = np.empty(n, dtype=np.int64)
    k = 0
    for i in range(n):
        val[k] = y[i]
        wt[k] = w[i]
        cnt[k] = 1
        while k > 0 and val[k - 1] > val[k]:
            tw = wt[k - 1] + wt[k]
            val[k - 1] = (val[k - 1] * wt[k - 1] + val[k] * wt[k]) / tw
            wt[k - 1] = tw
            cnt[k - 1] += cnt[k]
            k -= 1
        k += 1
    out = np.empty(n)
    p = 0
    for b in range(k):
        for _ in range(cnt[b]):
            out[p] = val[b]
            p += 1
    return out


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GridFunction:
    """A real function specified by its values on a finite strictly increasing grid.

    Parameters
    ----------
    knots : array_like
        Strictly increasing abscissae.
    values : array_like
        Ordinates, same length as ``knots``.
    interpolation : {'linear', 'step'}
        ``'linear'`` joins consecutive points by segments; ``'step'`` is
        right-continuous and holds the value of the last knot at or before ``t``.
    """

    knots: np.ndarray
    values: np.ndarray
    interpolation: str = "linear"

    def __post_init__(self):
        knots = as_float_vector(self.knots, "knots")
        values = as_float_vector(self.values, "values")
        if knots.shape != values.shape:
            raise InputError(
                f"knots and values must have the same length ({knots.size} != {values.size})"
            )
        check_strictly_increasing(knots)
        if self.interpolation not in _INTERPOLATIONS:
            raise InputError(f"interpolation must be one of {_INTERPOLATIONS}")
        knots.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.knots.shape[0]

    @property
    def domain(self):
        return float(self.knots[0]), float(self.knots[-1])

    def __call__(self, t, extrapolate=False):
        """Evaluate at ``t`` (scalar or array).

        Outside ``[knots[0], knots[-1]]`` a :class:`DomainError` is raised unless
        ``extrapolate`` is true, in which case the boundary value is held.
        """
        t_arr = np.asarray(t, dtype=float)
        lo, hi = self.domain
        if not extrapolate and (np.any(t_arr < lo) or np.any(t_arr > hi)):
            raise DomainError(f"evaluation point outside [{lo}, {hi}]")
        if self.interpolation == "linear":
            out = np.interp(t_arr, self.knots, self.values)
        else:
            j = np.searchsorted(self.knots, t_arr, side="right") - 1
            out = self.values[np.clip(j, 0, len(self) - 1)]
        return float(out) if np.ndim(out) == 0 else out

    def raw_slopes(self) -> np.ndarray:
        """Per-segment difference quotients of the piecewise-linear interpolant."""
        return np.diff(self.values) / np.diff(self.knots)

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.knots, values, self.interpolation)

    def __neg__(self):
        return self.with_values(-self.values)


@dataclass(frozen=True, eq=False)
class WeightedSequence:
    """Values with strictly positive finite weights, the input of :func:`pava`."""

    values: np.ndarray
    weights: np.ndarray = None

    def __post_init__(self):
        values = as_float_vector(self.values, "values")
        if self.weights is None:
            weights = np.ones_like(values)
        else:
            weights = as_float_vector(self.weights, "weights")
        if weights.shape != values.shape:
            raise InputError("values and weights must have the same length")
        if np.any(weights <= 0):
            raise InputError("weights must be strictly positive")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "weights", weights)


@dataclass(frozen=True, eq=False)
class _HullFit:
    knots: np.ndarray
    values: np.ndarray
    touch_points: np.ndarray = field(default=None, repr=False)
    atol: float = DEFAULT_ATOL

    def __post_init__(self):
        knots = as_float_vector(self.knots, "knots", min_length=2)
        values = as_float_vector(self.values, "values", min_length=2)
        check_strictly_increasing(knots)
        tp = knots if self.touch_points is None else as_float_vector(self.touch_points)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "touch_points", tp)

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.values) / np.diff(self.knots)

    @property
    def domain(self):
        return float(self.knots[0]), float(self.knots[-1])

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        lo, hi = self.domain
        if np.any(t_arr < lo) or np.any(t_arr > hi):
            raise DomainError(f"evaluation point outside [{lo}, {hi}]")
        out = np.interp(t_arr, self.knots, self.values)
        return float(out) if np.ndim(out) == 0 else out

    def slope_at(self, t):
        """Right derivative at ``t``; the final segment slope at the right end."""
        t_arr = np.asarray(t, dtype=float)
        lo, hi = self.domain
        if np.any(t_arr < lo) or np.any(t_arr > hi):
            raise DomainError(f"slope requested outside [{lo}, {hi}]")
        j = np.searchsorted(self.knots, t_arr, side="right") - 1
        j = np.clip(j, 0, self.knots.shape[0] - 2)
        out = self.slopes[j]
        return float(out) if np.ndim(out) == 0 else out

    def derivative(self) -> GridFunction:
        """Right-continuous step function of the slopes."""
        s = self.slopes
        return GridFunction(self.knots, np.append(s, s[-1]), interpolation="step")


class ConvexFit(_HullFit):
    """Greatest convex minorant: piecewise linear with nondecreasing slopes.

    Attributes
    ----------
    knots, values : ndarray
        Hull vertices (a subset of the input points) and their ordinates.
    slopes : ndarray
        Per-segment slopes, nondecreasing.
    touch_points : ndarray
        All input abscissae where the fit equals the input, including
        collinear points that are not vertices.
    """


class ConcaveFit(_HullFit):
    """Least concave majorant: piecewise linear with nonincreasing slopes."""


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------


def _hull_input(f: GridFunction, interval):
    """Points whose lower hull equals the convex minorant of ``f`` on ``interval``."""
    if not isinstance(f, GridFunction):
        raise InputError("f must be a GridFunction")
    k, v = f.knots, f.values
    if interval is None:
        lo, hi = k[0], k[-1]
    else:
        lo, hi = (float(a) for a in interval)
        if not (np.isfinite(lo) and np.isfinite(hi)) or lo >= hi:
            raise DomainError(f"invalid interval [{lo}, {hi}]")
        if lo < k[0] or hi > k[-1]:
            raise DomainError(f"interval [{lo}, {hi}] exceeds knot range [{k[0]}, {k[-1]}]")
    inside = (k >= lo) & (k <= hi)
    n_inside = int(np.count_nonzero(inside))
    if n_inside < 2:
        raise DomainError(f"need at least 2 knots inside [{lo}, {hi}], found {n_inside}")
    x = k[inside]
    if f.interpolation == "linear":
        y = v[inside]
    else:
        # Graph of a step function: at each knot the lower of the left limit
        # and the value matters; the first point only has its own value.
        idx_in = np.flatnonzero(inside)
        y = np.minimum(v[idx_in], v[np.maximum(idx_in - 1, 0)])
        if x[0] == lo:
            y[0] = v[idx_in[0]]
    if x[0] > lo:
        x = np.r_[lo, x]
        y = np.r_[f(lo), y]
    if x[-1] < hi:
        x = np.r_[x, hi]
        y = np.r_[y, f(hi)]
    return np.ascontiguousarray(x), np.ascontiguousarray(y)


def _touching(x, y, fit_x, fit_y, atol):
    gap = y - np.interp(x, fit_x, fit_y)
    scale = max(1.0, float(np.max(np.abs(y))), float(x[-1] - x[0]))
    return x[np.abs(gap) <= 16 * atol * scale]


def gcm(f: GridFunction, interval=None, atol: float = DEFAULT_ATOL) -> ConvexFit:
    """Greatest convex minorant of ``f`` restricted to ``interval``.

    Parameters
    ----------
    f : GridFunction
    interval : (lo, hi), optional
        Sub-interval of the knot range; defaults to the whole range. Endpoints
        that are not knots are added using ``f``'s interpolation.
    atol : float
        Absolute tolerance on slope differences used to drop collinear points.

    Returns
    -------
    ConvexFit

    Examples
    --------
    >>> fit = gcm(GridFunction([0, 1, 2], [0, 2, 1]))
    >>> fit.values.tolist(), fit.slopes.tolist()
    ([0.0, 1.0], [0.5])
    """
    x, y = _hull_input(f, interval)
    idx = _lower_hull(x, y, float(atol))
    fx, fy = x[idx], y[idx]
    return ConvexFit(fx, fy, touch_points=_touching(x, y, fx, fy, atol), atol=atol)


def lcm(f: GridFunction, interval=None, atol: float = DEFAULT_ATOL) -> ConcaveFit:
    """Least concave majorant, computed as ``-gcm(-f)``."""
    neg = gcm(-f, interval, atol)
    return ConcaveFit(neg.knots, -neg.values, touch_points=neg.touch_points, atol=atol)


def gcm_slope_at(f: GridFunction, t: float, interval=None, atol: float = DEFAULT_ATOL) -> float:
    """Right derivative of the convex minorant of ``f`` at ``t``.

    At the right end of the domain the slope of the final segment is returned.
    """
    fit = gcm(f, interval, atol)
    if not np.isfinite(t):
        raise DomainError("t must be finite")
    return fit.slope_at(float(t))


def pava(seq, weights=None) -> np.ndarray:
    """Weighted least-squares projection onto nondecreasing vectors.

    Parameters
    ----------
    seq : WeightedSequence or array_like
        Values (and weights, if a :class:`WeightedSequence`).
    weights : array_like, optional
        Positive weights when ``seq`` is a plain array. Default: unit weights.

    Returns
    -------
    ndarray
        Nondecreasing fitted values; pooled blocks carry weighted means.
    """
    if not isinstance(seq, WeightedSequence):
        seq = WeightedSequence(seq, weights)
    elif weights is not None:
        raise InputError("weights given twice")
    return _pava(seq.values, seq.weights)


def gcm_derivative_grid(f: GridFunction, atol: float = DEFAULT_ATOL) -> np.ndarray:
    """Slopes of ``gcm(f)`` on each segment of ``f``'s grid.

    Equal to ``pava(raw slopes, knot spacings)``.
    """
    if isinstance(f, GridFunction) and f.interpolation != "linear":
        raise InputError("gcm_derivative_grid needs a piecewise-linear GridFunction")
    x, y = _hull_input(f, None)
    idx = _lower_hull(x, y, float(atol))
    hull_slopes = np.diff(y[idx]) / np.diff(x[idx])
    seg = np.searchsorted(idx, np.arange(x.shape[0] - 1), side="right") - 1
    return hull_slopes[seg]
