"""Polynomial kernels on [-1, 1] and exact smoothing of piecewise-linear functions.

The smoothing identity used throughout: for a piecewise-linear function P
with slope changes ``gamma_j`` at ``tau_j`` (extended linearly beyond its
outer knots),

    (k_h * P)(t) = P(t) + h * sum_j gamma_j * phi((t - tau_j) / h),

where ``phi(z) = G(z) - max(z, 0)``, ``G`` is the second primitive of ``k``
and ``phi`` vanishes outside [-1, 1]. Differentiating gives the analogous
formula for ``(k_h * P)'`` with ``phi'(z) = K(z) - 1{z >= 0}``. Both are exact;
on a uniform lattice the sum is a discrete convolution (done by FFT).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from scipy.signal import fftconvolve

from ._errors import DomainError, InputError
from ._validation import as_float_vector, check_positive

__all__ = [
    "KernelSpec",
    "epanechnikov",
    "smooth_polygon_lattice",
    "smooth_segments",
]

_FAMILIES = {
    # coefficients in increasing powers of u
    "epanechnikov": [0.75, 0.0, -0.75],
    "biweight": [15 / 16, 0.0, -30 / 16, 0.0, 15 / 16],
    "triweight": [35 / 32, 0.0, -105 / 32, 0.0, 105 / 32, 0.0, -35 / 32],
}


@dataclass(frozen=True, eq=False)
class KernelSpec:
    """A symmetric polynomial probability density supported on [-1, 1].

    Parameters
    ----------
    family : str
        ``'epanechnikov'`` (default), ``'biweight'``, ``'triweight'`` or ``'custom'``.
    coefficients : sequence of float, optional
        Polynomial coefficients (increasing powers) for ``family='custom'``.
        The polynomial must be nonnegative on [-1, 1], even, and integrate to 1.

    Notes
    -----
    The density ``k``, its derivative, the primitive ``K``, the second
    primitive ``G`` and the first-moment primitive ``M1(z) = int_{-1}^z v k(v) dv``
    are all polynomials and are evaluated in closed form.
    """

    family: str = "epanechnikov"
    coefficients: tuple = None

    def __post_init__(self):
        if self.family == "custom":
            if self.coefficients is None:
                raise InputError("custom kernel needs coefficients")
            coef = as_float_vector(self.coefficients, "coefficients")
        elif self.family in _FAMILIES:
            if self.coefficients is not None:
                raise InputError(f"coefficients are only allowed for family='custom'")
            coef = np.array(_FAMILIES[self.family])
        else:
            raise InputError(f"unknown kernel family {self.family!r}")
        p = Polynomial(coef)
        if np.any(np.abs(coef[1::2]) > 1e-12):
            raise InputError("kernel polynomial must be even (symmetric kernel)")
        grid = np.linspace(-1, 1, 2001)
        if np.min(p(grid)) < -1e-12:
            raise InputError("kernel must be nonnegative on [-1, 1]")
        total = p.integ(lbnd=-1)(1.0)
        if abs(total - 1.0) > 1e-10:
            raise InputError(f"kernel must integrate to 1 on [-1, 1], got {total}")
        K = p.integ(lbnd=-1)
        object.__setattr__(self, "coefficients", tuple(float(c) for c in coef))
        object.__setattr__(self, "_k", p)
        object.__setattr__(self, "_dk", p.deriv())
        object.__setattr__(self, "_K", K)
        object.__setattr__(self, "_G", K.integ(lbnd=-1))
        object.__setattr__(self, "_M1", (Polynomial([0, 1]) * p).integ(lbnd=-1))

    # -- pointwise functions (all vectorised) --------------------------------

    def pdf(self, u):
        u = np.asarray(u, dtype=float)
        return np.where(np.abs(u) <= 1, self._k(u), 0.0)

    def dpdf(self, u):
        """Derivative ``k'`` (zero outside the support)."""
        u = np.asarray(u, dtype=float)
        return np.where(np.abs(u) < 1, self._dk(u), 0.0)

    def cdf(self, u):
        """``K(u) = int_{-inf}^u k``."""
        u = np.asarray(u, dtype=float)
        return np.where(u <= -1, 0.0, np.where(u >= 1, 1.0, self._K(np.clip(u, -1, 1))))

    def second_primitive(self, u):
        """``G(u) = int_{-inf}^u K``; equals ``u`` for ``u >= 1``."""
        u = np.asarray(u, dtype=float)
        inside = self._G(np.clip(u, -1, 1))
        return np.where(u <= -1, 0.0, np.where(u >= 1, u, inside))

    def first_moment_primitive(self, u):
        """``M1(u) = int_{-inf}^u v k(v) dv``."""
        u = np.asarray(u, dtype=float)
        return self._M1(np.clip(u, -1, 1))

    def phi(self, z):
        """Correction profile ``G(z) - max(z, 0)``, supported on [-1, 1]."""
        z = np.asarray(z, dtype=float)
        return self.second_primitive(z) - np.maximum(z, 0.0)

    def dphi(self, z):
        """``K(z) - 1{z >= 0}`` (right-continuous)."""
        z = np.asarray(z, dtype=float)
        return self.cdf(z) - (z >= 0)

    # -- constants -------------------------------------------------------------

    def moment(self, j: int) -> float:
        """``int u^j k(u) du``."""
        return float((Polynomial.basis(j) * self._k).integ(lbnd=-1)(1.0))

    @property
    def l2_norm_sq(self) -> float:
        """``int k(u)^2 du``."""
        return float((self._k**2).integ(lbnd=-1)(1.0))

    def to_dict(self):
        d = {"family": self.family}
        if self.family == "custom":
            d["coefficients"] = list(self.coefficients)
        return d


epanechnikov = KernelSpec()


def _as_kernel(kernel) -> KernelSpec:
    if kernel is None:
        return epanechnikov
    if isinstance(kernel, KernelSpec):
        return kernel
    if isinstance(kernel, str):
        return KernelSpec(kernel)
    if isinstance(kernel, dict):
        return KernelSpec(kernel.get("family", "epanechnikov"), kernel.get("coefficients"))
    raise InputError(f"cannot interpret {kernel!r} as a kernel")


def smooth_polygon_lattice(values, delta, kernel, h, derivative=False):
    """Exact kernel smoothing of a polygon sampled on a uniform lattice.

    Parameters
    ----------
    values : ndarray
        Polygon values at lattice points ``s_0 + m * delta``; between lattice
        points the polygon is linear, beyond the ends it is extended linearly.
    delta : float
        Lattice spacing.
    kernel : KernelSpec
    h : float
        Bandwidth, in the same units as ``delta``.
    derivative : bool
        Return ``(k_h * P)'`` instead of ``k_h * P``.

    Returns
    -------
    ndarray
        Smoothed values at the lattice points. Entries within ``h`` of either
        end are affected by the linear extension; callers discard them when
        they need the smoothing of the un-extended function.
    """
    kernel = _as_kernel(kernel)
    v = as_float_vector(values, "values", min_length=3)
    delta = check_positive(float(delta), "delta")
    h = check_positive(float(h), "h")
    gamma = np.zeros_like(v)
    gamma[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / delta
    half = int(np.floor(h / delta))
    z = np.arange(-half, half + 1) * (delta / h)
    if derivative:
        slopes = np.diff(v) / delta
        base = np.append(slopes, slopes[-1])
        profile = kernel.dphi(z)
    else:
        base = v
        profile = h * kernel.phi(z)
    if half == 0:
        return base + gamma * profile[0]
    return base + fftconvolve(gamma, profile, mode="same")


def smooth_segments(knots, values, kernel, h, t, lo=None, hi=None):
    """Closed-form ``int_lo^hi k_h(t - u) P(u) du`` for a polygon ``P``.

    Parameters
    ----------
    knots, values : array_like
        The polygon (linear between knots, not extended).
    kernel : KernelSpec
    h : float
        Bandwidth.
    t : array_like
        Evaluation points.
    lo, hi : float, optional
        Integration limits, default the outer knots.

    Returns
    -------
    integral, mass : ndarray
        The smoothed value and ``int_lo^hi k_h(t - u) du`` (1 when the kernel
        window lies inside [lo, hi]).
    """
    kernel = _as_kernel(kernel)
    x = as_float_vector(knots, "knots", min_length=2)
    y = as_float_vector(values, "values", min_length=2)
    h = check_positive(float(h), "h")
    lo = x[0] if lo is None else max(float(lo), x[0])
    hi = x[-1] if hi is None else min(float(hi), x[-1])
    if lo >= hi:
        raise DomainError("empty integration range")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    beta = np.diff(y) / np.diff(x)
    alpha = y[:-1] - beta * x[:-1]
    a = np.clip(x[:-1], lo, hi)
    b = np.clip(x[1:], lo, hi)
    out = np.empty_like(t)
    mass = np.empty_like(t)
    for i, ti in enumerate(t):
        j0 = max(np.searchsorted(x, ti - h, side="right") - 1, 0)
        j1 = min(np.searchsorted(x, ti + h, side="left"), x.shape[0] - 1)
        sl = slice(j0, j1)
        z_hi = np.clip((ti - a[sl]) / h, -1, 1)
        z_lo = np.clip((ti - b[sl]) / h, -1, 1)
        dK = kernel.cdf(z_hi) - kernel.cdf(z_lo)
        dM = kernel.first_moment_primitive(z_hi) - kernel.first_moment_primitive(z_lo)
        out[i] = np.sum((alpha[sl] + beta[sl] * ti) * dK - beta[sl] * h * dM)
        mass[i] = np.sum(dK)
    return out, mass
