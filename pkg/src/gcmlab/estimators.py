"""scikit-learn style wrappers around the shape-restricted estimators.

The regression estimators assume the equispaced design ``t_i = i/n``; ``X``
may be omitted in :meth:`fit` or given as that design (anything else is
rejected). Bandwidths are either fixed (``bandwidth``) or follow the rule
``h = bandwidth_constant * n ** bandwidth_exponent``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._errors import InputError
from ._validation import as_float_vector
from .density import DensitySample, convex_density_estimate, grenander_decreasing, grenander_increasing
from .gcm import GridFunction, gcm, lcm
from .kernels import _as_kernel
from .regression import (
    RegressionSample,
    convexified_kernel_regression,
    isotonic_regression,
    isotonized_kernel_regression,
)

__all__ = [
    "ConvexMinorant",
    "IsotonicRegression",
    "GrenanderEstimator",
    "ConvexKernelRegression",
    "IsotonizedKernelRegression",
    "ConvexKernelDensity",
]


def _regression_inputs(X, y):
    y = as_float_vector(y, "y", min_length=2)
    n = y.shape[0]
    if X is not None:
        t = as_float_vector(np.ravel(np.asarray(X, dtype=float)), "X")
        if t.shape[0] != n or not np.allclose(t, np.arange(1, n + 1) / n, rtol=0, atol=1e-9):
            raise InputError("X must be the equispaced design i/n (or None)")
    return RegressionSample(y)


def _points(X):
    X = np.asarray(X, dtype=float)
    return X.ravel() if X.ndim == 2 and X.shape[1] == 1 else X


class _BandwidthMixin:
    def _bandwidth(self, n):
        if self.bandwidth is not None:
            return float(self.bandwidth)
        return float(self.bandwidth_constant * n**self.bandwidth_exponent)


class ConvexMinorant(TransformerMixin, BaseEstimator):
    """Row-wise convex minorant (or concave majorant) of functions on a fixed grid.

    Parameters
    ----------
    knots : array_like, optional
        Common abscissae of the rows; default ``0, 1, ..., m-1``.
    concave : bool
        Return the least concave majorant instead.
    """

    def __init__(self, knots=None, concave=False):
        self.knots = knots
        self.concave = concave

    def fit(self, X, y=None):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        m = X.shape[1]
        self.knots_ = np.arange(m, dtype=float) if self.knots is None else as_float_vector(self.knots)
        if self.knots_.shape[0] != m:
            raise InputError("knots must match the number of columns")
        self.n_features_in_ = m
        return self

    def transform(self, X):
        check_is_fitted(self, "knots_")
        X = np.atleast_2d(np.asarray(X, dtype=float))
        op = lcm if self.concave else gcm
        return np.vstack([op(GridFunction(self.knots_, row))(self.knots_) for row in X])


class IsotonicRegression(RegressorMixin, BaseEstimator):
    """Least-squares nondecreasing regression on the design ``t_i = i/n``.

    Attributes
    ----------
    fitted_ : ndarray
        Fitted values at the design points.
    n_ : int
    """

    def fit(self, X, y):
        sample = _regression_inputs(X, y)
        self.fitted_ = isotonic_regression(sample)
        self.n_ = sample.n
        return self

    def predict(self, X):
        """Piecewise-constant fit: the value of the cell containing each point."""
        check_is_fitted(self, "fitted_")
        t = _points(X)
        j = np.clip(np.floor(t * self.n_ + 0.5).astype(int) - 1, 0, self.n_ - 1)
        return self.fitted_[j]


class GrenanderEstimator(BaseEstimator):
    """Monotone density estimate from the hull of the empirical distribution.

    Parameters
    ----------
    increasing : bool
        ``True`` for a nondecreasing density on (min, 0]; ``False`` for a
        nonincreasing one on [0, max).

    Attributes
    ----------
    knots_, heights_ : ndarray
        Breakpoints and the constant density value between consecutive ones.
    """

    def __init__(self, increasing=True):
        self.increasing = increasing

    def fit(self, X, y=None):
        x = as_float_vector(_points(X), "X")
        self.fit_ = grenander_increasing(x) if self.increasing else grenander_decreasing(x)
        self.knots_ = self.fit_.knots
        self.heights_ = self.fit_.heights
        return self

    def predict(self, X):
        check_is_fitted(self, "fit_")
        return self.fit_(_points(X))

    score_samples = predict


class ConvexKernelRegression(_BandwidthMixin, RegressorMixin, BaseEstimator):
    """Convex minorant of the Gasser-Mueller kernel estimate.

    Parameters
    ----------
    kernel : str or KernelSpec
    bandwidth : float, optional
        Fixed bandwidth; overrides the rule below.
    bandwidth_constant, bandwidth_exponent : float
        ``h = a * n ** e``, default ``n ** (-1/5)``.
    normalize : bool
        Predict ``T(x_n)/c`` (same integral as ``x_n``) instead of ``T(x_n)``.
    """

    def __init__(self, kernel="epanechnikov", bandwidth=None, bandwidth_constant=1.0,
                 bandwidth_exponent=-0.2, normalize=False):
        self.kernel = kernel
        self.bandwidth = bandwidth
        self.bandwidth_constant = bandwidth_constant
        self.bandwidth_exponent = bandwidth_exponent
        self.normalize = normalize

    def fit(self, X, y):
        sample = _regression_inputs(X, y)
        self.h_ = self._bandwidth(sample.n)
        self.result_ = convexified_kernel_regression(sample, _as_kernel(self.kernel), self.h_)
        self.c_ = self.result_.c
        return self

    def predict(self, X):
        check_is_fitted(self, "result_")
        t = _points(X)
        return self.result_.normalized(t) if self.normalize else self.result_.fit(t)


class IsotonizedKernelRegression(_BandwidthMixin, RegressorMixin, BaseEstimator):
    """Kernel smoothing followed by isotonization of the smoothed curve."""

    def __init__(self, kernel="epanechnikov", bandwidth=None, bandwidth_constant=1.0,
                 bandwidth_exponent=-0.2):
        self.kernel = kernel
        self.bandwidth = bandwidth
        self.bandwidth_constant = bandwidth_constant
        self.bandwidth_exponent = bandwidth_exponent

    def fit(self, X, y):
        sample = _regression_inputs(X, y)
        self.h_ = self._bandwidth(sample.n)
        self.result_ = isotonized_kernel_regression(sample, _as_kernel(self.kernel), self.h_)
        return self

    def predict(self, X):
        check_is_fitted(self, "result_")
        return self.result_(_points(X))


class ConvexKernelDensity(_BandwidthMixin, BaseEstimator):
    """Convex minorant of a kernel density estimate.

    Parameters
    ----------
    support : (lo, hi)
        Declared support of the observations (lo >= 0).
    normalize : bool
        Divide by ``I_n`` so the estimate integrates to one over the window.
    """

    def __init__(self, kernel="epanechnikov", bandwidth=None, bandwidth_constant=1.0,
                 bandwidth_exponent=-0.2, support=(0.0, 1.0), normalize=False):
        self.kernel = kernel
        self.bandwidth = bandwidth
        self.bandwidth_constant = bandwidth_constant
        self.bandwidth_exponent = bandwidth_exponent
        self.support = support
        self.normalize = normalize

    def fit(self, X, y=None):
        sample = DensitySample(_points(X), tuple(self.support))
        self.h_ = self._bandwidth(sample.n)
        self.result_ = convex_density_estimate(sample, _as_kernel(self.kernel), self.h_)
        self.integral_ = self.result_.integral
        return self

    def predict(self, X):
        check_is_fitted(self, "result_")
        t = _points(X)
        return self.result_.normalized(t) if self.normalize else self.result_(t)

    score_samples = predict
