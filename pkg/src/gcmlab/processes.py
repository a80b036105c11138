"""Error processes: i.i.d., Gaussian AR(1), and subordinated fractional Gaussian noise.

Also hosts the Hermite machinery for subordinated Gaussian sequences, the
partial-sum variance scalings and the two-sided partial-sum and local
empirical processes that feed the limit theory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np
from numpy.polynomial import hermite_e, legendre
from scipy.signal import lfilter

from ._errors import DegenerateInputError, DomainError, InputError, NumericalError, ValidationError
from ._validation import as_float_vector, as_generator, check_int, check_positive
from .gcm import GridFunction

__all__ = [
    "derive_seed",
    "hermite_poly",
    "hermite_coeff",
    "HermiteSubordination",
    "DependenceModel",
    "VarianceScale",
    "gen_iid",
    "gen_ar1",
    "gen_fgn",
    "fgn_autocovariance",
    "kappa_squared",
    "subordinate",
    "sigma_n_lrd",
    "partial_sum_variance",
    "partial_sum_process",
    "rescale_local",
    "local_empirical_process",
    "lrd_window_exponents",
]


def derive_seed(master: int, *keys: int) -> np.random.SeedSequence:
    """Independent stream for ``keys`` (e.g. n-index, replication) under ``master``."""
    return np.random.SeedSequence(int(master), spawn_key=tuple(int(k) for k in keys))


# ---------------------------------------------------------------------------
# Hermite machinery
# ---------------------------------------------------------------------------


def hermite_poly(k: int, x):
    """Probabilists' Hermite polynomial ``h_k(x)`` by the three-term recurrence.

    ``h_0 = 1, h_1 = x, h_{k+1} = x h_k - k h_{k-1}``.
    """
    k = check_int(k, "k", minimum=0)
    x = np.asarray(x, dtype=float)
    prev, cur = np.ones_like(x), x.copy()
    if k == 0:
        out = prev
    else:
        for j in range(1, k):
            prev, cur = cur, x * cur - j * prev
        out = cur
    return float(out) if out.ndim == 0 else out


def _orthonormal_hermite(k, x):
    x = np.asarray(x, dtype=float)
    prev, cur = np.zeros_like(x), np.ones_like(x)
    for j in range(k):
        prev, cur = cur, (x * cur - np.sqrt(j) * prev) / np.sqrt(j + 1)
    return cur


_SQRT_2PI = np.sqrt(2 * np.pi)


def _gauss_hermite_expectation(func, nodes):
    x, w = hermite_e.hermegauss(nodes)
    return np.sum(w * func(x)) / _SQRT_2PI


def _piecewise_legendre_expectation(func, breakpoints, nodes_per_unit):
    # E func(xi) on [-12, 12] split at breakpoints and into unit pieces.
    edges = np.unique(np.concatenate((np.arange(-12.0, 12.5, 1.0), np.asarray(breakpoints, float))))
    edges = edges[(edges >= -12) & (edges <= 12)]
    x0, w0 = legendre.leggauss(nodes_per_unit)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        x = mid + half * x0
        total += half * np.sum(w0 * func(x) * np.exp(-0.5 * x * x)) / _SQRT_2PI
    return total


def _expectation(func, breakpoints=None, tol=1e-10):
    if breakpoints is None or len(breakpoints) == 0:
        a = _gauss_hermite_expectation(func, 128)
        b = _gauss_hermite_expectation(func, 256)
    else:
        a = _piecewise_legendre_expectation(func, breakpoints, 24)
        b = _piecewise_legendre_expectation(func, breakpoints, 48)
    if not np.isfinite(a) or abs(a - b) > tol * max(1.0, abs(b)):
        raise NumericalError(
            f"Hermite quadrature did not converge ({a!r} vs {b!r}); declare breakpoints of g"
        )
    return float(b)


def hermite_coeff(g, k: int, breakpoints=None, return_rank=False, max_rank=12):
    """Hermite coefficient ``eta_k = E[g(xi) h_k(xi)]``, xi standard normal.

    Parameters
    ----------
    g : callable or HermiteSubordination
        Vectorised function.
    k : int
        Order.
    breakpoints : sequence of float, optional
        Points where ``g`` is not smooth. Without them Gauss-Hermite
        quadrature (128 nodes, checked against 256) is used; with them a
        piecewise Gauss-Legendre rule on [-12, 12].
    return_rank : bool
        Also return the Hermite rank, the smallest ``j >= 1`` with ``eta_j != 0``.

    Examples
    --------
    >>> round(hermite_coeff(lambda x: x**2 - 1, 2), 12)
    2.0
    """
    k = check_int(k, "k", minimum=0)
    if isinstance(g, HermiteSubordination):
        breakpoints = g.breakpoints if breakpoints is None else breakpoints
        g = g.func
    # integrate against the orthonormal h_k / sqrt(k!) to keep magnitudes O(1)
    normalized = _expectation(lambda x: g(x) * _orthonormal_hermite(k, x), breakpoints)
    eta = 0.0 if abs(normalized) < 1e-12 else normalized * np.sqrt(float(factorial(k)))
    if not return_rank:
        return eta
    return eta, hermite_rank(g, breakpoints, max_rank)


def hermite_rank(g, breakpoints=None, max_rank=12) -> int:
    for j in range(1, max_rank + 1):
        if hermite_coeff(g, j, breakpoints) != 0.0:
            return j
    raise DegenerateInputError(f"no nonzero Hermite coefficient up to order {max_rank}")


_G_KINDS = ("identity", "square_minus_one", "sign", "polynomial", "callable")


@dataclass(frozen=True, eq=False)
class HermiteSubordination:
    """Descriptor of the function ``g`` in ``eps_i = g(xi_i) - E g(xi)``.

    Parameters
    ----------
    kind : {'identity', 'square_minus_one', 'sign', 'polynomial', 'callable'}
    coefficients : sequence of float, optional
        Monomial coefficients (increasing powers) for ``kind='polynomial'``.
    func : callable, optional
        For ``kind='callable'`` (not serialisable).
    breakpoints : tuple of float
        Non-smooth points of ``func`` (used by the quadrature).
    n_coefficients : int
        How many coefficients ``eta_r .. eta_{r+K}`` to keep.

    Attributes
    ----------
    rank : int
    eta : ndarray
        ``eta_r, ..., eta_{r+K}``.
    mean : float
        ``E g(xi)``, removed by :func:`subordinate`.
    """

    kind: str = "identity"
    coefficients: tuple = None
    func: object = field(default=None, repr=False)
    breakpoints: tuple = ()
    n_coefficients: int = 6

    def __post_init__(self):
        if self.kind not in _G_KINDS:
            raise InputError(f"unknown subordination kind {self.kind!r}")
        if self.kind == "identity":
            f, bp = (lambda x: np.asarray(x, dtype=float)), ()
        elif self.kind == "square_minus_one":
            f, bp = (lambda x: np.asarray(x, dtype=float) ** 2 - 1.0), ()
        elif self.kind == "sign":
            f, bp = (lambda x: np.sign(np.asarray(x, dtype=float))), (0.0,)
        elif self.kind == "polynomial":
            if self.coefficients is None:
                raise InputError("polynomial subordination needs coefficients")
            coef = tuple(float(c) for c in self.coefficients)
            object.__setattr__(self, "coefficients", coef)
            poly = np.polynomial.Polynomial(coef)
            f, bp = (lambda x: poly(np.asarray(x, dtype=float))), ()
        else:
            if not callable(self.func):
                raise InputError("callable subordination needs func")
            f, bp = self.func, tuple(self.breakpoints)
        object.__setattr__(self, "func", f)
        object.__setattr__(self, "breakpoints", tuple(bp))
        mean = _expectation(f, bp)
        rank = hermite_rank(f, bp)
        eta = np.array([hermite_coeff(f, rank + j, bp) for j in range(self.n_coefficients)])
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "eta", eta)

    @property
    def eta_r(self) -> float:
        return float(self.eta[0])

    def __call__(self, x):
        return self.func(x)

    def variance(self) -> float:
        return _expectation(lambda x: (self.func(x) - self.mean) ** 2, self.breakpoints)

    def to_dict(self):
        if self.kind == "callable":
            raise InputError("callable subordination cannot be serialised")
        d = {"g": self.kind}
        if self.kind == "polynomial":
            d["coefficients"] = list(self.coefficients)
        return d


def subordinate(xi, sub: HermiteSubordination) -> np.ndarray:
    """``g(xi) - E g(xi)`` elementwise."""
    xi = as_float_vector(xi, "xi")
    return np.asarray(sub(xi), dtype=float) - sub.mean


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def fgn_autocovariance(H: float, k):
    """``gamma(k) = (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) / 2``."""
    k = np.abs(np.asarray(k, dtype=float))
    e = 2.0 * H
    return 0.5 * (np.abs(k + 1) ** e - 2 * k**e + np.abs(k - 1) ** e)


def gen_fgn(H: float, n: int, seed, size=None) -> np.ndarray:
    """Exact fractional Gaussian noise with unit variance (Davies-Harte).

    Parameters
    ----------
    H : float
        Hurst index in (0, 1); ``H = 1/2`` is white noise.
    n : int
        Length.
    seed : int, SeedSequence or Generator
    size : int, optional
        Number of independent paths; returns shape ``(size, n)`` if given.
    """
    if not 0 < H < 1:
        raise DomainError(f"H must lie in (0, 1), got {H}")
    n = check_int(n, "n", minimum=1)
    rng = as_generator(seed)
    m = 1 if size is None else check_int(size, "size", minimum=1)
    if n == 1:
        out = rng.standard_normal((m, 1))
        return out[0] if size is None else out
    row = fgn_autocovariance(H, np.arange(n + 1))
    circ = np.concatenate((row, row[-2:0:-1]))
    lam = np.fft.fft(circ).real
    if np.min(lam) < -1e-10 * np.max(lam):
        raise NumericalError("circulant embedding is not nonnegative definite")
    lam = np.clip(lam, 0.0, None)
    two_n = circ.shape[0]
    z = rng.standard_normal((m, two_n)) + 1j * rng.standard_normal((m, two_n))
    paths = np.fft.fft(np.sqrt(lam / two_n) * z, axis=1)[:, :n].real
    return paths[0] if size is None else paths


_IID_DISTS = ("normal", "uniform", "laplace")


def _iid(rng, dist, n, sigma):
    if dist == "normal":
        return sigma * rng.standard_normal(n)
    if dist == "uniform":
        return sigma * np.sqrt(3.0) * rng.uniform(-1.0, 1.0, n)
    if dist == "laplace":
        return sigma / np.sqrt(2.0) * rng.laplace(0.0, 1.0, n)
    raise InputError(f"unknown distribution {dist!r}")


@dataclass(frozen=True)
class VarianceScale:
    """Partial-sum variance ``sigma_n^2`` with its regime and self-similarity index."""

    sigma2: float
    regime: str
    beta: float


@dataclass(frozen=True, eq=False)
class DependenceModel:
    """One of the three error regimes.

    Parameters
    ----------
    kind : {'iid', 'ar1', 'lrd'}
    sigma : float
        i.i.d.: standard deviation. LRD: multiplies ``g(xi) - E g`` (so the
        leading Hermite coefficient becomes ``sigma * eta_r``).
    dist : str
        i.i.d. marginal: 'normal', 'uniform' or 'laplace' (all scaled to sd ``sigma``).
    rho, innovation_sd : float
        AR(1) parameters: ``eps_i = rho eps_{i-1} + innovation_sd * e_i``.
    H : float
        Hurst index of the Gaussian fGn source (LRD); ``d = 2 - 2H``.
    subordination : HermiteSubordination
        LRD transform ``g``; default identity.
    """

    kind: str = "iid"
    sigma: float = 1.0
    dist: str = "normal"
    rho: float = 0.0
    innovation_sd: float = 1.0
    H: float = 0.75
    subordination: HermiteSubordination = None

    def __post_init__(self):
        if self.kind not in ("iid", "ar1", "lrd"):
            raise ValidationError(f"unknown dependence kind {self.kind!r}", path="/dependence/kind")
        # sigma = 0 (noise-free data) is allowed for i.i.d. errors only
        check_positive(float(self.sigma), "sigma", strict=self.kind != "iid")
        if self.kind == "iid" and self.dist not in _IID_DISTS:
            raise ValidationError(f"unknown distribution {self.dist!r}", path="/dependence/dist")
        if self.kind == "ar1":
            if not abs(self.rho) < 1:
                raise ValidationError(
                    f"AR(1) needs |rho| < 1, got {self.rho}", path="/dependence/rho", hypothesis="|rho| < 1"
                )
            check_positive(float(self.innovation_sd), "innovation_sd")
        if self.kind == "lrd":
            if self.subordination is None:
                object.__setattr__(self, "subordination", HermiteSubordination())
            if not 0.5 < self.H < 1:
                raise ValidationError(
                    f"LRD needs 1/2 < H < 1, got {self.H}", path="/dependence/H", hypothesis="0 < d < 1"
                )
            if not self.r * self.d < 1:
                raise ValidationError(
                    f"rank {self.r} with d = {self.d:.4g} gives rd >= 1 (not long range dependent)",
                    path="/dependence",
                    hypothesis="0 < d < 1/r",
                )

    # -- derived quantities ------------------------------------------------------

    @property
    def d(self) -> float:
        return 2.0 - 2.0 * self.H

    @property
    def r(self) -> int:
        return self.subordination.rank if self.kind == "lrd" else 1

    @property
    def eta_r(self) -> float:
        """Leading Hermite coefficient of the scaled errors (LRD only)."""
        if self.kind != "lrd":
            raise DomainError("eta_r is defined for LRD models only")
        return self.sigma * self.subordination.eta_r

    @property
    def beta(self) -> float:
        return 1.0 - self.r * self.d / 2.0 if self.kind == "lrd" else 0.5

    @property
    def marginal_variance(self) -> float:
        if self.kind == "iid":
            return self.sigma**2
        if self.kind == "ar1":
            return self.innovation_sd**2 / (1 - self.rho**2)
        return self.sigma**2 * self.subordination.variance()

    def variance_scale(self, n: int) -> VarianceScale:
        return VarianceScale(partial_sum_variance(self, n), self.kind, self.beta)

    # -- sampling ------------------------------------------------------------------

    def generate(self, n: int, seed) -> np.ndarray:
        """``n`` consecutive errors of the stationary sequence."""
        if self.kind == "iid":
            return gen_iid(self, n, seed)
        if self.kind == "ar1":
            return gen_ar1(self, n, seed)
        return self.sigma * subordinate(gen_fgn(self.H, n, seed), self.subordination)

    def latent_gaussian(self, n: int, seed) -> np.ndarray:
        """Standard normal marginals with this model's dependence (density copula)."""
        rng = as_generator(seed)
        if self.kind == "iid":
            return rng.standard_normal(n)
        if self.kind == "ar1":
            unit = DependenceModel("ar1", rho=self.rho, innovation_sd=np.sqrt(1 - self.rho**2))
            return gen_ar1(unit, n, rng)
        return gen_fgn(self.H, n, rng)

    # -- serialisation -----------------------------------------------------------

    def to_dict(self):
        if self.kind == "iid":
            return {"kind": "iid", "dist": self.dist, "sigma": self.sigma}
        if self.kind == "ar1":
            return {"kind": "ar1", "rho": self.rho, "innovation_sd": self.innovation_sd}
        return {"kind": "lrd", "H": self.H, "sigma": self.sigma, **self.subordination.to_dict()}

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        kind = d.pop("kind", "iid")
        if kind == "lrd":
            if "d" in d:
                if "H" in d:
                    raise ValidationError("give either H or d, not both", path="/dependence")
                d["H"] = 1.0 - float(d.pop("d")) / 2.0
            g = d.pop("g", "identity")
            sub = HermiteSubordination(g, coefficients=d.pop("coefficients", None))
            return cls("lrd", sigma=float(d.pop("sigma", 1.0)), H=float(d.pop("H")), subordination=sub)
        if kind == "iid":
            return cls("iid", sigma=float(d.pop("sigma", 1.0)), dist=d.pop("dist", "normal"))
        if kind == "ar1":
            return cls("ar1", rho=float(d.pop("rho")), innovation_sd=float(d.pop("innovation_sd", 1.0)))
        raise ValidationError(f"unknown dependence kind {kind!r}", path="/dependence/kind")


def gen_iid(model: DependenceModel, n: int, seed) -> np.ndarray:
    """``n`` i.i.d. centred draws with sd ``model.sigma``."""
    n = check_int(n, "n", minimum=1)
    return _iid(as_generator(seed), model.dist, n, model.sigma)


def gen_ar1(model: DependenceModel, n: int, seed) -> np.ndarray:
    """Stationary Gaussian AR(1) started from its stationary law."""
    n = check_int(n, "n", minimum=1)
    if not abs(model.rho) < 1:
        raise ValidationError("AR(1) needs |rho| < 1", hypothesis="|rho| < 1")
    rng = as_generator(seed)
    rho, s = model.rho, model.innovation_sd
    e = s * rng.standard_normal(n)
    e[0] /= np.sqrt(1 - rho * rho)  # stationary start
    return lfilter([1.0], [1.0, -rho], e)


def kappa_squared(model: DependenceModel) -> float:
    """Long-run variance ``Cov(0) + 2 sum_k Cov(k)``."""
    if model.kind == "iid":
        return model.sigma**2
    if model.kind == "ar1":
        return model.innovation_sd**2 / (1 - model.rho) ** 2
    raise DomainError("kappa^2 is undefined under long range dependence (covariances not summable)")


def sigma_n_lrd(n, r: int, d: float, eta_r: float, l0: float = 1.0) -> float:
    """Leading-order ``eta_r^2 n^{2-rd} l_1`` with ``l_1 = 2 l0^r / (r! (1-rd)(2-rd))``.

    ``l0`` is the constant in ``Cov(k) ~ l0 k^{-d}``; for fGn it is ``H(2H-1)``.
    """
    r = check_int(r, "r", minimum=1)
    rd = r * d
    if not 0 < rd < 1:
        raise DomainError(f"need 0 < rd < 1, got rd = {rd}")
    l1 = 2.0 * l0**r / (factorial(r) * (1 - rd) * (2 - rd))
    return float(eta_r**2 * np.asarray(n, dtype=float) ** (2 - rd) * l1)


def partial_sum_variance(model: DependenceModel, n: int, max_order: int = 12) -> float:
    """Exact ``Var(sum_{i<=n} eps_i)`` for the model.

    For LRD the Hermite expansion ``sum_k eta_k^2/k! sum_{i,j} gamma(i-j)^k`` is
    summed up to ``max_order``; the remaining orders only contribute through
    the diagonal to working precision (``|gamma(l)|^k`` is negligible for
    ``l >= 1``), so they are added as ``n (Var g - sum_{k<=max_order} eta_k^2/k!)``.
    """
    n = check_int(n, "n", minimum=1)
    if model.kind == "iid":
        return model.sigma**2 * n
    if model.kind == "ar1":
        rho = model.rho
        lags = np.arange(1, n)
        cov = rho**lags
        return model.marginal_variance * (n + 2 * np.sum((n - lags) * cov))
    lags = np.arange(1, n)
    gamma = fgn_autocovariance(model.H, lags)
    sub = model.subordination
    total, explained = 0.0, 0.0
    for k in range(sub.rank, max_order + 1):
        eta = hermite_coeff(sub.func, k, sub.breakpoints)
        if eta == 0.0:
            continue
        c = eta**2 / factorial(k)
        explained += c
        total += c * (n + 2 * np.sum((n - lags) * gamma**k))
    total += n * max(sub.variance() - explained, 0.0)
    return float(model.sigma**2 * total)


# ---------------------------------------------------------------------------
# two-sided partial sums and local processes
# ---------------------------------------------------------------------------


def partial_sum_process(eps, sigma_n: float) -> GridFunction:
    """Two-sided partial-sum process ``w_n``.

    Parameters
    ----------
    eps : array_like, length ``2n + 1``
        ``eps_{-n}, ..., eps_0, ..., eps_n``.
    sigma_n : float
        Normalisation.

    Returns
    -------
    GridFunction
        Piecewise linear with knots ``t_i + 1/(2n) = (i + 1/2)/n`` for
        ``i = -n-1, ..., n``: ``(eps_0/2 + sum_{j=1}^i eps_j)/sigma_n`` for
        ``i >= 0`` and ``-(eps_0/2 + sum_{j=i+1}^{-1} eps_j)/sigma_n`` for ``i < 0``.
    """
    e = as_float_vector(eps, "eps", min_length=3)
    if e.shape[0] % 2 == 0:
        raise InputError("eps must have odd length 2n + 1 (indices -n..n)")
    if not sigma_n > 0:
        raise InputError(f"sigma_n must be > 0, got {sigma_n}")
    n = (e.shape[0] - 1) // 2
    e0 = e[n]
    right = e0 / 2 + np.concatenate(([0.0], np.cumsum(e[n + 1 :])))  # i = 0..n
    left = -e0 / 2 - np.concatenate(([0.0], np.cumsum(e[:n][::-1])))  # i = -1, -2, ..., -n-1
    values = np.concatenate((left[::-1], right)) / sigma_n
    knots = (np.arange(-n - 1, n + 1) + 0.5) / n
    return GridFunction(knots, values)


def rescale_local(v: GridFunction, t0: float, d_n: float, p: float = 2.0) -> GridFunction:
    """``d_n^{-p} (v(t0 + s d_n) - v(t0))`` as a function of ``s``.

    The result keeps ``v``'s knots (mapped to ``s``) plus ``s = 0``; it is
    held constant beyond the data window when evaluated with ``extrapolate=True``.
    """
    check_positive(float(d_n), "d_n")
    if not p > 1:
        raise DomainError(f"p must exceed 1, got {p}")
    lo, hi = v.domain
    if not lo < t0 < hi:
        raise DomainError(f"t0 = {t0} is not interior to [{lo}, {hi}]")
    v0 = v(t0)
    s = (v.knots - t0) / d_n
    vals = (v.values - v0) / d_n**p
    if not np.any(s == 0):
        j = np.searchsorted(s, 0.0)
        s = np.insert(s, j, 0.0)
        vals = np.insert(vals, j, 0.0)
    return GridFunction(s, vals, v.interpolation)


def local_empirical_process(sample, t0: float, delta_n: float, cdf, s_grid=None,
                            density_at_t0=None, kernel=None, h=None):
    """Local empirical process around ``t0`` on scale ``delta_n``.

    ``w(s) = sigma^{-1} sum_i (1{t_i <= t0 + s delta} - 1{t_i <= t0} - F(t0 + s delta) + F(t0))``
    with ``sigma = sqrt(n delta f_hat(t0))``.

    Parameters
    ----------
    sample : array_like or DensitySample
    t0, delta_n : float
    cdf : callable
        The marginal distribution function ``F``.
    s_grid : array_like, optional
        Where to evaluate; default 401 points on [-4, 4].
    density_at_t0 : float, optional
        Use this instead of the kernel plug-in for ``f(t0)``.
    kernel, h : optional
        Plug-in kernel density settings (default Epanechnikov with a
        rule-of-thumb bandwidth ``2.34 sd n^{-1/5}``).

    Returns
    -------
    (GridFunction, float)
        The process on ``s_grid`` (step interpolation) and ``sigma``.
    """
    from .density import DensitySample, kernel_density

    obs = sample.observations if isinstance(sample, DensitySample) else as_float_vector(sample)
    n = obs.shape[0]
    check_positive(float(delta_n), "delta_n")
    s = np.linspace(-4, 4, 401) if s_grid is None else as_float_vector(s_grid, "s_grid", min_length=2)
    if density_at_t0 is None:
        h = 2.34 * np.std(obs) * n ** (-0.2) if h is None else h
        f0 = float(kernel_density(obs, kernel, max(h, 1e-12), [t0])[0])
    else:
        f0 = float(density_at_t0)
    if not f0 > 0:
        raise DegenerateInputError(f"plug-in density at t0 is {f0:.3g}; cannot normalise")
    sigma = np.sqrt(n * delta_n * f0)
    srt = np.sort(obs)
    count = np.searchsorted(srt, t0 + s * delta_n, side="right") - np.searchsorted(srt, t0, side="right")
    drift = n * (np.asarray(cdf(t0 + s * delta_n), dtype=float) - float(cdf(t0)))
    w = (count - drift) / sigma
    return GridFunction(s, w, interpolation="step"), float(sigma)


def lrd_window_exponents(d: float, r: int = 1):
    """Diagnostics ``(kappa_1, kappa_2) = (min(d, 1-rd)/2, min(2d, 1-rd)/2)``.

    Local LRD density results are only claimed for windows ``delta_n >> n^{-kappa_1}``.
    """
    return min(d, 1 - r * d) / 2.0, min(2 * d, 1 - r * d) / 2.0
