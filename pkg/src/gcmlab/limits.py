"""Samplers for the limit laws of hull functionals, and the rate calculus.

The central object is the functional ``y -> (T(y)(0), T(y)'(0))`` applied to
``y(s) = A|s|^p + v(s)`` with a random driver ``v``. Paths are simulated on a
symmetric grid ``s = k * Delta`` truncated at ``|s| <= c_max``. Before taking
the hull the argument is rescaled to ``A = 1`` coordinates (``s = lambda u``
with ``lambda = A^{-1/p}``) so one default truncation serves all curvatures.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from numpy.polynomial import hermite_e

from ._errors import DomainError, InputError, ValidationError
from ._validation import as_generator, check_positive
from .gcm import GridFunction, gcm
from .kernels import _as_kernel, smooth_polygon_lattice
from .processes import (
    DependenceModel,
    HermiteSubordination,
    derive_seed,
    gen_fgn,
    partial_sum_variance,
)

__all__ = [
    "DriverSpec",
    "LimitSpec",
    "LimitDraw",
    "sample_two_sided_bm",
    "sample_two_sided_fbm",
    "sample_hermite_driver",
    "sample_driver",
    "sample_limit_functional",
    "sample_limit_batch",
    "chernoff_sample",
    "rate_dn",
    "TheoremConstants",
    "theorem_constants",
]

DEFAULT_C_MAX = 8.0
DEFAULT_DELTA = 2.0**-9
_DRIVERS = ("none", "bm", "fbm", "hermite", "linear", "smoothed")


def _half_grid(c_max, delta):
    c_max = check_positive(float(c_max), "c_max")
    delta = check_positive(float(delta), "delta")
    if delta > c_max / 4:
        raise ValidationError(f"grid spacing {delta} too coarse for c_max={c_max}", hypothesis="delta << c_max")
    return int(math.ceil(c_max / delta - 1e-9))


def _two_sided(left, right):
    """Assemble values at -m..m from outward cumulative sums of each side."""
    return np.concatenate((left[::-1], [0.0], right))


def sample_two_sided_bm(c_max, delta, scale=1.0, seed=None) -> GridFunction:
    """Two-sided Brownian motion on ``k * delta``, ``|k| <= ceil(c_max/delta)``.

    The two halves use independent child streams and are generated outward
    from 0, so a path with a larger ``c_max`` (same seed and spacing) extends
    the shorter one. This makes truncation comparisons coupled.
    """
    m = _half_grid(c_max, delta)
    seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(_seed_entropy(seed))
    right_ss, left_ss = (np.random.SeedSequence(seq.entropy, spawn_key=seq.spawn_key + (i,)) for i in (0, 1))
    sd = float(scale) * math.sqrt(delta)
    right = np.cumsum(np.random.default_rng(right_ss).standard_normal(m)) * sd
    left = np.cumsum(np.random.default_rng(left_ss).standard_normal(m)) * sd
    return GridFunction(np.arange(-m, m + 1) * delta, _two_sided(left, right))


def _seed_entropy(seed):
    if seed is None:
        raise InputError("an explicit seed is required")
    if isinstance(seed, np.random.Generator):
        return int(seed.integers(2**63))
    return seed


def sample_two_sided_fbm(H, c_max, delta, scale=1.0, seed=None) -> GridFunction:
    """Two-sided fractional Brownian motion with Hurst index ``H`` in [1/2, 1).

    One fGn path of length ``2m`` is cumulated outward from the centre, so the
    increments are stationary across 0 (for ``H = 1/2`` this is Brownian motion).
    """
    H = float(H)
    if not 0.5 <= H < 1.0:
        raise ValidationError(f"Hurst index H={H} outside [1/2, 1)", path="/limit/driver/H",
                              hypothesis="1/2 <= H < 1")
    m = _half_grid(c_max, delta)
    x = gen_fgn(H, 2 * m, seed) * (float(scale) * delta**H)
    right = np.cumsum(x[m:])
    left = -np.cumsum(x[:m][::-1])
    return GridFunction(np.arange(-m, m + 1) * delta, _two_sided(left, right))


def sample_hermite_driver(H, rank, c_max, delta, scale=1.0, seed=None, n_tilde=2**15) -> GridFunction:
    """Approximate two-sided Hermite process of rank ``rank`` (Rosenblatt for 2).

    Uses the normalised partial sums of ``He_r(xi_i)`` for a latent fGn with
    Hurst index ``H``: ``n_tilde`` steps on each side of 0 cover ``[0, c_max]``,
    normalised so that ``Var Z(c_max) = c_max^{2 beta}`` with
    ``beta = 1 - r d / 2`` and ``d = 2 - 2H``. This is a weak-convergence
    approximation, not an exact sampler.
    """
    rank = int(rank)
    d = 2.0 - 2.0 * float(H)
    if rank < 1 or not 0 < rank * d < 1:
        raise ValidationError(f"rank {rank} with d={d:.3g} is not long range dependent",
                              path="/limit/driver", hypothesis="0 < r d < 1")
    beta = 1.0 - rank * d / 2.0
    m = _half_grid(c_max, delta)
    coefs = hermite_e.herme2poly([0.0] * rank + [1.0])
    sub = HermiteSubordination("polynomial", coefficients=list(coefs))
    xi = gen_fgn(H, 2 * n_tilde, seed)
    e = sub(xi)
    sd = math.sqrt(partial_sum_variance(DependenceModel("lrd", H=H, subordination=sub), n_tilde))
    norm = float(scale) * float(c_max) ** beta / sd
    right = np.concatenate(([0.0], np.cumsum(e[n_tilde:]))) * norm
    left = np.concatenate(([0.0], np.cumsum(e[:n_tilde][::-1]))) * norm
    steps = np.arange(n_tilde + 1) * (float(c_max) / n_tilde)
    s = np.arange(1, m + 1) * delta
    return GridFunction(np.arange(-m, m + 1) * delta,
                        _two_sided(-np.interp(s, steps, left), np.interp(s, steps, right)))


@dataclass(frozen=True)
class DriverSpec:
    """Description of the random driver ``v``.

    Parameters
    ----------
    kind : str
        ``'none'`` (v = 0), ``'bm'`` (two-sided Brownian motion), ``'fbm'``
        (two-sided fBm with index ``H``), ``'hermite'`` (rank-``rank`` Hermite
        process, approximated), ``'linear'`` (``v(s) = Z s``, Z normal with
        standard deviation ``scale``) or ``'smoothed'``
        (``v(s) = c int (w(s-u) - w(-u)) k'(u) du`` with ``w`` drawn from
        ``base``; ``derivative=False`` uses ``k`` instead of ``k'``, and
        ``centered=False`` keeps the offset ``c int w(-u) k'(u) du``, i.e.
        ``v(s) = c (k' * w)(s)``).
    scale : float
        Multiplier of the driver (``c`` for ``'smoothed'``).
    """

    kind: str = "bm"
    scale: float = 1.0
    H: float = 0.5
    rank: int = 1
    kernel: object = None
    base: "DriverSpec" = None
    derivative: bool = True
    centered: bool = True

    def __post_init__(self):
        if self.kind not in _DRIVERS:
            raise ValidationError(f"unknown driver {self.kind!r}", path="/limit/driver/kind")
        if not np.isfinite(self.scale) or self.scale < 0:
            raise ValidationError("driver scale must be finite and >= 0", path="/limit/driver/scale")
        if self.kind == "smoothed":
            object.__setattr__(self, "kernel", _as_kernel(self.kernel))
            if self.base is None:
                object.__setattr__(self, "base", DriverSpec("bm"))
            elif isinstance(self.base, dict):
                object.__setattr__(self, "base", DriverSpec.from_dict(self.base))

    def to_dict(self):
        d = {"kind": self.kind, "scale": self.scale}
        if self.kind in ("fbm", "hermite"):
            d["H"] = self.H
        if self.kind == "hermite":
            d["rank"] = self.rank
        if self.kind == "smoothed":
            d.update(kernel=self.kernel.to_dict(), base=self.base.to_dict(), derivative=self.derivative,
                     centered=self.centered)
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        if isinstance(d.get("base"), dict):
            d["base"] = cls.from_dict(d["base"])
        return cls(**d)


def sample_driver(driver: DriverSpec, half_length, spacing, seed) -> GridFunction:
    """Driver values on ``k * spacing``, ``|k| <= ceil(half_length/spacing)``.

    ``v(0) = 0`` except for an uncentred smoothed driver.
    """
    kind = driver.kind
    m = _half_grid(half_length, spacing)
    s = np.arange(-m, m + 1) * spacing
    if kind == "none":
        return GridFunction(s, np.zeros_like(s))
    if kind == "linear":
        z = as_generator(seed).standard_normal() * driver.scale
        return GridFunction(s, z * s)
    if kind == "bm":
        return sample_two_sided_bm(half_length, spacing, driver.scale, seed)
    if kind == "fbm":
        return sample_two_sided_fbm(driver.H, half_length, spacing, driver.scale, seed)
    if kind == "hermite":
        return sample_hermite_driver(driver.H, driver.rank, half_length, spacing, driver.scale, seed)
    # kernel-smoothed driver: smooth the base path with bandwidth 1 on a wider grid
    base = sample_driver(driver.base, half_length + 1.0 + 2 * spacing, spacing, seed)
    sm = smooth_polygon_lattice(base.values, spacing, driver.kernel, 1.0, derivative=driver.derivative)
    mb = (len(base) - 1) // 2
    v = driver.scale * (sm[mb - m: mb + m + 1] - (sm[mb] if driver.centered else 0.0))
    return GridFunction(s, v)


@dataclass(frozen=True)
class LimitSpec:
    """Parameters of ``T(A|s|^p + v(s))`` and of its simulation grid.

    ``c_max`` and ``delta`` are in ``A = 1`` coordinates.
    """

    p: float = 2.0
    A: float = 1.0
    driver: DriverSpec = field(default_factory=DriverSpec)
    c_max: float = DEFAULT_C_MAX
    delta: float = DEFAULT_DELTA
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.driver, dict):
            object.__setattr__(self, "driver", DriverSpec.from_dict(self.driver))
        if not self.p > 1:
            raise ValidationError(f"p={self.p} must exceed 1", path="/limit/p", hypothesis="p > 1")
        if not self.A > 0:
            raise ValidationError(f"A={self.A} must be positive", path="/limit/A", hypothesis="A > 0")
        _half_grid(self.c_max, self.delta)

    @property
    def lam(self) -> float:
        """Scale ``lambda = A^{-1/p}`` taking ``A|s|^p`` to ``|u|^p``."""
        return self.A ** (-1.0 / self.p)

    def to_dict(self):
        d = asdict(self)
        d["driver"] = self.driver.to_dict()
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


@dataclass(frozen=True, eq=False)
class LimitDraw:
    """One draw of the hull functional.

    Attributes
    ----------
    t_value : float
        ``T(y)(0)``.
    slope : float
        ``T(y)'(0)``, the right derivative (of the gridded hull for random drivers).
    argmin : float
        ``argmin_s y(s)`` (smallest minimiser on the grid).
    stable : bool
        False when the hull segments around 0 or the minimiser reach beyond
        ``c_max/2`` even after the allowed redraws.
    c_max : float
        Truncation actually used (A = 1 coordinates).
    """

    t_value: float
    slope: float
    argmin: float
    stable: bool
    c_max: float
    hull: object = field(repr=False, default=None)
    lam: float = 1.0
    p: float = 2.0
    A: float = 1.0

    def argmin_shift(self, a):
        """``argmin_s (y(s) - a s)``, read off the hull (smallest minimiser).

        By construction ``slope < a`` exactly when the result is positive.
        """
        a = np.asarray(a, dtype=float)
        if self.hull is None:
            # y(s) = A|s|^p + Z s with Z = slope; minimiser of A|s|^p - (a - Z) s
            g = a - self.slope
            return np.sign(g) * (np.abs(g) / (self.p * self.A)) ** (1.0 / (self.p - 1.0))
        slopes = self.hull.slopes
        knots = self.hull.knots
        i = np.searchsorted(slopes, a * self.lam, side="left")
        return self.lam * knots[np.minimum(i, knots.shape[0] - 1)]


def _linear_draw(spec: LimitSpec, seed):
    """Closed form for ``v(s) = Z s``: y is convex, so ``T(y) = y``."""
    z = 0.0 if spec.driver.kind == "none" else float(as_generator(seed).standard_normal() * spec.driver.scale)
    arg = -np.sign(z) * (abs(z) / (spec.p * spec.A)) ** (1.0 / (spec.p - 1.0))
    return LimitDraw(t_value=0.0, slope=z, argmin=float(arg) + 0.0, stable=True, c_max=float(spec.c_max),
                     lam=spec.lam, p=spec.p, A=spec.A)


def _draw_once(spec: LimitSpec, c_max, seed):
    lam = spec.lam
    m = _half_grid(c_max, spec.delta)
    u = np.arange(-m, m + 1) * spec.delta
    v = sample_driver(spec.driver, lam * c_max, lam * spec.delta, seed)
    y = np.abs(u) ** spec.p + v.values
    fit = gcm(GridFunction(u, y))
    knots, slopes = fit.knots, fit.slopes
    j0 = min(np.searchsorted(knots, 0.0, side="right") - 1, slopes.shape[0] - 1)
    arg_u = knots[min(np.searchsorted(slopes, 0.0, side="left"), knots.shape[0] - 1)]
    half = c_max / 2
    stable = knots[j0] >= -half and knots[j0 + 1] <= half and abs(arg_u) <= half
    draw = LimitDraw(t_value=float(fit(0.0)), slope=float(slopes[j0]) / lam, argmin=float(lam * arg_u),
                     stable=bool(stable), c_max=float(c_max), hull=fit, lam=lam)
    return draw


def sample_limit_functional(spec: LimitSpec, seed=None, max_redraws: int = 2) -> LimitDraw:
    """Draw ``T(y)(0)``, ``T(y)'(0)`` and ``argmin y`` for ``y = A|s|^p + v``.

    A draw whose hull touches beyond ``c_max/2`` is redrawn with doubled
    ``c_max`` (at most ``max_redraws`` times) and reported unstable if it
    still does. The deterministic-shape drivers ``'none'`` and ``'linear'``
    give a convex ``y``, for which ``T(y) = y`` is used exactly (no grid).

    Examples
    --------
    >>> d = sample_limit_functional(LimitSpec(driver=DriverSpec("none")))
    >>> d.t_value, d.slope, d.argmin
    (0.0, 0.0, 0.0)
    """
    seed = spec.seed if seed is None else seed
    if spec.driver.kind in ("none", "linear"):
        return _linear_draw(spec, np.random.SeedSequence(_seed_entropy(seed))
                            if not isinstance(seed, np.random.SeedSequence) else seed)
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(_seed_entropy(seed))
    c_max = spec.c_max
    for attempt in range(max_redraws + 1):
        ss = root if attempt == 0 else np.random.SeedSequence(root.entropy, spawn_key=root.spawn_key + (attempt,))
        draw = _draw_once(spec, c_max, ss)
        if draw.stable:
            break
        c_max *= 2
    return draw


def sample_limit_batch(spec: LimitSpec, R: int, seed=None) -> dict:
    """``R`` independent draws with per-draw seeds derived from ``seed`` (default ``spec.seed``).

    Returns a dict of arrays ``t_value``, ``slope``, ``argmin``, ``stable``.
    """
    master = spec.seed if seed is None else seed
    out = {k: np.empty(R) for k in ("t_value", "slope", "argmin")}
    out["stable"] = np.empty(R, dtype=bool)
    for j in range(R):
        d = sample_limit_functional(spec, seed=derive_seed(master, j))
        out["t_value"][j], out["slope"][j], out["argmin"][j] = d.t_value, d.slope, d.argmin
        out["stable"][j] = d.stable
    return out


def chernoff_sample(R: int, c_max=DEFAULT_C_MAX, delta=DEFAULT_DELTA, seed=0) -> np.ndarray:
    """``R`` draws of ``argmin_s (s^2 + B(s))`` on the truncated grid.

    Draw ``j`` uses the seed ``derive_seed(seed, j)``; with the same seed a
    larger ``c_max`` extends the same paths, so truncation effects can be
    compared draw by draw.
    """
    m = _half_grid(c_max, delta)
    s = np.arange(-m, m + 1) * delta
    par = s * s
    out = np.empty(int(R))
    for j in range(int(R)):
        b = sample_two_sided_bm(c_max, delta, 1.0, derive_seed(seed, j))
        out[j] = s[np.argmin(par + b.values)]
    return out


# -- rate calculus --------------------------------------------------------------


def rate_dn(a_exp, b_exp, beta, p=2.0):
    """Exponents of ``d_n = (a_n b_n^{-beta})^{1/(p - beta)}``.

    ``a_exp`` and ``b_exp`` are ``(exponent of n, exponent of h)`` pairs.

    Examples
    --------
    >>> rate_dn((-0.5, 0.0), (0.0, 0.0), 0.5, 2)
    (-0.3333333333333333, 0.0)
    """
    beta, p = float(beta), float(p)
    if not p > beta > 0:
        raise DomainError(f"need p > beta > 0, got p={p}, beta={beta}")
    a = np.asarray(a_exp, dtype=float)
    b = np.asarray(b_exp, dtype=float)
    if a.shape != (2,) or b.shape != (2,):
        raise InputError("exponents must be (exp_n, exp_h) pairs")
    res = (a - beta * b) / (p - beta)
    return float(res[0]), float(res[1])


@dataclass(frozen=True)
class TheoremConstants:
    """Scaling constants of one limit theorem.

    Attributes
    ----------
    theorem : str
    c1, c2 : float or None
        Multipliers of the pointwise and integrated scaled errors.
    rate_exponent : float
        ``d_n`` is proportional to ``n ** rate_exponent`` (slowly varying factors aside).
    dn_factor : float
        ``d_n = dn_factor * n ** rate_exponent``.
    dn_text : str
        Human-readable ``d_n``.
    extra : dict
        Theorem-specific constants (curvature ``A``, driver scale ``c``, bias...).
    """

    theorem: str
    c1: float
    c2: float
    rate_exponent: float
    dn_factor: float
    dn_text: str
    extra: dict = field(default_factory=dict)

    def d_n(self, n):
        return self.dn_factor * np.asarray(n, dtype=float) ** self.rate_exponent


def _pos(params, name):
    if name not in params:
        raise InputError(f"missing parameter {name!r}")
    v = float(params[name])
    if not v > 0:
        raise DomainError(f"{name} must be positive, got {v}")
    return v


def theorem_constants(theorem: str, params: dict) -> TheoremConstants:
    """Closed-form constants for theorems ``'3i' '3ii' '3iii' '4i' '4ii' '4iii' '5i' '5ii' '6i' '6ii' '10' '11' '12'``.

    Parameter names: ``m1`` (m'(t0)), ``m2`` (m''(t0)), ``sigma``, ``kappa``,
    ``eta`` (|eta_r|), ``r``, ``d``, ``l1``, ``a`` (bandwidth constant),
    ``kernel``, ``f`` (f(t0)), ``f1`` (f'(t0)), ``f2`` (f''(t0)), ``eta1p``
    (eta_1'(t0)).

    Examples
    --------
    >>> theorem_constants("3i", {"m1": 1.0, "sigma": 1.0}).c1 == 2 ** (-2 / 3)
    True
    """
    th = str(theorem).lower()
    if th in ("3i", "3ii"):
        m1 = _pos(params, "m1")
        s = _pos(params, "sigma" if th == "3i" else "kappa")
        return TheoremConstants(th, 2 ** (-2 / 3) * m1 ** (-1 / 3) * s ** (-2 / 3),
                                2 ** (-1 / 3) * m1 ** (1 / 3) * s ** (-4 / 3), -1 / 3, 1.0, "n^(-1/3)")
    if th == "3iii":
        m1, eta = _pos(params, "m1"), _pos(params, "eta")
        r, d = int(params.get("r", 1)), _pos(params, "d")
        l1 = float(params.get("l1", 1.0))
        beta = 1 - r * d / 2
        c1 = 2 ** (-1 / (2 - beta)) * m1 ** ((beta - 1) / (2 - beta)) * eta ** (-1 / (2 - beta))
        c2 = 2 ** (-beta / (2 - beta)) * m1 ** (beta / (2 - beta)) * eta ** (-2 / (2 - beta))
        e = -r * d / (2 + r * d)
        return TheoremConstants(th, c1, c2, e, l1 ** (1 / (2 + r * d)),
                                f"l1^(1/(2+rd)) n^({e:.6g})", {"beta": beta})
    if th in ("4i", "4ii", "4iii"):
        m2, a = _pos(params, "m2"), _pos(params, "a")
        kern = _as_kernel(params.get("kernel"))
        if th == "4iii":
            r, d = int(params.get("r", 1)), _pos(params, "d")
            c, e = _pos(params, "eta") * a, -r * d / (4 + r * d)
        else:
            c, e = _pos(params, "sigma" if th == "4i" else "kappa") * a ** -2.5, -0.2
        bias = 0.5 * m2 * kern.moment(2)
        return TheoremConstants(th, None, None, e, a, f"h = {a:g} n^({e:.6g})",
                                {"A": m2 / 2, "c": c, "bias": bias})
    if th in ("5i", "5ii"):
        m1, a = _pos(params, "m1"), _pos(params, "a")
        s = _pos(params, "sigma" if th == "5i" else "kappa")
        return TheoremConstants(th, None, None, -1 / 3, 1.0, "n^(-1/3)",
                                {"A": m1 / 2, "c": a ** -1.5 * s, "scale": math.sqrt(2 * m1) * a})
    if th in ("6i", "6ii"):
        s = _pos(params, "sigma" if th == "6i" else "kappa")
        kern = _as_kernel(params.get("kernel"))
        return TheoremConstants(th, None, None, -0.5, 1.0, "(n h)^(-1/2)",
                                {"variance": s * s * kern.l2_norm_sq, "h_exponent_of_dn": -0.5})
    if th == "10":
        f, f1 = _pos(params, "f"), _pos(params, "f1")
        return TheoremConstants(th, f ** (-1 / 3) * 0.5 ** (2 / 3) * f1 ** (-1 / 3),
                                f ** (-2 / 3) * (0.5 * f1) ** (1 / 3), -1 / 3, 1.0, "n^(-1/3)")
    if th == "11":
        d = _pos(params, "d")
        if not d < 0.5:
            raise DomainError("the long range dependent Grenander limit needs 0 < d < 1/2")
        eta1p = abs(float(params.get("eta1p", 0.0)))
        if eta1p == 0:
            raise DomainError("eta_1'(t0) must be nonzero")
        l1 = float(params.get("l1", 1.0))
        return TheoremConstants(th, 1.0, None, -d / 2, eta1p * math.sqrt(l1), "|eta_1'| l1^(1/2) n^(-d/2)")
    if th == "12":
        f, f2, a = _pos(params, "f"), _pos(params, "f2"), _pos(params, "a")
        kern = _as_kernel(params.get("kernel"))
        return TheoremConstants(th, None, None, -0.2, a, f"h = {a:g} n^(-1/5)",
                                {"A": f2 / 2, "c": a ** -2.5 * math.sqrt(f), "bias": 0.5 * f2 * kern.moment(2)})
    raise InputError(f"unknown theorem id {theorem!r}")
