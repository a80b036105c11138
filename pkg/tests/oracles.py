"""Brute-force reference implementations used only by the tests.

These are deliberately naive and share no code with the package.
"""

import itertools

import numpy as np


def hull_by_chords(x, y, t):
    """Lower convex hull at ``t``: minimum over all chords spanning ``t``."""
    best = np.inf
    n = len(x)
    for a in range(n):
        if x[a] > t:
            break
        for b in range(a, n):
            if x[b] < t:
                continue
            if a == b:
                val = y[a]
            else:
                lam = (t - x[a]) / (x[b] - x[a])
                val = (1 - lam) * y[a] + lam * y[b]
            best = min(best, val)
    return best


def isotonic_by_partitions(y, w):
    """Weighted isotonic LSQ by enumerating every partition into consecutive blocks."""
    n = len(y)
    best, best_fit = np.inf, None
    for cuts in itertools.product([0, 1], repeat=n - 1):
        bounds = [0] + [i + 1 for i, c in enumerate(cuts) if c] + [n]
        fit = np.empty(n)
        for lo, hi in zip(bounds[:-1], bounds[1:]):
            fit[lo:hi] = np.dot(y[lo:hi], w[lo:hi]) / np.sum(w[lo:hi])
        if np.all(np.diff(fit) >= -1e-14):
            ssq = np.dot(w, (y - fit) ** 2)
            if ssq < best:
                best, best_fit = ssq, fit
    return best_fit


def minmax_slope(x, y, j):
    """max over knots v <= t of min over knots u > t of (y(u) - y(v)) / (u - v), t = x[j]."""
    if j == len(x) - 1:
        j -= 1  # last-knot convention: final segment
    best = -np.inf
    for v in range(j + 1):
        inner = min((y[u] - y[v]) / (x[u] - x[v]) for u in range(j + 1, len(x)))
        best = max(best, inner)
    return best


def random_grid(rng, n, step=False):
    x = np.cumsum(rng.uniform(0.05, 1.0, n))
    kind = rng.integers(3)
    if kind == 0:
        y = rng.normal(size=n)
    elif kind == 1:
        y = (x - x.mean()) ** 2 + 0.3 * rng.normal(size=n)
    else:  # ties and collinear runs
        y = np.round(rng.normal(size=n), 1) + 0.5 * np.round(x)
    return x, y


def minmax_slopes_all(x, y):
    """``minmax_slope`` at every knot, vectorised over the chord-slope matrix."""
    n = len(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (y[None, :] - y[:, None]) / (x[None, :] - x[:, None])
    out = np.empty(n)
    for j in range(n):
        jj = min(j, n - 2)
        out[j] = s[: jj + 1, jj + 1:].min(axis=1).max()
    return out
