"""Scale-and-location fitting with the conformal heavy-tailed family.

The family on R^n with scale a > 0 and center b in R^n,

    f_n(x | a, b) ~ (1 + |(x - b)/a|^2)^(-n),

is parametrized by points of the hyperbolic upper half-space H^(n+1).  The
normalization constant scales as a^n, so the negative log likelihood is,
up to a parameter-independent constant, n times the Busemann function of
the datum:

    -log f_n(x | a, b) = n log((a^2 + |x - b|^2) / a) + const.

The averaged loss is therefore n times the mean of Busemann functions, a
geodesically convex function with second derivative at most n along
unit-speed geodesics; 1/n is a safe descent step.  The point at infinity
is an admissible datum (Busemann -log a).
"""

import math

import numpy as np

from . import halfspace
from .descent import DescentConfig, minimize_on_halfspace


def _split_data(data, n):
    """Separate finite observations (stacked array) from data at infinity."""
    finite = []
    n_inf = 0
    for x in data:
        if halfspace.is_infinity(x):
            n_inf += 1
        else:
            x = np.atleast_1d(np.asarray(x, dtype=float))
            if x.shape != (n,):
                raise ValueError(f"datum of shape {x.shape}, expected ({n},)")
            finite.append(x)
    F = np.asarray(finite, dtype=float) if finite else np.zeros((0, n))
    if not np.all(np.isfinite(F)):
        raise ValueError("finite observations must have finite coordinates")
    return F, n_inf


def _as_sequence(data):
    if isinstance(data, np.ndarray):
        if data.ndim == 1:
            return [np.atleast_1d(row) for row in data[:, None]]
        return list(data)
    return list(data)


def loss(z, data, n=None):
    """Averaged negative log likelihood, n * mean Busemann, up to a constant."""
    n = z.n if n is None else n
    F, n_inf = _split_data(_as_sequence(data), n)
    N = F.shape[0] + n_inf
    if N == 0:
        raise ValueError("empty dataset")
    total = n_inf * (-math.log(z.a))
    if F.shape[0]:
        q = z.a * z.a + np.sum((z.b - F) ** 2, axis=1)
        total += float(np.sum(np.log(q / z.a)))
    return n * total / N


def grad(z, data, n=None):
    """Riemannian gradient of loss at z; norm at most n (mean of n-scaled unit forces)."""
    n = z.n if n is None else n
    F, n_inf = _split_data(_as_sequence(data), n)
    N = F.shape[0] + n_inf
    if N == 0:
        raise ValueError("empty dataset")
    da = n_inf * (-z.a)
    db = np.zeros(z.n)
    if F.shape[0]:
        diff = z.b - F
        r2 = np.sum(diff ** 2, axis=1)
        q = z.a * z.a + r2
        da += float(np.sum(z.a * (z.a * z.a - r2) / q))
        db += 2.0 * z.a * z.a * np.sum(diff / q[:, None], axis=0)
    return halfspace.HTangent(z, n * da / N, n * db / N)


def fit(data, n, config=None):
    """Fit (a, b) by geodesic gradient descent in H^(n+1) from (1, 0).

    Returns (HPoint, FitReport).  Divergence to the boundary (the scale
    collapsing or exploding past the caps) is reported as degenerate data.
    """
    config = config or DescentConfig()
    seq = _as_sequence(data)
    if not seq:
        raise ValueError("empty dataset")
    if config.standardize:
        F, _ = _split_data(seq, n)
        med = np.median(F, axis=0) if F.shape[0] else np.zeros(n)
        mad = float(np.median(np.abs(F - med))) if F.shape[0] else 1.0
        mad = mad if mad > 0 else 1.0
        scaled = [x if halfspace.is_infinity(x) else (np.asarray(x) - med) / mad
                  for x in seq]
        inner_config = DescentConfig(config.step_policy, config.tol,
                                     config.max_iters, standardize=False)
        z, report = fit(scaled, n, inner_config)
        return halfspace.HPoint(mad * z.a, med + mad * z.b), report
    F, n_inf = _split_data(seq, n)
    z0 = halfspace.HPoint(1.0, np.zeros(n))

    def loss_fn(z):
        total = n_inf * (-math.log(z.a))
        if F.shape[0]:
            q = z.a * z.a + np.sum((z.b - F) ** 2, axis=1)
            total += float(np.sum(np.log(q / z.a)))
        return n * total / (F.shape[0] + n_inf)

    def grad_fn(z):
        da = n_inf * (-z.a)
        db = np.zeros(n)
        if F.shape[0]:
            diff = z.b - F
            r2 = np.sum(diff ** 2, axis=1)
            q = z.a * z.a + r2
            da += float(np.sum(z.a * (z.a * z.a - r2) / q))
            db += 2.0 * z.a * z.a * np.sum(diff / q[:, None], axis=0)
        scale = n / (F.shape[0] + n_inf)
        return halfspace.HTangent(z, scale * da, scale * db)

    return minimize_on_halfspace(z0, loss_fn, grad_fn, safe_step=1.0 / n,
                                 config=config)
