"""Multivariate Cauchy maximum likelihood on the SPD determinant-one manifold.

The elliptical Cauchy density on R^n, written through the homogeneous lift
xt = (x, 1) in R^(n+1), is

    f_n(x | T) ~ (xt^T T xt)^(-(n+1)/2),

with T symmetric positive definite of determinant one.  Up to constants
the averaged negative log likelihood is

    loss(T) = (1/N) sum_i log(xt_i^T T xt_i),

a geodesically convex function whose Riemannian gradient is

    grad(T) = -T/(n+1) + (1/N) T (sum_i xt_i xt_i^T / (xt_i^T T xt_i)) T.

Each datum pulls the parameter along the geodesic toward its boundary
point with constant force sqrt(n/(n+1)); the MLE is the point where these
forces balance.  A unit step of geodesic descent on the averaged loss is
provably monotone; (n+3)/2 is a faster dimension-informed trial step.
"""

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import halfspace, spd
from .descent import (DescentConfig, FitReport, FitStatus, minimize_on_halfspace,
                      minimize_on_spd)

GENERAL_POSITION_EXACT_CAP = 20
# normalized true scalar multiples agree to ~machine eps; genuinely distinct
# observations in awkward scaling stay well above this
PROJECTIVE_DUP_TOL = 1e-12


@dataclass(frozen=True)
class CauchyParams:
    """Location/scatter parametrization (b, S) of the elliptical family.

    The scatter is identified only up to scale; this one is the
    representative derived from the determinant-one matrix parameter.
    """

    location: np.ndarray
    scatter: np.ndarray
    convention: str = "unit-determinant"


def lift(x):
    """Append a final component 1 to each observation: (N, n) -> (N, n+1)."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise ValueError(f"expected a 2-d array of observations, got shape {x.shape}")
    return np.hstack([x, np.ones((x.shape[0], 1))])


def lift_univariate(values):
    """Lift reals and the point at infinity to homogeneous pairs.

    x -> (x, 1); the point at infinity -> (1, 0).
    """
    rows = []
    for v in values:
        if halfspace.is_infinity(v):
            rows.append((1.0, 0.0))
        else:
            rows.append((float(v), 1.0))
    if not rows:
        raise ValueError("empty dataset")
    return np.asarray(rows, dtype=float)


def _check_lifted(X):
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] < 2:
        raise ValueError(f"lifted data must be (N, n+1) with n >= 1, got {X.shape}")
    if X.shape[0] == 0:
        raise ValueError("empty dataset")
    if not np.all(np.isfinite(X)):
        raise ValueError("lifted data must be finite")
    if np.any(np.all(X == 0.0, axis=1)):
        raise ValueError("lifted data contains a zero vector")
    return X


def _quad_forms(T, X):
    q = np.einsum("ij,jk,ik->i", X, T, X)
    if np.any(q <= 0):
        raise ValueError("non-positive quadratic form; parameter is not SPD")
    return q


def loss(T, lifted):
    """Averaged negative log likelihood up to a data-independent constant."""
    X = _check_lifted(lifted)
    T = np.asarray(T, dtype=float)
    return float(np.mean(np.log(_quad_forms(T, X))))


def loss_grad(T, lifted):
    """Riemannian gradient of loss at T, a valid tangent vector."""
    X = _check_lifted(lifted)
    T = np.asarray(T, dtype=float)
    p = T.shape[0]
    q = _quad_forms(T, X)
    M = (X / q[:, None]).T @ X / X.shape[0]
    G = T @ M @ T - T / p
    return spd.project_tangent(T, G)


def datum_grad(T, xt):
    """Gradient of log(xt^T T xt); its norm is sqrt(n/(n+1)) for every T, xt."""
    return loss_grad(T, np.asarray(xt, dtype=float)[None, :])


def step_size(n, policy):
    """Descent step for dimension n: safe -> 1, improved/backtracking -> (n+3)/2."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if policy == "safe":
        return 1.0
    if policy in ("improved", "backtracking"):
        return (n + 3) / 2.0
    raise ValueError(f"unknown step policy {policy!r}")


def check_general_position(lifted, n, exact_cap=GENERAL_POSITION_EXACT_CAP):
    """True when N >= n+2 and no n+1 lifted data vectors are linearly dependent.

    The subset condition is checked exactly only for N <= exact_cap.  Above
    the cap the answer is a heuristic built from cheap necessary conditions:
    the data matrix must have full column rank, and no projective point
    (up to sign and scale) may carry half the sample or more.  Large
    continuous samples collide at float resolution with appreciable
    probability, and such low-multiplicity repeats do not endanger the
    existence or uniqueness of the optimum; a dominant atom does.
    """
    X = _check_lifted(lifted)
    N = X.shape[0]
    if X.shape[1] != n + 1:
        raise ValueError(f"lifted data has {X.shape[1]} columns, expected {n + 1}")
    if N < n + 2:
        return False
    if N <= exact_cap:
        for idx in combinations(range(N), n + 1):
            if np.linalg.matrix_rank(X[list(idx)]) < n + 1:
                return False
        return True
    if np.linalg.matrix_rank(X) < n + 1:
        return False
    Y = X / np.linalg.norm(X, axis=1)[:, None]
    lead = np.argmax(np.abs(Y), axis=1)
    signs = np.sign(Y[np.arange(N), lead])
    Y = Y * signs[:, None]
    order = np.lexsort(Y.T)
    dup = np.all(np.abs(np.diff(Y[order], axis=0)) < PROJECTIVE_DUP_TOL,
                 axis=1)
    if not dup.any():
        return True
    # longest run of consecutive near-equal rows ~ largest atom multiplicity
    edges = np.diff(np.concatenate(([0], dup.astype(np.int8), [0])))
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1)
    largest = int((ends - starts).max()) + 1
    return largest < (N + 1) // 2


def _finite_rows(X):
    # rows with nonzero final lift component correspond to finite observations
    mask = X[:, -1] != 0.0
    return X[mask, :-1] / X[mask, -1][:, None]


def _standardizing_map(X):
    """Affine lift transform from coordinate-wise median/MAD of the finite rows."""
    finite = _finite_rows(X)
    n = X.shape[1] - 1
    if finite.shape[0] == 0:
        return np.eye(n + 1)
    med = np.median(finite, axis=0)
    mad = np.median(np.abs(finite - med), axis=0)
    mad = np.where(mad > 0, mad, 1.0)
    A = np.zeros((n + 1, n + 1))
    A[:n, :n] = np.diag(1.0 / mad)
    A[:n, n] = -med / mad
    A[n, n] = 1.0
    return A


def fit(lifted, config=None):
    """Maximum-likelihood fit by geodesic gradient descent from the identity.

    Returns (T, FitReport).  Datasets failing the general-position check
    come back immediately with status DEGENERATE_DATA; descent runs that
    drift to the manifold boundary (huge condition number) are flagged the
    same way.
    """
    X = _check_lifted(lifted)
    config = config or DescentConfig()
    n = X.shape[1] - 1
    if not check_general_position(X, n):
        T0 = np.eye(n + 1)
        report = FitReport(FitStatus.DEGENERATE_DATA, 0, [loss(T0, X)], [], 0.0)
        return T0, report
    if config.standardize:
        A = _standardizing_map(X)
        Xs = X @ A.T
        T_std, report = _fit_core(Xs, n, config)
        return spd.unit_det(A.T @ T_std @ A), report
    return _fit_core(X, n, config)


def _fit_core(X, n, config):
    return minimize_on_spd(
        np.eye(n + 1),
        lambda T: loss(T, X),
        lambda T: loss_grad(T, X),
        improved_step=step_size(n, "improved"),
        config=config,
    )


def to_params(T):
    """Convert the matrix parameter to location/scatter (b, S).

    With T partitioned as [[A, c], [c^T, d]]: b = -A^-1 c and
    S = (d - b^T A b) A^-1.
    """
    T = np.asarray(T, dtype=float)
    n = T.shape[0] - 1
    A = T[:n, :n]
    c = T[:n, n]
    d = T[n, n]
    b = -np.linalg.solve(A, c)
    kappa = d - float(b @ A @ b)
    if kappa <= 0:
        raise ValueError("matrix parameter has non-positive scatter scale")
    S = kappa * np.linalg.inv(A)
    return CauchyParams(location=b, scatter=spd.sym(S))


def from_params(params):
    """Inverse of to_params, rescaled to determinant one."""
    b = np.asarray(params.location, dtype=float)
    S = np.asarray(params.scatter, dtype=float)
    n = b.shape[0]
    Sinv = np.linalg.inv(S)
    T = np.zeros((n + 1, n + 1))
    T[:n, :n] = Sinv
    T[:n, n] = -Sinv @ b
    T[n, :n] = T[:n, n]
    T[n, n] = 1.0 + float(b @ Sinv @ b)
    return spd.unit_det(spd.sym(T))


def location_scale(T):
    """Univariate (u, v): center u and width v = sqrt(scatter) for n = 1."""
    params = to_params(T)
    if params.location.shape != (1,):
        raise ValueError("location_scale applies to the univariate family only")
    return float(params.location[0]), float(math.sqrt(params.scatter[0, 0]))


def fit_univariate(data, config=None):
    """Univariate fit run directly on the hyperbolic upper half-plane.

    data is a sequence of reals, possibly containing the point at infinity.
    Each datum pulls with a unit force along the geodesic toward it; descent
    follows the mean force with step 1, which is safe for the averaged loss.
    Returns ((u, v), FitReport) and agrees with fit + to_params.
    """
    config = config or DescentConfig()
    points = [halfspace.INFINITY if halfspace.is_infinity(v) else float(v)
              for v in data]
    if not points:
        raise ValueError("empty dataset")
    X = lift_univariate(points)
    if not check_general_position(X, 1):
        report = FitReport(FitStatus.DEGENERATE_DATA, 0,
                           [loss(np.eye(2), X)], [], 0.0)
        return (0.0, 1.0), report
    if config.standardize:
        finite = np.array([v for v in points if not halfspace.is_infinity(v)])
        med = float(np.median(finite)) if finite.size else 0.0
        mad = float(np.median(np.abs(finite - med))) if finite.size else 1.0
        mad = mad if mad > 0 else 1.0
        scaled = [v if halfspace.is_infinity(v) else (v - med) / mad
                  for v in points]
        inner_config = DescentConfig(config.step_policy, config.tol,
                                     config.max_iters, standardize=False)
        (u, v), report = fit_univariate(scaled, inner_config)
        return (med + mad * u, mad * v), report

    finite = np.array([v for v in points if not halfspace.is_infinity(v)])
    n_inf = len(points) - finite.size
    N = len(points)

    def loss_fn(z):
        total = n_inf * (-math.log(z.a))
        if finite.size:
            q = z.a * z.a + (z.b[0] - finite) ** 2
            total += float(np.sum(np.log(q / z.a)))
        return total / N

    def grad_fn(z):
        da = n_inf * (-z.a)
        db = 0.0
        if finite.size:
            diff = z.b[0] - finite
            q = z.a * z.a + diff ** 2
            da += float(np.sum(z.a * (z.a * z.a - diff ** 2) / q))
            db += float(np.sum(2.0 * z.a * z.a * diff / q))
        return halfspace.HTangent(z, da / N, np.array([db / N]))

    z0 = halfspace.HPoint(1.0, np.zeros(1))
    z, report = minimize_on_halfspace(z0, loss_fn, grad_fn, safe_step=1.0,
                                      config=config)
    return (float(z.b[0]), float(z.a)), report
