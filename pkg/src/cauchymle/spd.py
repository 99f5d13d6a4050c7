"""Geometry of unit-determinant symmetric positive-definite matrices.

The parameter space of the elliptical heavy-tailed families in this package
is the manifold of p x p symmetric positive-definite matrices with
determinant one, carrying the affine-invariant metric

    <V, W>_T = tr(T^-1 V T^-1 W).

Tangent vectors at T are symmetric matrices V with tr(T^-1 V) = 0.  The
geodesic through T with initial velocity V is

    gamma(t) = exp(t/2 T^-1 V)^T  T  exp(t/2 T^-1 V),

evaluated here in the congruence form gamma(t) = L expm(t W) L^T with
T = L L^T (Cholesky) and W = L^-1 V L^-T, so that only a symmetric matrix
is ever exponentiated.  Every geodesic step divides the result by
det^(1/p) to cancel floating-point determinant drift.
"""

import numpy as np
from scipy.linalg import cholesky, eigh, solve_triangular

# Tolerances are artifact-wide conventions, used by check_point/check_tangent.
SYM_RTOL = 1e-12
DET_RTOL = 1e-9
TRACE_RTOL = 1e-10


class NumericRangeError(FloatingPointError):
    """A geometric operation left the representable floating-point range."""


def sym(M):
    """Symmetric part (M + M^T)/2."""
    M = np.asarray(M, dtype=float)
    return 0.5 * (M + M.T)


def _require_square(T, name="matrix"):
    T = np.asarray(T, dtype=float)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ValueError(f"{name} must be square, got shape {T.shape}")
    return T


def _require_same_dim(A, B, what="operands"):
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch between {what}: {A.shape} vs {B.shape}")


def unit_det(T):
    """Rescale an SPD matrix to determinant one."""
    T = _require_square(T)
    sign, logdet = np.linalg.slogdet(T)
    if sign <= 0 or not np.isfinite(logdet):
        raise NumericRangeError("matrix is not positive definite within range")
    return T * np.exp(-logdet / T.shape[0])


def check_point(T):
    """Validate that T is a unit-determinant SPD matrix; return it as float array.

    Raises ValueError on asymmetry, non-positive eigenvalues, or determinant
    away from one beyond the package tolerances.
    """
    T = _require_square(T, "point")
    scale = max(np.abs(T).max(), 1.0)
    if np.abs(T - T.T).max() > SYM_RTOL * scale:
        raise ValueError("point is not symmetric")
    w = np.linalg.eigvalsh(T)
    if w.min() <= 0:
        raise ValueError("point is not positive definite")
    if abs(np.expm1(np.sum(np.log(w)))) > DET_RTOL:
        raise ValueError("point does not have unit determinant")
    return T


def check_tangent(T, V):
    """Validate that V is a tangent vector at T (symmetric, trace-orthogonal to T)."""
    T = _require_square(T, "point")
    V = _require_square(V, "tangent")
    _require_same_dim(T, V, "point and tangent")
    scale = max(np.abs(V).max(), 1.0)
    if np.abs(V - V.T).max() > SYM_RTOL * scale:
        raise ValueError("tangent is not symmetric")
    tr = np.trace(np.linalg.solve(T, V))
    if abs(tr) > TRACE_RTOL * max(norm(T, V), 1e-300):
        raise ValueError("tangent has a nonzero trace component")
    return V


def inner(T, V, W):
    """Affine-invariant inner product tr(T^-1 V T^-1 W) of tangents at T."""
    T = _require_square(T, "point")
    V = _require_square(V, "tangent")
    W = _require_square(W, "tangent")
    _require_same_dim(T, V, "point and first tangent")
    _require_same_dim(T, W, "point and second tangent")
    A = np.linalg.solve(T, V)
    B = np.linalg.solve(T, W)
    return float(np.sum(A * B.T))


def norm(T, V):
    """Riemannian norm of the tangent V at T."""
    return float(np.sqrt(max(inner(T, V, V), 0.0)))


def project_tangent(T, M):
    """Project an arbitrary matrix onto the tangent space at T.

    Symmetrizes M and removes the trace component along T:
    W = sym(M) - (tr(T^-1 sym(M)) / p) T.  Idempotent on valid tangents.
    """
    T = _require_square(T, "point")
    S = sym(M)
    _require_same_dim(T, S, "point and matrix")
    tr = np.trace(np.linalg.solve(T, S))
    return S - (tr / T.shape[0]) * T


def _chol_congruence(L, M):
    # L^-1 M L^-T for lower-triangular L
    A = solve_triangular(L, M, lower=True)
    return solve_triangular(L, A.T, lower=True).T


def _expm_sym(S):
    w, Q = eigh(S)
    with np.errstate(over="ignore"):
        ew = np.exp(w)
    if not np.all(np.isfinite(ew)):
        raise NumericRangeError("matrix exponential overflow")
    return (Q * ew) @ Q.T


def geodesic(T, V, t):
    """Point gamma(t) of the geodesic with gamma(0) = T, gamma'(0) = V.

    The result is renormalized to determinant one.  Raises
    NumericRangeError when t * ||V|| is so large the exponential overflows.
    """
    T = _require_square(T, "point")
    V = _require_square(V, "tangent")
    _require_same_dim(T, V, "point and tangent")
    if t == 0.0:
        return T.copy()
    L = cholesky(T, lower=True)
    W = sym(_chol_congruence(L, V))
    E = _expm_sym(t * W)
    G = sym(L @ E @ L.T)
    if not np.all(np.isfinite(G)):
        raise NumericRangeError("geodesic point overflow")
    return unit_det(G)


def log_map(T1, T2):
    """Tangent V at T1 with geodesic(T1, V, 1) = T2."""
    T1 = _require_square(T1, "point")
    T2 = _require_square(T2, "point")
    _require_same_dim(T1, T2, "points")
    L = cholesky(T1, lower=True)
    M = sym(_chol_congruence(L, T2))
    w, Q = eigh(M)
    if w.min() <= 0:
        raise np.linalg.LinAlgError("relative matrix is not positive definite")
    W = (Q * np.log(w)) @ Q.T
    return sym(L @ W @ L.T)


def distance(T1, T2):
    """Affine-invariant geodesic distance, sqrt(sum log^2 eigenvalues of T1^-1 T2)."""
    T1 = _require_square(T1, "point")
    T2 = _require_square(T2, "point")
    _require_same_dim(T1, T2, "points")
    w = eigh(T2, T1, eigvals_only=True)
    if w.min() <= 0:
        raise np.linalg.LinAlgError("relative matrix is not positive definite")
    return float(np.sqrt(np.sum(np.log(w) ** 2)))


def condition_number(T):
    """Eigenvalue ratio max/min of an SPD matrix."""
    w = np.linalg.eigvalsh(T)
    if w.min() <= 0:
        return np.inf
    return float(w.max() / w.min())
