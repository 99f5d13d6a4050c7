"""Hyperbolic upper half-space geometry with Busemann functions.

Points of the half-space model of H^(n+1) are pairs (a, b) with scale
a > 0 and center b in R^n; the metric is ds^2 = (da^2 + |db|^2) / a^2.
For n = 1 this is the upper half-plane with z = b + i a.  Boundary points
are vectors x in R^n together with a distinguished point at infinity.

The Busemann function of a boundary point x, normalized to unit Riemannian
gradient and to vanish at (a, b) = (1, x), has the closed forms

    B_x(a, b)   = log((a^2 + |b - x|^2) / a)        for finite x,
    B_inf(a, b) = -log a.

Geodesics are computed by reducing to the 2-plane spanned by the vertical
direction and the horizontal displacement, an isometrically embedded copy
of H^2, where they are vertical rays or semicircles with feet on the
boundary.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .spd import NumericRangeError


class _Infinity:
    """The distinguished boundary point at infinity (a singleton)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Infinity"


INFINITY = _Infinity()


def is_infinity(x):
    return isinstance(x, _Infinity)


def _as_center(b):
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if b.ndim != 1:
        raise ValueError(f"center must be a vector, got shape {b.shape}")
    return b


@dataclass(frozen=True)
class HPoint:
    """Point (a, b) of the upper half-space: scale a > 0, center b in R^n."""

    a: float
    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", _as_center(self.b))
        if not (self.a > 0 and math.isfinite(self.a)):
            raise ValueError(f"scale must be positive and finite, got {self.a}")
        if not np.all(np.isfinite(self.b)):
            raise ValueError("center must be finite")

    @property
    def n(self):
        return self.b.shape[0]


@dataclass(frozen=True)
class HTangent:
    """Tangent vector (da, db) at a half-space point."""

    base: HPoint
    da: float
    db: np.ndarray = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "da", float(self.da))
        db = np.zeros(self.base.n) if self.db is None else _as_center(self.db)
        object.__setattr__(self, "db", db)
        if db.shape != self.base.b.shape:
            raise ValueError("tangent center component has wrong dimension")
        if not (math.isfinite(self.da) and np.all(np.isfinite(db))):
            raise ValueError("tangent components must be finite")

    def norm(self):
        """Riemannian norm: Euclidean norm of (da, db) divided by the scale."""
        return math.hypot(self.da, float(np.linalg.norm(self.db))) / self.base.a

    def scaled(self, c):
        return HTangent(self.base, c * self.da, c * self.db)


def _boundary_vector(x, n):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (n,):
        raise ValueError(f"boundary point has dimension {x.shape}, expected ({n},)")
    if not np.all(np.isfinite(x)):
        raise ValueError("finite boundary point must have finite coordinates")
    return x


def busemann(x, z):
    """Busemann function of the boundary point x evaluated at z."""
    if is_infinity(x):
        return -math.log(z.a)
    x = _boundary_vector(x, z.n)
    diff = z.b - x
    q = (z.a * z.a + float(diff @ diff)) / z.a
    if q <= 0.0 or not math.isfinite(q):
        raise NumericRangeError("Busemann evaluation left the numeric range")
    return math.log(q)


def busemann_grad(x, z):
    """Riemannian gradient of the Busemann function of x at z.

    It is the unit vector tangent to the geodesic from x through z, pointing
    away from x.  The Euclidean gradient is multiplied by a^2 (the inverse
    of the conformal metric).
    """
    if is_infinity(x):
        return HTangent(z, -z.a, np.zeros(z.n))
    x = _boundary_vector(x, z.n)
    diff = z.b - x
    r2 = float(diff @ diff)
    q = z.a * z.a + r2
    da = z.a * (z.a * z.a - r2) / q
    db = (2.0 * z.a * z.a / q) * diff
    return HTangent(z, da, db)


def distance(z, w):
    """Hyperbolic distance, via 2 asinh of half the Euclidean gap over sqrt(a a')."""
    if z.n != w.n:
        raise ValueError("points live in half-spaces of different dimension")
    gap2 = float(np.sum((z.b - w.b) ** 2)) + (z.a - w.a) ** 2
    prod = z.a * w.a
    if prod == 0.0 or gap2 / prod == math.inf:
        raise NumericRangeError("distance evaluation left the numeric range")
    return 2.0 * math.asinh(0.5 * math.sqrt(gap2 / prod))


def exp_map(z, v, t=1.0):
    """Constant-speed geodesic from z with initial velocity v, evaluated at t.

    Satisfies d(z, exp_map(z, v, t)) = |t| ||v||.  Raises NumericRangeError
    when the point degenerates to the boundary in floating point (extreme t).
    """
    if v.db.shape != z.b.shape:
        raise ValueError("tangent dimension does not match the point")
    vx = float(np.linalg.norm(v.db))
    vy = v.da
    y0 = z.a
    speed = math.hypot(vx, vy) / y0
    if speed * t == 0.0:
        return z
    if vx == 0.0:
        try:
            a = y0 * math.exp(t * vy / y0)
        except OverflowError:
            raise NumericRangeError("geodesic point left the numeric range")
        if a == 0.0 or not math.isfinite(a):
            raise NumericRangeError("geodesic point left the numeric range")
        return HPoint(a, z.b.copy())
    u = v.db / vx
    # Semicircle with center c on the boundary; stable forms avoid atanh of
    # arguments near +-1 when the circle is nearly a vertical line (huge c).
    c = y0 * vy / vx
    if not math.isfinite(c):
        raise NumericRangeError("geodesic point left the numeric range")
    rho = math.hypot(c, y0)
    t0 = -c / rho  # tanh of the initial arclength parameter
    ds = speed * t
    if abs(ds) > 700.0:  # cosh overflow: the point degenerates to the boundary
        raise NumericRangeError("geodesic point left the numeric range")
    td = math.tanh(ds)
    den = 1.0 + t0 * td
    if den <= 0.0:  # strictly positive in exact arithmetic
        raise NumericRangeError("geodesic point left the numeric range")
    xt = td * y0 * y0 / (rho * den)
    at = y0 / (math.cosh(ds) * den)
    if at <= 0.0 or not (math.isfinite(at) and math.isfinite(xt)):
        raise NumericRangeError("geodesic point left the numeric range")
    return HPoint(at, z.b + xt * u)


def log_map(z, w):
    """Tangent v at z with exp_map(z, v, 1) = w and ||v|| = d(z, w)."""
    if z.n != w.n:
        raise ValueError("points live in half-spaces of different dimension")
    d = distance(z, w)
    if d == 0.0:
        return HTangent(z, 0.0, np.zeros(z.n))
    diff = w.b - z.b
    s = float(np.linalg.norm(diff))
    if s == 0.0:
        return HTangent(z, z.a * math.log(w.a / z.a), np.zeros(z.n))
    u = diff / s
    c = (s * s + w.a * w.a - z.a * z.a) / (2.0 * s)
    rho = math.hypot(c, z.a)
    # Euclidean unit direction at z toward w along the connecting semicircle.
    ex = z.a / rho
    ey = c / rho
    return HTangent(z, d * z.a * ey, (d * z.a * ex) * u)
