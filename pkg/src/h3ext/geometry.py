"""Models of hyperbolic 3-space and conversions between them.

Two models are used throughout:

* the closed upper half-space ``{(x, y, t): t >= 0}`` together with a
  single point at infinity, whose boundary plane ``t = 0`` is identified
  with the complex plane via ``z = x + iy``;
* the closed unit ball in R^3, whose boundary sphere is identified with
  the Riemann sphere by stereographic projection from the north pole.

Points of the Riemann sphere are plain ``complex`` values plus the
distinguished value `INF`.  Points of the half-space and ball models are
``(x, y, t)`` triples of floats; the half-space model shares `INF` as its
boundary point at infinity.

The two ball/half-space models are exchanged by a single fixed sphere
inversion (center ``(0, 0, -1)``, radius ``sqrt(2)``), which is an
involution, a hyperbolic isometry, and fixes the equator circle
pointwise.
"""

from __future__ import annotations

import math
from typing import Tuple, Union

__all__ = [
    "INF",
    "Infinity",
    "SpherePoint",
    "Point3",
    "HalfSpacePoint",
    "is_inf",
    "norm3",
    "stereographic_lift",
    "stereographic_project",
    "ball_to_halfspace",
    "halfspace_to_ball",
    "hyperbolic_distance",
    "geodesic_interpolate",
]


class Infinity:
    """The point at infinity of the Riemann sphere / half-space boundary.

    A singleton: compare with ``is`` or ``==`` against `INF`.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (Infinity, ())


INF = Infinity()

SpherePoint = Union[complex, Infinity]
Point3 = Tuple[float, float, float]
HalfSpacePoint = Union[Point3, Infinity]


def is_inf(p) -> bool:
    return isinstance(p, Infinity)


def norm3(p: Point3) -> float:
    x, y, t = p
    return math.sqrt(x * x + y * y + t * t)


def stereographic_lift(z: SpherePoint) -> Point3:
    """Send a point of the Riemann sphere to the unit sphere in R^3.

    0 maps to the south pole ``(0, 0, -1)``, `INF` to the north pole
    ``(0, 0, 1)``, and the unit circle to the equator (1 to ``(1, 0, 0)``).
    """
    if is_inf(z):
        return (0.0, 0.0, 1.0)
    z = complex(z)
    x, y = z.real, z.imag
    n2 = x * x + y * y
    if math.isinf(n2) or math.isinf(x) or math.isinf(y):
        return (0.0, 0.0, 1.0)
    d = n2 + 1.0
    return (2.0 * x / d, 2.0 * y / d, (n2 - 1.0) / d)


def stereographic_project(p: Point3) -> SpherePoint:
    """Inverse of `stereographic_lift`; input must be a unit vector.

    Raises ValueError if the input is off the unit sphere by more than
    1e-9 in norm.
    """
    x, y, zc = p
    n = math.sqrt(x * x + y * y + zc * zc)
    if abs(n - 1.0) > 1e-9:
        raise ValueError(f"not a unit vector (norm {n!r})")
    d = 1.0 - zc
    if d == 0.0:
        return INF
    return complex(x / d, y / d)


# Center and squared radius of the fixed ball <-> half-space inversion.
_IOTA_CENTER = (0.0, 0.0, -1.0)
_IOTA_R2 = 2.0


def _iota(p: HalfSpacePoint) -> HalfSpacePoint:
    """The fixed sphere inversion exchanging the two models (an involution)."""
    if is_inf(p):
        return _IOTA_CENTER
    cx, cy, cz = _IOTA_CENTER
    dx, dy, dz = p[0] - cx, p[1] - cy, p[2] - cz
    n2 = dx * dx + dy * dy + dz * dz
    if n2 == 0.0:
        return INF
    s = _IOTA_R2 / n2
    return (cx + s * dx, cy + s * dy, cz + s * dz)


def ball_to_halfspace(v: HalfSpacePoint) -> HalfSpacePoint:
    """Map a point of the closed unit ball to the closed upper half-space."""
    if not is_inf(v) and norm3(v) > 1.0 + 1e-9:
        raise ValueError(f"not a point of the closed unit ball: {v!r}")
    return _iota(v)


def halfspace_to_ball(p: HalfSpacePoint) -> HalfSpacePoint:
    """Map a point of the closed upper half-space to the closed unit ball."""
    if not is_inf(p) and p[2] < -1e-9:
        raise ValueError(f"not a point of the closed upper half-space: {p!r}")
    return _iota(p)


def hyperbolic_distance(p: HalfSpacePoint, q: HalfSpacePoint) -> float:
    """Hyperbolic distance between two interior points of the half-space.

    Boundary points (``t = 0`` or `INF`) are rejected: the distance to
    an ideal point is infinite.
    """
    if is_inf(p) or is_inf(q):
        raise ValueError("distance to a boundary point is infinite")
    x1, y1, t1 = p
    x2, y2, t2 = q
    if t1 <= 0.0 or t2 <= 0.0:
        raise ValueError("distance requires interior points (t > 0)")
    dx, dy, dt = x1 - x2, y1 - y2, t1 - t2
    arg = 1.0 + (dx * dx + dy * dy + dt * dt) / (2.0 * t1 * t2)
    return math.acosh(arg)


def _to_hyperboloid(p: Point3):
    x, y, t = p
    s = x * x + y * y + t * t
    return ((s + 1.0) / (2.0 * t), x / t, y / t, (s - 1.0) / (2.0 * t))


def _from_hyperboloid(v) -> Point3:
    t = 1.0 / (v[0] - v[3])
    return (v[1] * t, v[2] * t, t)


def geodesic_interpolate(p: HalfSpacePoint, q: HalfSpacePoint, lam: float) -> HalfSpacePoint:
    """Point on the geodesic segment [p, q] at fraction ``lam`` of its length.

    The returned point lies at hyperbolic distance ``lam * d(p, q)``
    from ``p``.  Endpoints must be interior; ``lam`` must lie in [0, 1].

    Interpolation is carried out on the hyperboloid model, which handles
    vertical and circular geodesics uniformly.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"interpolation parameter out of [0, 1]: {lam!r}")
    if lam == 0.0:
        return _check_interior(p)
    if lam == 1.0:
        return _check_interior(q)
    d = hyperbolic_distance(p, q)
    if d == 0.0:
        return p
    a = _to_hyperboloid(p)
    b = _to_hyperboloid(q)
    sd = math.sinh(d)
    w0 = math.sinh((1.0 - lam) * d) / sd
    w1 = math.sinh(lam * d) / sd
    return _from_hyperboloid(tuple(w0 * ai + w1 * bi for ai, bi in zip(a, b)))


def _check_interior(p: HalfSpacePoint) -> Point3:
    if is_inf(p) or p[2] <= 0.0:
        raise ValueError("geodesic endpoints must be interior points")
    return p
