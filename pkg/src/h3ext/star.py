"""A commutative product on the closed upper half-space.

The extended exponential `exp_hat` maps log coordinates ``(x, y, t)``
with ``t >= 0`` onto the half-space minus the vertical axis:

    exp_hat(x, y, t) = e^x (sech t cos y, sech t sin y, tanh t)

It restricts to the complex exponential on the boundary and is periodic
in ``y`` with period 2 pi.  Pushing addition forward through it yields
the `star_product`, a commutative, associative multiplication with unit
``(1, 0, 0)`` whose boundary restriction is complex multiplication and
whose norms multiply.  Points of the vertical axis multiply by the norm
rule ``axis(s) * p = axis(s * |p|)``, the continuous extension of the
off-axis product.

Squaring in this product is the quadratic map `q_hat`, whose boundary
restriction is ``z -> z^2`` bit for bit; translating it gives the family
`q_hat_c` extending ``z -> z^2 + c``.  `product_extension` extends an
arbitrary rational map by star-multiplying half-space extensions of its
Mobius factors.
"""

from __future__ import annotations

import math
from typing import Callable, Tuple

from .geometry import INF, HalfSpacePoint, Point3, SpherePoint, is_inf, norm3
from .maps import MobiusFactorization, RationalMap, eval_rational
from .mobius import poincare_extend

__all__ = [
    "exp_hat",
    "exp_hat_inverse",
    "star_product",
    "q_hat",
    "q_hat_c",
    "product_extension",
    "vertical_extension",
    "AXIS_REL_TOL",
]

# Points whose horizontal part is below this fraction of their norm are
# treated as lying on the vertical axis: the log-coordinate height
# diverges there and the product degrades to the axis rule anyway.
AXIS_REL_TOL = 1e-12

ExpCoords = Tuple[float, float, float]


def exp_hat(c: ExpCoords) -> Point3:
    """Evaluate the extended exponential at log coordinates ``(x, y, t)``.

    Requires ``t >= 0``; the result has Euclidean norm ``e^x`` and lies
    on the boundary exactly when ``t == 0``.
    """
    x, y, t = c
    if t < 0.0:
        raise ValueError(f"log-coordinate height must be nonnegative, got {t!r}")
    ex = math.exp(x)
    sech = 1.0 / math.cosh(t)
    return (ex * sech * math.cos(y), ex * sech * math.sin(y), ex * math.tanh(t))


def exp_hat_inverse(p: HalfSpacePoint) -> ExpCoords:
    """Principal-branch log coordinates of an off-axis half-space point.

    The angular coordinate is ``atan2`` of the horizontal part, in
    ``(-pi, pi]``.  Points of the closed vertical axis and `INF` have no
    preimage and are rejected.
    """
    if is_inf(p):
        raise ValueError("infinity is not in the image of the extended exponential")
    x, y, t = p
    if x == 0.0 and y == 0.0:
        raise ValueError("the vertical axis is not in the image of the extended exponential")
    r = math.sqrt(x * x + y * y + t * t)
    ratio = t / r
    if ratio >= 1.0:
        ratio = math.nextafter(1.0, 0.0)
    return (math.log(r), math.atan2(y, x), math.atanh(ratio))


def _is_zero(p: Point3) -> bool:
    return p[0] == 0.0 and p[1] == 0.0 and p[2] == 0.0


def _on_axis(p: Point3) -> bool:
    h = math.hypot(p[0], p[1])
    return h <= AXIS_REL_TOL * norm3(p)


def star_product(a: HalfSpacePoint, b: HalfSpacePoint) -> HalfSpacePoint:
    """The commutative product of two points of the closed half-space.

    Case split: zero and infinity are absorbing (their mutual product is
    undefined and raises); an axis operand yields the axis point at the
    product of the norms; two boundary points multiply as complex
    numbers; everything else goes through the extended exponential.
    """
    a_inf, b_inf = is_inf(a), is_inf(b)
    a_zero = (not a_inf) and _is_zero(a)
    b_zero = (not b_inf) and _is_zero(b)
    if (a_zero and b_inf) or (a_inf and b_zero):
        raise ValueError("0 * infinity is undefined for the half-space product")
    if a_zero or b_zero:
        return (0.0, 0.0, 0.0)
    if a_inf or b_inf:
        return INF
    if _on_axis(a) or _on_axis(b):
        return (0.0, 0.0, norm3(a) * norm3(b))
    if a[2] == 0.0 and b[2] == 0.0:
        w = complex(a[0], a[1]) * complex(b[0], b[1])
        return (w.real, w.imag, 0.0)
    xa, ya, ta = exp_hat_inverse(a)
    xb, yb, tb = exp_hat_inverse(b)
    return exp_hat((xa + xb, ya + yb, ta + tb))


def q_hat(p: HalfSpacePoint) -> HalfSpacePoint:
    """The star-square ``p * p`` in closed form (total on the half-space).

    With ``s = x^2 + y^2 + t^2`` and ``A = s / (s + t^2)`` the value is
    ``(A (x^2 - y^2), 2 A x y, 2 A t sqrt(s))``.  The evaluation order
    makes ``A`` exactly 1 on the boundary, so boundary orbits coincide
    bit for bit with the classical complex squaring.
    """
    if is_inf(p):
        return INF
    x, y, t = p
    s = x * x + y * y + t * t
    if s == 0.0:
        return (0.0, 0.0, 0.0)
    if math.isinf(s):
        return INF
    A = s / (s + t * t)
    out = (A * (x * x - y * y), A * (2.0 * (x * y)), A * (2.0 * t * math.sqrt(s)))
    if not all(math.isfinite(v) for v in out):
        return INF
    return out


def q_hat_c(c: complex, p: HalfSpacePoint) -> HalfSpacePoint:
    """The star-square followed by horizontal translation by ``c``."""
    q = q_hat(p)
    if is_inf(q):
        return INF
    c = complex(c)
    return (q[0] + c.real, q[1] + c.imag, q[2])


def product_extension(factorization: MobiusFactorization, p: HalfSpacePoint) -> HalfSpacePoint:
    """Star-product of the half-space extensions of the Mobius factors at ``p``.

    Folds left in the stored factor order (the product is commutative, so
    the order only affects rounding).  Restricted to the boundary this is
    the original rational map; a ``0 * infinity`` collision (possible only
    for non-reduced inputs) raises.
    """
    factors = factorization.factors
    acc = poincare_extend(factors[0].transform, p)
    for f in factors[1:]:
        acc = star_product(acc, poincare_extend(f.transform, p))
    return acc


def vertical_extension(
    f: Callable[[SpherePoint], SpherePoint] | RationalMap,
    lam: float,
    p: HalfSpacePoint,
) -> HalfSpacePoint:
    """Extend a boundary self-map by scaling heights: ``(z, t) -> (f(z), lam t)``."""
    if lam <= 0.0:
        raise ValueError(f"height factor must be positive, got {lam!r}")
    if is_inf(p):
        return INF
    x, y, t = p
    fn = (lambda z: eval_rational(f, z)) if isinstance(f, RationalMap) else f
    w = fn(complex(x, y))
    if is_inf(w):
        return INF
    return (w.real, w.imag, lam * t)
