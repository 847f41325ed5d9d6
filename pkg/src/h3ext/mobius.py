"""Mobius transformations, their half-space extensions, and page rotations.

A `MobiusTransform` acts on the Riemann sphere as ``z -> (az + b)/(cz + d)``
and on the closed upper half-space through its classical isometric
extension (`poincare_extend`).  The module also provides the Mobius
rotation `tau_phi` of R^3 about the unit circle, and the open-book
decomposition of the closed upper half-space into the disk pages
``tau_phi(unit disk)`` for ``phi`` in ``[0, pi]``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

from .geometry import INF, HalfSpacePoint, SpherePoint, is_inf

__all__ = [
    "MobiusTransform",
    "mobius",
    "poincare_extend",
    "preserves_unit_circle",
    "tau_phi",
    "page_decompose",
    "OpenBookCoords",
]

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class MobiusTransform:
    """A fractional-linear map ``z -> (az + b)/(cz + d)``, det-normalized.

    Instances are immutable and stored with ``ad - bc = 1`` (canonical up
    to a global sign).  Build them with the `mobius` factory, which
    normalizes and rejects singular coefficient quadruples.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    def __call__(self, z: SpherePoint) -> SpherePoint:
        if is_inf(z):
            if self.c == 0:
                return INF
            return self.a / self.c
        z = complex(z)
        den = self.c * z + self.d
        if den == 0:
            return INF
        w = (self.a * z + self.b) / den
        if not (math.isfinite(w.real) and math.isfinite(w.imag)):
            return INF
        return w

    def compose(self, other: "MobiusTransform") -> "MobiusTransform":
        """Matrix product: ``self(other(z))``."""
        return mobius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __matmul__(self, other: "MobiusTransform") -> "MobiusTransform":
        return self.compose(other)

    def inverse(self) -> "MobiusTransform":
        return MobiusTransform(self.d, -self.b, -self.c, self.a)

    @staticmethod
    def identity() -> "MobiusTransform":
        return MobiusTransform(1.0 + 0j, 0j, 0j, 1.0 + 0j)


def mobius(a, b, c, d) -> MobiusTransform:
    """Build a det-normalized `MobiusTransform` from arbitrary coefficients."""
    a, b, c, d = complex(a), complex(b), complex(c), complex(d)
    det = a * d - b * c
    scale = max(abs(a), abs(b), abs(c), abs(d))
    if scale == 0.0 or abs(det) <= 1e-14 * scale * scale:
        raise ValueError("singular coefficients: ad - bc is (numerically) zero")
    s = cmath.sqrt(det)
    return MobiusTransform(a / s, b / s, c / s, d / s)


def _abs2(z: complex) -> float:
    return z.real * z.real + z.imag * z.imag


def poincare_extend(gamma: MobiusTransform, p: HalfSpacePoint) -> HalfSpacePoint:
    """Apply the isometric half-space extension of ``gamma`` to ``p``.

    Boundary points (``t = 0`` and `INF`) are routed through the sphere
    action so the restriction to the boundary agrees with it exactly;
    interior points map to interior points.
    """
    if is_inf(p):
        w = gamma(INF)
        return INF if is_inf(w) else (w.real, w.imag, 0.0)
    x, y, t = p
    if t == 0.0:
        w = gamma(complex(x, y))
        return INF if is_inf(w) else (w.real, w.imag, 0.0)
    z = complex(x, y)
    czd = gamma.c * z + gamma.d
    den = _abs2(czd) + _abs2(gamma.c) * t * t
    num = (gamma.a * z + gamma.b) * czd.conjugate() + gamma.a * gamma.c.conjugate() * t * t
    return (num.real / den, num.imag / den, t / den)


def preserves_unit_circle(gamma: MobiusTransform, tol: float = 1e-10) -> bool:
    """True iff ``gamma`` maps the unit circle onto itself.

    Decided by checking that the images of 1, i and -1 lie on the unit
    circle: three points determine the image circle.
    """
    for z in (1.0 + 0j, 1j, -1.0 + 0j):
        w = gamma(z)
        if is_inf(w) or abs(abs(w) - 1.0) > tol:
            return False
    return True


def preserves_unit_disk(gamma: MobiusTransform, tol: float = 1e-10) -> bool:
    """True iff ``gamma`` preserves the unit circle and the unit disk.

    Circle-preserving maps either fix the disk or swap it with its
    exterior; the two cases are told apart by where 0 lands.
    """
    if not preserves_unit_circle(gamma, tol):
        return False
    w = gamma(0j)
    return not is_inf(w) and abs(w) < 1.0


# Center of the inversion realizing tau_phi; the radius is sqrt(2) so the
# inversion sphere passes through the unit circle.
_TAU_CENTER = (1.0, 0.0, 0.0)


def _tau_invert(p: HalfSpacePoint) -> HalfSpacePoint:
    if is_inf(p):
        return _TAU_CENTER
    dx, dy, dz = p[0] - 1.0, p[1], p[2]
    n2 = dx * dx + dy * dy + dz * dz
    if n2 == 0.0:
        return INF
    s = 2.0 / n2
    return (1.0 + s * dx, s * dy, s * dz)


def tau_phi(phi: float, p: HalfSpacePoint) -> HalfSpacePoint:
    """Mobius rotation of R^3 (plus infinity) by angle ``phi`` about the unit circle.

    Realized as ``inv . rho_phi . inv`` where ``inv`` is the inversion
    centered at ``(1, 0, 0)`` with radius sqrt(2) and ``rho_phi`` rotates
    the (x, t) plane.  Every point of the unit circle is fixed; the unit
    disk sweeps through the pages of the upper half-space as ``phi`` runs
    from 0 to pi, with ``tau_pi`` acting on the boundary as ``z -> 1/conj(z)``.

    Note this is a transformation of all of R^3 and may produce points
    with negative height (e.g. for inputs outside the closed unit disk
    when ``phi`` is in ``(0, pi)``).
    """
    phi = math.fmod(phi, _TWO_PI)
    if phi == 0.0:
        return p
    q = _tau_invert(p)
    if is_inf(q):
        rot = INF
    else:
        x, y, t = q
        cphi, sphi = math.cos(phi), math.sin(phi)
        rot = (x * cphi + t * sphi, y, -x * sphi + t * cphi)
    return _tau_invert(rot)


class OpenBookCoords(NamedTuple):
    """Page angle and disk coordinate of a point, so ``tau_phi(phi)(z) = p``."""

    phi: float
    z: complex


_BINDING_TOL = 1e-12


def page_decompose(p: HalfSpacePoint) -> OpenBookCoords:
    """Express ``p`` as ``tau_phi(phi)`` of a closed-unit-disk point.

    Interior points get ``phi`` in ``(0, pi)``; boundary points inside
    the disk get ``phi = 0`` and outside get ``phi = pi`` with the
    reflected coordinate ``1/conj(z)``; points of the unit circle
    (the binding) get the canonical tag ``phi = 0``.

    `INF` is rejected: it is ``tau_pi`` of 0 and callers treat it
    explicitly.
    """
    if is_inf(p):
        raise ValueError("infinity has no canonical page; it is the phi=pi image of 0")
    x, y, t = p
    if t == 0.0:
        z = complex(x, y)
        az = abs(z)
        if abs(az - 1.0) <= _BINDING_TOL:
            return OpenBookCoords(0.0, z)
        if az < 1.0:
            return OpenBookCoords(0.0, z)
        return OpenBookCoords(math.pi, 1.0 / z.conjugate())
    s = x * x + y * y + t * t
    m = (s - 1.0) / (2.0 * t)
    phi = math.atan2(1.0, -m)
    q = tau_phi(-phi, p)
    return OpenBookCoords(phi, complex(q[0], q[1]))
