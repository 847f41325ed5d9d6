"""Extension constructions beyond the star-product, and their comparison.

Four ways of extending a rational map of the sphere over the interior of
hyperbolic 3-space live here:

* `radial_extension`: conjugate the boundary action by the radial
  dilations of the closed ball, so every sphere of radius ``r`` maps to
  itself by a rescaled copy of the map.
* `open_book_extension`: decompose the half-space into disk pages
  rotating about the unit circle and apply the map page by page.
  Applies to maps preserving the closed unit disk (Blaschke products)
  and, more generally, to analytic maps sending the disk into itself.
* `visual_extension`: the Euclidean barycenter of the map's pushforward
  of the visual measure, realized as a finite spherical quadrature
  pushed around by ball Mobius translations.
* `conformal_natural_extension`: same pushforward, but resolved with the
  Mobius-equivariant conformal barycenter instead of the Euclidean mean.

`naturality_deviation` measures how far an extension method is from
commuting with Mobius pre/post-composition, and `homotopy_interpolate`
slides between two extension values along the geodesic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from .geometry import (
    INF,
    HalfSpacePoint,
    Point3,
    SpherePoint,
    ball_to_halfspace,
    geodesic_interpolate,
    halfspace_to_ball,
    hyperbolic_distance,
    is_inf,
    stereographic_lift,
    stereographic_project,
)
from .maps import (
    BlaschkeProduct,
    RationalMap,
    blaschke_to_rational,
    derivative_value,
    eval_rational,
    factor_rational,
    mobius_to_rational,
    polynomial_roots,
)
from .mobius import MobiusTransform, page_decompose, poincare_extend, tau_phi
from .star import product_extension, q_hat_c, vertical_extension

__all__ = [
    "SphericalQuadrature",
    "fibonacci_quadrature",
    "ring_quadrature",
    "ball_translate",
    "radial_extension",
    "open_book_extension",
    "visual_extension",
    "conformal_barycenter",
    "conformal_natural_extension",
    "BarycenterError",
    "ExtensionMethod",
    "extension_operator",
    "ball_poincare_extend",
    "naturality_deviation",
    "homotopy_interpolate",
]


@dataclass(frozen=True)
class SphericalQuadrature:
    """Equal-weight nodes on the unit sphere (weights ``1/N`` implied)."""

    nodes: np.ndarray
    rule: str = "explicit"
    seed: int = 0

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] != 3:
            raise ValueError("nodes must be an (N, 3) array")
        norms = np.linalg.norm(nodes, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ValueError("all nodes must be unit vectors")
        object.__setattr__(self, "nodes", nodes)

    def __len__(self) -> int:
        return len(self.nodes)


def fibonacci_quadrature(n: int = 2048, seed: int = 0) -> SphericalQuadrature:
    """Antipodally symmetrized Fibonacci-sphere nodes.

    ``n`` must be even: half the nodes come from the golden-angle spiral
    and the other half are their antipodes, which makes the node set
    centrally symmetric so its Euclidean and conformal barycenters vanish
    to rounding.  The seed only rotates the spiral phase.
    """
    if n < 2 or n % 2:
        raise ValueError("node count must be even and >= 2")
    m = n // 2
    k = np.arange(m)
    z = 1.0 - (2.0 * k + 1.0) / m
    rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    golden = math.pi * (3.0 - math.sqrt(5.0))
    phase = 0.618 * seed
    ang = golden * k + phase
    half = np.column_stack([rho * np.cos(ang), rho * np.sin(ang), z])
    half /= np.linalg.norm(half, axis=1)[:, None]
    nodes = np.empty((n, 3), dtype=float)
    nodes[0::2] = half
    nodes[1::2] = -half
    return SphericalQuadrature(nodes, rule="fibonacci-antipodal", seed=seed)


def ring_quadrature(n_rings: int = 24, per_ring: int = 48) -> SphericalQuadrature:
    """Nodes on rings of constant latitude with equally spaced azimuths.

    Exact azimuthal balance makes low-order rotational symmetries of a
    pushforward cancel to rounding; used where axis symmetry matters.
    """
    zs = (np.arange(n_rings) + 0.5) / n_rings * 2.0 - 1.0
    nodes = []
    for z in zs:
        rho = math.sqrt(max(0.0, 1.0 - z * z))
        ang = 2.0 * np.pi * np.arange(per_ring) / per_ring
        ring = np.column_stack([rho * np.cos(ang), rho * np.sin(ang), np.full(per_ring, z)])
        nodes.append(ring)
    nodes = np.vstack(nodes)
    nodes /= np.linalg.norm(nodes, axis=1)[:, None]
    return SphericalQuadrature(nodes, rule="rings")


def ball_translate(a: Sequence[float], pts: np.ndarray) -> np.ndarray:
    """Mobius translation of the closed unit ball sending ``a`` to the origin.

    Vectorized over an ``(N, 3)`` array of points.  Its inverse is the
    translation by ``-a``.
    """
    a = np.asarray(a, dtype=float)
    pts = np.asarray(pts, dtype=float)
    single = pts.ndim == 1
    if single:
        pts = pts[None, :]
    a2 = float(np.dot(a, a))
    if a2 >= 1.0:
        raise ValueError("translation center must lie in the open ball")
    diff = pts - a
    d2 = np.einsum("ij,ij->i", diff, diff)
    p2 = np.einsum("ij,ij->i", pts, pts)
    denom = 1.0 - 2.0 * pts @ a + p2 * a2
    out = ((1.0 - a2) * diff - d2[:, None] * a) / denom[:, None]
    return out[0] if single else out


def radial_extension(r: RationalMap, v: Point3) -> Point3:
    """Extend ``r`` over the closed ball sphere by sphere.

    The origin is fixed; any other point maps to ``|v|`` times the image
    of its radial projection under the boundary action, so Euclidean
    norms are preserved exactly up to rounding.
    """
    x, y, z = v
    n = math.sqrt(x * x + y * y + z * z)
    if n == 0.0:
        return (0.0, 0.0, 0.0)
    if n > 1.0 + 1e-9:
        raise ValueError(f"not a point of the closed ball: {v!r}")
    u = (x / n, y / n, z / n)
    un = math.sqrt(u[0] ** 2 + u[1] ** 2 + u[2] ** 2)
    u = (u[0] / un, u[1] / un, u[2] / un)
    w = eval_rational(r, stereographic_project(u))
    lx, ly, lz = stereographic_lift(w)
    return (n * lx, n * ly, n * lz)


def _disk_action(b) -> Callable[[complex], SpherePoint]:
    if isinstance(b, BlaschkeProduct):
        return b
    if isinstance(b, RationalMap):
        for k in range(8):
            z = complex(math.cos(2 * math.pi * (k + 0.3) / 8), math.sin(2 * math.pi * (k + 0.3) / 8))
            w = eval_rational(b, z)
            if is_inf(w) or abs(abs(w) - 1.0) > 1e-8:
                raise ValueError("rational map does not preserve the unit circle")
        w0 = eval_rational(b, 0j)
        if is_inf(w0) or abs(w0) >= 1.0:
            raise ValueError("rational map preserves the circle but swaps the disk with its exterior")
        return lambda z: eval_rational(b, z)
    if callable(b):
        return b
    raise TypeError(f"unsupported map for the open-book extension: {b!r}")


def open_book_extension(b, p: HalfSpacePoint) -> HalfSpacePoint:
    """Apply a disk self-map page by page over the open-book decomposition.

    ``b`` may be a `BlaschkeProduct`, a circle-preserving disk-preserving
    `RationalMap`, or any callable sending the closed unit disk into
    itself.  The input point is written as ``tau_phi(z)`` with ``z`` in
    the closed disk, and maps to ``tau_phi(b(z))``; the page angle is
    preserved.  Infinity is the angle-pi image of 0 and maps accordingly.
    """
    act = _disk_action(b)
    if is_inf(p):
        w = act(0j)
        if is_inf(w):
            return INF
        return tau_phi(math.pi, (w.real, w.imag, 0.0))
    phi, z = page_decompose(p)
    az = abs(z)
    if az > 1.0:
        z /= az
    w = act(z)
    if is_inf(w):
        return INF
    out = tau_phi(phi, (w.real, w.imag, 0.0))
    if is_inf(out):
        return INF
    x, y, t = out
    return (x, y, max(t, 0.0))


def _lifted_action(r) -> Callable[[np.ndarray], np.ndarray]:
    fn = r if callable(r) and not isinstance(r, RationalMap) else (lambda z: eval_rational(r, z))

    def act(nodes: np.ndarray) -> np.ndarray:
        out = np.empty_like(nodes)
        for i, node in enumerate(nodes):
            out[i] = stereographic_lift(fn(stereographic_project(tuple(node))))
        return out

    return act


def visual_extension(r, x: Point3, quad: SphericalQuadrature) -> Point3:
    """Euclidean barycenter of the pushforward of the visual quadrature at ``x``.

    The visual measure is built constructively: the uniform nodes are
    pushed by the ball translation centered at ``x``, mapped through the
    boundary action of ``r``, lifted back to the sphere, and averaged.
    """
    seen = ball_translate(tuple(-c for c in x), quad.nodes)
    seen /= np.linalg.norm(seen, axis=1)[:, None]
    images = _lifted_action(r)(seen)
    mean = images.mean(axis=0)
    return (float(mean[0]), float(mean[1]), float(mean[2]))


class BarycenterError(RuntimeError):
    """Raised when the conformal-barycenter iteration fails to converge."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


def conformal_barycenter(
    quad: SphericalQuadrature,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> Point3:
    """The point recentering the node set to zero Euclidean mean.

    Solves ``mean(T_w(nodes)) = 0`` for ``w`` by the damped fixed-point
    iteration ``w <- T_w^{-1}(eta * mean)``, halving ``eta`` whenever the
    residual increases.  Mobius-equivariant; raises `BarycenterError`
    with the final residual on non-convergence.
    """
    nodes = quad.nodes
    w = nodes.mean(axis=0)
    wn = np.linalg.norm(w)
    if wn >= 0.9:
        w = w * (0.9 / wn)
    res = np.linalg.norm(ball_translate(w, nodes).mean(axis=0))
    for _ in range(max_iter):
        if res <= tol:
            return (float(w[0]), float(w[1]), float(w[2]))
        eta = 1.0
        while True:
            m = ball_translate(w, nodes).mean(axis=0)
            cand = ball_translate(-w, eta * m)
            cand_res = np.linalg.norm(ball_translate(cand, nodes).mean(axis=0))
            if cand_res < res or eta < 1e-6:
                w, res = cand, cand_res
                break
            eta *= 0.5
    if res <= tol:
        return (float(w[0]), float(w[1]), float(w[2]))
    raise BarycenterError(f"barycenter iteration stalled at residual {res:.3e}", float(res))


def conformal_natural_extension(r, x: Point3, quad: SphericalQuadrature) -> Point3:
    """Conformal barycenter of the pushed visual quadrature of ``x``."""
    seen = ball_translate(tuple(-c for c in x), quad.nodes)
    seen /= np.linalg.norm(seen, axis=1)[:, None]
    images = _lifted_action(r)(seen)
    images /= np.linalg.norm(images, axis=1)[:, None]
    return conformal_barycenter(SphericalQuadrature(images, rule="pushforward"))


class ExtensionMethod(str, Enum):
    PRODUCT = "product"
    RADIAL = "radial"
    OPEN_BOOK = "open-book"
    STAR_SQUARE = "star-square"
    VISUAL = "visual"
    CONFORMAL_NATURAL = "conformal-natural"
    VERTICAL = "vertical"

    @property
    def acts_on_ball(self) -> bool:
        return self in (ExtensionMethod.RADIAL, ExtensionMethod.VISUAL, ExtensionMethod.CONFORMAL_NATURAL)


def _as_rational(map_like) -> RationalMap:
    if isinstance(map_like, RationalMap):
        return map_like
    if isinstance(map_like, BlaschkeProduct):
        return blaschke_to_rational(map_like)
    if isinstance(map_like, MobiusTransform):
        return mobius_to_rational(map_like)
    raise TypeError(f"cannot interpret {map_like!r} as a rational map")


def _quadratic_c(r: RationalMap) -> complex:
    n, d = r.num, r.den
    if len(d) != 1 or len(n) != 3 or abs(n[2] / d[0] - 1.0) > 1e-12 or abs(n[1]) > 1e-12 * abs(n[2]):
        raise ValueError("star-square extension requires a monic quadratic z^2 + c")
    return complex(n[0] / d[0])


def _repelling_multiplier(r: RationalMap) -> float:
    # fixed points: num(z) - z den(z) = 0, lexicographically smallest repelling one
    from numpy.polynomial import polynomial as npp

    fix = npp.polysub(r.num, npp.polymul(np.array([0.0, 1.0], dtype=complex), r.den))
    for z, _ in polynomial_roots(fix):
        lam = abs(derivative_value(r, z))
        if lam > 1.0 + 1e-9:
            return lam
    raise ValueError("map has no repelling finite fixed point to set the height factor")


def extension_operator(method: ExtensionMethod | str, map_like, quad: Optional[SphericalQuadrature] = None):
    """A callable ``p -> p`` realizing the chosen extension of ``map_like``.

    Ball-model methods (radial, visual, conformal-natural) act on ball
    points; the rest act on half-space points.
    """
    method = ExtensionMethod(method)
    if method is ExtensionMethod.PRODUCT:
        fac = factor_rational(_as_rational(map_like))
        return lambda p: product_extension(fac, p)
    if method is ExtensionMethod.RADIAL:
        r = _as_rational(map_like)
        return lambda v: radial_extension(r, v)
    if method is ExtensionMethod.OPEN_BOOK:
        return lambda p: open_book_extension(map_like, p)
    if method is ExtensionMethod.STAR_SQUARE:
        c = _quadratic_c(_as_rational(map_like))
        return lambda p: q_hat_c(c, p)
    if method is ExtensionMethod.VISUAL:
        q = quad if quad is not None else fibonacci_quadrature()
        return lambda v: visual_extension(map_like, v, q)
    if method is ExtensionMethod.CONFORMAL_NATURAL:
        q = quad if quad is not None else fibonacci_quadrature()
        return lambda v: conformal_natural_extension(map_like, v, q)
    if method is ExtensionMethod.VERTICAL:
        r = _as_rational(map_like)
        lam = _repelling_multiplier(r)
        return lambda p: vertical_extension(r, lam, p)
    raise ValueError(f"unknown extension method {method!r}")


def ball_poincare_extend(gamma: MobiusTransform, v: Point3) -> Point3:
    """The ball-model isometry whose boundary action is ``lift . gamma . project``.

    The fixed model-transfer inversion restricts to the south-pole chart
    on the boundary sphere, while `stereographic_lift` uses the north
    pole; composing the inversion with the equator reflection yields the
    half-space/ball isometry matching the lift chart, and this function
    conjugates by that.
    """
    flipped = (v[0], v[1], -v[2])
    p = ball_to_halfspace(flipped)
    q = poincare_extend(gamma, p)
    w = halfspace_to_ball(q)
    if is_inf(w):
        raise ValueError("ball extension escaped to the ideal boundary")
    return (w[0], w[1], -w[2])


def _sample_interior_halfspace(rng: np.random.Generator) -> Point3:
    x, y = rng.normal(0.0, 0.8, size=2)
    t = math.exp(rng.uniform(math.log(0.2), math.log(2.0)))
    return (float(x), float(y), float(t))


def _sample_interior_ball(rng: np.random.Generator) -> Point3:
    while True:
        v = rng.uniform(-0.8, 0.8, size=3)
        if np.linalg.norm(v) < 0.8:
            return (float(v[0]), float(v[1]), float(v[2]))


def naturality_deviation(
    method: ExtensionMethod | str,
    r,
    g: MobiusTransform,
    h: MobiusTransform,
    samples: int = 100,
    seed: int = 0,
    quad: Optional[SphericalQuadrature] = None,
) -> float:
    """Max hyperbolic gap between ``Ext(g.r.h)`` and ``g^ . Ext(r) . h^``.

    Sampled over seeded interior points; deterministic given the seed.
    Raises if the composite map falls outside the method's admissible
    class.
    """
    from .maps import conjugate_by_mobius

    method = ExtensionMethod(method)
    composite = conjugate_by_mobius(g, _as_rational(r), h)
    ext_composite = extension_operator(method, composite, quad=quad)
    ext_r = extension_operator(method, r, quad=quad)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        if method.acts_on_ball:
            v = _sample_interior_ball(rng)
            lhs = ball_to_halfspace(ext_composite(v))
            rhs = ball_to_halfspace(ball_poincare_extend(g, ext_r(ball_poincare_extend(h, v))))
        else:
            p = _sample_interior_halfspace(rng)
            lhs = ext_composite(p)
            rhs = poincare_extend(g, ext_r(poincare_extend(h, p)))
        worst = max(worst, hyperbolic_distance(lhs, rhs))
    return worst


def homotopy_interpolate(a: HalfSpacePoint, b: HalfSpacePoint, lam: float) -> HalfSpacePoint:
    """Geodesic interpolation between two extension values at the same input.

    Since any two extensions agree on the boundary, sliding every
    interior value this way is a homotopy through extensions.
    """
    return geodesic_interpolate(a, b, lam)
