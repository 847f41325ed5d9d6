"""Rational maps in coefficient form, root finding, and Mobius factorizations.

Polynomials are numpy arrays of complex coefficients in ascending degree
order (the convention of ``numpy.polynomial.polynomial``).  A
`RationalMap` is a reduced numerator/denominator pair; a
`BlaschkeProduct` keeps its rotation and zero list in normal form; a
`MobiusFactorization` decomposes a rational map into Mobius factors
whose pointwise product recovers the map, recording the zero/pole pair
(the endpoints of the geodesic sent to the vertical axis) of every
factor.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as npp

from .geometry import INF, SpherePoint, is_inf
from .mobius import MobiusTransform, mobius

__all__ = [
    "RationalMap",
    "rational",
    "eval_rational",
    "compose_rational",
    "derivative_value",
    "polynomial_roots",
    "RootFindingError",
    "critical_points",
    "BlaschkeProduct",
    "blaschke_to_rational",
    "MobiusFactor",
    "MobiusFactorization",
    "factor_rational",
    "enumerate_pairings",
    "is_power_conjugate",
    "PowerSeries",
    "linearizer_series",
]


def _trim(coeffs, rel_tol: float = 1e-14) -> np.ndarray:
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0.0:
        return np.zeros(1, dtype=complex)
    keep = np.nonzero(np.abs(c) > rel_tol * scale)[0]
    if keep.size == 0:
        return np.zeros(1, dtype=complex)
    return c[: keep[-1] + 1].copy()


def _degree(c: np.ndarray) -> int:
    return len(c) - 1


@dataclass(frozen=True)
class RationalMap:
    """A rational map ``num(z)/den(z)`` with ascending complex coefficients."""

    num: np.ndarray
    den: np.ndarray

    @property
    def degree(self) -> int:
        return max(_degree(self.num), _degree(self.den))

    def __call__(self, z: SpherePoint) -> SpherePoint:
        return eval_rational(self, z)


def rational(num, den=(1.0,), check_reduced: bool = True) -> RationalMap:
    """Build a `RationalMap`, trimming coefficients and validating the pair.

    The denominator must not vanish identically and the map must have
    degree at least one.  When ``check_reduced`` is set (the default),
    numerator and denominator roots closer than 1e-9 are rejected rather
    than silently cancelled.
    """
    n = _trim(num)
    d = _trim(den)
    if np.all(d == 0):
        raise ValueError("denominator is identically zero")
    if np.all(n == 0):
        raise ValueError("numerator is identically zero")
    r = RationalMap(n, d)
    if r.degree < 1:
        raise ValueError("constant maps are not rational dynamics; degree must be >= 1")
    if check_reduced and _degree(n) >= 1 and _degree(d) >= 1:
        zs = [z for z, m in polynomial_roots(n)]
        ps = [p for p, m in polynomial_roots(d)]
        for z in zs:
            for p in ps:
                if abs(z - p) <= 1e-9:
                    raise ValueError(
                        f"numerator and denominator share a root near {z!r}; reduce the map first"
                    )
    return r


def eval_rational(r: RationalMap, z: SpherePoint) -> SpherePoint:
    """Evaluate ``r`` at a point of the Riemann sphere (total).

    Large arguments are handled in the chart ``w = 1/z`` for stability,
    which also yields the value at `INF` from the leading coefficients.
    """
    dn, dd = _degree(r.num), _degree(r.den)
    if is_inf(z):
        if dn > dd:
            return INF
        if dn < dd:
            return 0j
        return r.num[-1] / r.den[-1]
    z = complex(z)
    if abs(z) <= 1.0:
        nv = complex(npp.polyval(z, r.num))
        dv = complex(npp.polyval(z, r.den))
        if dv == 0:
            return INF
        w = nv / dv
    else:
        u = 1.0 / z
        nv = complex(npp.polyval(u, r.num[::-1]))
        dv = complex(npp.polyval(u, r.den[::-1]))
        if dv == 0:
            return INF
        w = nv / dv
        if dn > dd:
            w *= z ** (dn - dd)
        elif dd > dn:
            w *= u ** (dd - dn)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        return INF
    return w


def _poly_compose_rational(p: np.ndarray, num: np.ndarray, den: np.ndarray):
    """Coefficients of ``den^deg(p) * p(num/den)`` (a polynomial)."""
    dp = _degree(p)
    acc = np.zeros(1, dtype=complex)
    den_pow = np.ones(1, dtype=complex)
    num_pows = [np.ones(1, dtype=complex)]
    for _ in range(dp):
        num_pows.append(npp.polymul(num_pows[-1], num))
    for k in range(dp, -1, -1):
        term = npp.polymul(num_pows[k], den_pow) * p[k]
        acc = npp.polyadd(acc, term)
        if k > 0:
            den_pow = npp.polymul(den_pow, den)
    return acc


def compose_rational(outer: RationalMap, inner: RationalMap) -> RationalMap:
    """Coefficient-level composition ``outer(inner(z))``.

    No reduction check is performed: the composition of reduced maps is
    reduced.  Only exactly-zero leading coefficients are trimmed here: a
    relative threshold would behead honest small leading coefficients of
    ill-conditioned high-degree compositions and silently change the
    degree.
    """
    dn, dd = _degree(outer.num), _degree(outer.den)
    deg = max(dn, dd)
    pad = lambda c: np.pad(c, (0, deg - _degree(c)))  # noqa: E731
    top = _poly_compose_rational(pad(outer.num), inner.num, inner.den)
    bot = _poly_compose_rational(pad(outer.den), inner.num, inner.den)
    return RationalMap(_trim(top, rel_tol=0.0), _trim(bot, rel_tol=0.0))


def mobius_to_rational(g: MobiusTransform) -> RationalMap:
    return RationalMap(np.array([g.b, g.a]), np.array([g.d, g.c]))


def conjugate_by_mobius(g: MobiusTransform, r: RationalMap, h: MobiusTransform) -> RationalMap:
    """The composite ``g . r . h`` in coefficient form."""
    return compose_rational(mobius_to_rational(g), compose_rational(r, mobius_to_rational(h)))


def derivative_value(r: RationalMap, z: complex) -> complex:
    """The derivative ``r'(z)`` at a finite non-pole point."""
    n, d = r.num, r.den
    nd = npp.polyder(n) if _degree(n) >= 1 else np.zeros(1, dtype=complex)
    dd = npp.polyder(d) if _degree(d) >= 1 else np.zeros(1, dtype=complex)
    dv = complex(npp.polyval(z, d))
    if dv == 0:
        raise ValueError("derivative requested at a pole")
    return (complex(npp.polyval(z, nd)) * dv - complex(npp.polyval(z, n)) * complex(npp.polyval(z, dd))) / (dv * dv)


class RootFindingError(RuntimeError):
    """Raised when the simultaneous iteration fails its residual contract."""

    def __init__(self, message: str, best: Sequence[complex]):
        super().__init__(message)
        self.best = list(best)


_ROOT_SEED = 1737
_MAX_SWEEPS = 1000
_CLUSTER_RADIUS = 1e-7


def polynomial_roots(coeffs, residual_tol: float = 1e-10) -> List[Tuple[complex, int]]:
    """All roots of a polynomial, clustered into (root, multiplicity) pairs.

    Uses Aberth-Ehrlich simultaneous iteration started from a perturbed
    circle (the perturbation is drawn from a fixed seeded generator, so
    results are deterministic).  Each returned root satisfies
    ``|P(root)| <= residual_tol * max|coeff|``; iterates closer than
    1e-7 are merged into a multiple root at their mean.  Roots at the
    origin are deflated exactly beforehand.

    Raises `RootFindingError` (carrying the best iterates) if the
    residual contract is not met within 1000 sweeps.
    """
    c = _trim(coeffs)
    deg = _degree(c)
    if deg < 1:
        raise ValueError("root finding requires degree >= 1")

    zero_mult = 0
    while c[0] == 0:
        zero_mult += 1
        c = c[1:]
    deg = _degree(c)

    roots: List[complex] = []
    if deg == 1:
        roots = [-c[0] / c[1]]
    elif deg == 2:
        a2, a1, a0 = c[2], c[1], c[0]
        disc = np.sqrt(complex(a1 * a1 - 4 * a2 * a0))
        # pick the sign giving the larger magnitude to avoid cancellation
        q = -(a1 + disc) / 2 if abs(a1 + disc) >= abs(a1 - disc) else -(a1 - disc) / 2
        r1 = q / a2
        r2 = a0 / q if q != 0 else 0j
        roots = [complex(r1), complex(r2)]
    elif deg >= 3:
        roots = _aberth(c, residual_tol)

    clustered = _cluster(roots)
    if zero_mult:
        clustered.append((0j, zero_mult))
    clustered.sort(key=lambda rm: (rm[0].real, rm[0].imag))
    return clustered


def _aberth(c: np.ndarray, residual_tol: float) -> List[complex]:
    scale = np.max(np.abs(c))
    c = c / scale
    deg = _degree(c)
    dc = npp.polyder(c)

    cauchy = 1.0 + np.max(np.abs(c[:-1] / c[-1]))
    rng = np.random.default_rng(_ROOT_SEED)
    angles = 2.0 * np.pi * (np.arange(deg) + 0.5) / deg + 0.4
    z = cauchy * np.exp(1j * angles)
    z = z * (1.0 + 1e-3 * rng.standard_normal(deg)) + 1e-3 * cauchy * (
        rng.standard_normal(deg) + 1j * rng.standard_normal(deg)
    )

    best = z.copy()
    best_move = np.inf
    patience = 0
    for _ in range(_MAX_SWEEPS):
        pv = npp.polyval(z, c)
        pd = npp.polyval(z, dc)
        stalled = pd == 0
        if np.any(stalled):
            z = np.where(stalled, z * (1.0 + 1e-8) + 1e-8, z)
            continue
        w = pv / pd
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        denom = 1.0 - w * s
        denom = np.where(denom == 0, 1.0, denom)
        delta = w / denom
        z = z - delta
        move = np.max(np.abs(delta) / (1.0 + np.abs(z)))
        if move < best_move * 0.75:
            best_move = move
            best = z.copy()
            patience = 0
        else:
            patience += 1
        if move < 1e-15 or (patience >= 12 and best_move < 1e-6):
            break

    if np.max(np.abs(npp.polyval(best, c))) < np.max(np.abs(npp.polyval(z, c))):
        z = best
    resid = np.abs(npp.polyval(z, c))
    if np.max(resid) > residual_tol:
        raise RootFindingError(
            f"max residual {np.max(resid):.3e} exceeds {residual_tol:.1e} after sweeps",
            z.tolist(),
        )
    return [complex(v) for v in z]


def _cluster(roots: Sequence[complex]) -> List[Tuple[complex, int]]:
    remaining = sorted(roots, key=lambda r: (r.real, r.imag))
    out: List[Tuple[complex, int]] = []
    used = [False] * len(remaining)
    for i, r in enumerate(remaining):
        if used[i]:
            continue
        members = [r]
        used[i] = True
        # grow the cluster transitively
        changed = True
        while changed:
            changed = False
            for j, s in enumerate(remaining):
                if not used[j] and any(abs(s - m) <= _CLUSTER_RADIUS for m in members):
                    members.append(s)
                    used[j] = True
                    changed = True
        center = sum(members) / len(members)
        out.append((center, len(members)))
    return out


def critical_points(r: RationalMap) -> List[Tuple[SpherePoint, int]]:
    """Critical points of ``r`` with multiplicities, including infinity.

    Finite critical points are the roots of ``num' den - num den'``; the
    degree deficiency of that polynomial against ``2 deg(r) - 2`` is the
    multiplicity of infinity.  The multiplicities always sum to
    ``2 deg(r) - 2``.
    """
    if r.degree < 2:
        raise ValueError("critical points require degree >= 2")
    n, d = r.num, r.den
    nd = npp.polyder(n) if _degree(n) >= 1 else np.zeros(1, dtype=complex)
    dd = npp.polyder(d) if _degree(d) >= 1 else np.zeros(1, dtype=complex)
    w = _trim(npp.polysub(npp.polymul(nd, d), npp.polymul(n, dd)), rel_tol=1e-12)
    target = 2 * r.degree - 2
    finite: List[Tuple[SpherePoint, int]] = []
    if _degree(w) >= 1:
        finite = [(z, m) for z, m in polynomial_roots(w)]
    elif np.all(w == 0):
        raise ValueError("degenerate map: vanishing wronskian")
    inf_mult = target - sum(m for _, m in finite)
    out: List[Tuple[SpherePoint, int]] = list(finite)
    if inf_mult > 0:
        out.append((INF, inf_mult))
    return out


@dataclass(frozen=True)
class BlaschkeProduct:
    """``e^{i theta} prod (z - a_i)/(1 - conj(a_i) z)`` with all ``|a_i| < 1``."""

    theta: float
    zeros: Tuple[complex, ...]

    def __post_init__(self):
        if len(self.zeros) < 1:
            raise ValueError("a Blaschke product needs at least one zero")
        for a in self.zeros:
            if abs(a) >= 1.0 - 1e-12:
                raise ValueError(f"Blaschke zero {a!r} not strictly inside the unit disk")
        object.__setattr__(self, "zeros", tuple(complex(a) for a in self.zeros))

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def __call__(self, z: SpherePoint) -> SpherePoint:
        if is_inf(z):
            return eval_rational(blaschke_to_rational(self), INF)
        z = complex(z)
        w = complex(math.cos(self.theta), math.sin(self.theta))
        for a in self.zeros:
            den = 1.0 - a.conjugate() * z
            if den == 0:
                return INF
            w *= (z - a) / den
        if not (math.isfinite(w.real) and math.isfinite(w.imag)):
            return INF
        return w


def blaschke(theta: float, zeros) -> BlaschkeProduct:
    return BlaschkeProduct(float(theta), tuple(zeros))


def blaschke_to_rational(b: BlaschkeProduct) -> RationalMap:
    """Expand a Blaschke product into numerator/denominator coefficients."""
    num = np.ones(1, dtype=complex)
    den = np.ones(1, dtype=complex)
    for a in b.zeros:
        num = npp.polymul(num, np.array([-a, 1.0], dtype=complex))
        den = npp.polymul(den, np.array([1.0, -a.conjugate()], dtype=complex))
    num = num * complex(math.cos(b.theta), math.sin(b.theta))
    return RationalMap(_trim(num), _trim(den))


@dataclass(frozen=True)
class MobiusFactor:
    """One Mobius factor with the zero/pole pair spanning its axis geodesic."""

    transform: MobiusTransform
    zero: SpherePoint
    pole: SpherePoint


@dataclass(frozen=True)
class MobiusFactorization:
    """An ordered list of Mobius factors whose pointwise product is the map."""

    factors: Tuple[MobiusFactor, ...]
    provenance: str = "canonical"

    def __len__(self) -> int:
        return len(self.factors)


_SAMPLE_SEED = 411


def _product_at(factors: Sequence[MobiusFactor], z: complex) -> SpherePoint:
    w = 1.0 + 0j
    for f in factors:
        v = f.transform(z)
        if is_inf(v):
            return INF
        w *= v
    return w


def _flat_roots(coeffs) -> List[complex]:
    flat: List[complex] = []
    for z, m in polynomial_roots(coeffs):
        flat.extend([z] * m)
    flat.sort(key=lambda r: (r.real, r.imag))
    return flat


def factor_rational(r: RationalMap, pairing: Optional[Sequence[int]] = None) -> MobiusFactorization:
    """Decompose ``r`` into Mobius factors with recorded zero/pole pairings.

    Zeros and poles are sorted lexicographically by (re, im) and paired
    index by index; unmatched zeros contribute factors ``z - z_k`` (pole
    at infinity) and unmatched poles contribute ``1/(z - p_k)`` (zero at
    infinity).  The leading-coefficient ratio is folded into the first
    factor.  An explicit ``pairing`` (a permutation of pole indices)
    overrides the canonical identity pairing.

    The result is validated by comparing the pointwise factor product
    against ``r`` at 20 fixed pseudo-random samples (relative error 1e-8).
    """
    zeros = _flat_roots(r.num) if _degree(r.num) >= 1 else []
    poles = _flat_roots(r.den) if _degree(r.den) >= 1 else []

    for z in zeros:
        for p in poles:
            if abs(z - p) <= 1e-9:
                raise ValueError(f"zero and pole collide near {z!r}; the map is not reduced")

    if pairing is None:
        order = list(range(len(poles)))
        provenance = "canonical (zeros and poles in lexicographic order)"
    else:
        order = list(pairing)
        if sorted(order) != list(range(len(poles))):
            raise ValueError("pairing must be a permutation of the pole indices")
        provenance = f"explicit pole permutation {tuple(order)}"

    paired = min(len(zeros), len(poles))
    factors: List[MobiusFactor] = []
    for i in range(paired):
        z, p = zeros[i], poles[order[i]]
        factors.append(MobiusFactor(mobius(1.0, -z, 1.0, -p), z, p))
    for z in zeros[paired:]:
        factors.append(MobiusFactor(mobius(1.0, -z, 0.0, 1.0), z, INF))
    for i in range(paired, len(poles)):
        p = poles[order[i]]
        factors.append(MobiusFactor(mobius(0.0, 1.0, 1.0, -p), INF, p))

    k = r.num[-1] / r.den[-1]
    f0 = factors[0]
    factors[0] = MobiusFactor(
        mobius(k * f0.transform.a, k * f0.transform.b, f0.transform.c, f0.transform.d),
        f0.zero,
        f0.pole,
    )

    rng = np.random.default_rng(_SAMPLE_SEED)
    for _ in range(20):
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        want = eval_rational(r, z)
        got = _product_at(factors, z)
        if is_inf(want) or is_inf(got):
            continue
        denom = max(1.0, abs(want))
        if abs(want - got) > 1e-8 * denom:
            raise RootFindingError(
                f"factor product deviates from the map at {z!r}: {got!r} vs {want!r}",
                [f.zero for f in factors if not is_inf(f.zero)],
            )
    return MobiusFactorization(tuple(factors), provenance)


def _pair_key(z: SpherePoint) -> Tuple[float, float]:
    if is_inf(z):
        return (math.inf, math.inf)
    return (round(z.real, 6), round(z.imag, 6))


def enumerate_pairings(r: RationalMap, limit: int) -> List[MobiusFactorization]:
    """Factorizations over distinct zero/pole pairings, at most ``limit``.

    Pairings differing only by reordering of the factors (or by permuting
    equal roots) are deduplicated; iteration order is deterministic.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    npoles = _degree(r.den) if _degree(r.den) >= 1 else 0
    seen = set()
    out: List[MobiusFactorization] = []
    for perm in itertools.permutations(range(max(npoles, 0))) if npoles else iter([()]):
        fac = factor_rational(r, pairing=perm if npoles else None)
        key = tuple(sorted((_pair_key(f.zero), _pair_key(f.pole)) for f in fac.factors))
        if key in seen:
            continue
        seen.add(key)
        out.append(fac)
        if len(out) >= limit:
            break
    return out


def is_power_conjugate(b: BlaschkeProduct) -> bool:
    """Whether ``b`` equals ``g1 . z^d . g2`` for disk automorphisms ``g_i``.

    Decided by the critical-point criterion: such maps have a single
    critical point inside the unit disk, of multiplicity ``degree - 1``.
    """
    if b.degree < 2:
        raise ValueError("power conjugacy is a question for degree >= 2")
    crits = critical_points(blaschke_to_rational(b))
    inside = [(z, m) for z, m in crits if not is_inf(z) and abs(z) < 1.0]
    return len(inside) == 1 and inside[0][1] == b.degree - 1


@dataclass(frozen=True)
class PowerSeries:
    """Truncated linearizing series at a repelling fixed point.

    ``coeffs[0]`` is the base point and ``coeffs[1] == 1``; the series
    satisfies ``f(multiplier * w) = map(f(w))`` through its truncation
    order.
    """

    base_point: complex
    multiplier: complex
    coeffs: np.ndarray

    def __call__(self, w: complex) -> complex:
        return complex(npp.polyval(w, self.coeffs))


def _series_mul(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    return np.convolve(a, b)[: n + 1]


def _series_div(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    if b[0] == 0:
        raise ZeroDivisionError("series division by a series with zero constant term")
    q = np.zeros(n + 1, dtype=complex)
    a = np.pad(a, (0, max(0, n + 1 - len(a))))
    b = np.pad(b, (0, max(0, n + 1 - len(b))))
    for k in range(n + 1):
        acc = a[k] - np.dot(q[:k], b[k:0:-1]) if k else a[0]
        q[k] = acc / b[0]
    return q


def _poly_of_series(p: np.ndarray, f: np.ndarray, n: int) -> np.ndarray:
    out = np.array([p[-1]], dtype=complex)
    for k in range(len(p) - 2, -1, -1):
        out = _series_mul(out, f, n)
        out = npp.polyadd(out, np.array([p[k]], dtype=complex))[: n + 1]
    return np.pad(out, (0, max(0, n + 1 - len(out))))


def linearizer_series(r: RationalMap, z0: complex, order: int) -> PowerSeries:
    """Solve ``f(lambda w) = r(f(w))`` termwise at a repelling fixed point.

    ``z0`` must satisfy ``r(z0) = z0`` to 1e-10 and the multiplier
    ``lambda = r'(z0)`` must have modulus above ``1 + 1e-9``.  Since
    ``|lambda| > 1`` no resonance ``lambda^k = lambda`` can occur and the
    triangular solve is unconditional.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    z0 = complex(z0)
    img = eval_rational(r, z0)
    if is_inf(img) or abs(img - z0) > 1e-10 * (1.0 + abs(z0)):
        raise ValueError(f"{z0!r} is not a fixed point (image {img!r})")
    lam = derivative_value(r, z0)
    if abs(lam) <= 1.0 + 1e-9:
        raise ValueError(f"fixed point is not repelling (multiplier {lam!r})")

    c = np.zeros(order + 1, dtype=complex)
    c[0] = z0
    c[1] = 1.0
    for k in range(2, order + 1):
        top = _poly_of_series(r.num, c, k)
        bot = _poly_of_series(r.den, c, k)
        g = _series_div(top, bot, k)
        c[k] = g[k] / (lam**k - lam)
    return PowerSeries(z0, lam, c)
