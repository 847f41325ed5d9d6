import math

import numpy as np
import pytest

from h3ext import INF, is_inf
from h3ext.mobius import MobiusTransform, mobius


def rel_err(a, b):
    """Componentwise gap between two half-space points, relative to their size."""
    if is_inf(a) or is_inf(b):
        return 0.0 if (is_inf(a) and is_inf(b)) else math.inf
    scale = max(1.0, *(abs(v) for v in a), *(abs(v) for v in b))
    return max(abs(x - y) for x, y in zip(a, b)) / scale


def chordal(a, b):
    """Chordal distance on the Riemann sphere (total, handles INF)."""
    if is_inf(a) and is_inf(b):
        return 0.0
    if is_inf(a) or is_inf(b):
        z = b if is_inf(a) else a
        return 2.0 / math.sqrt(1.0 + abs(z) ** 2)
    return 2.0 * abs(a - b) / math.sqrt((1.0 + abs(a) ** 2) * (1.0 + abs(b) ** 2))


def random_mobius(rng) -> MobiusTransform:
    """A well-conditioned random Mobius transformation."""
    while True:
        a, b, c, d = (complex(*rng.normal(size=2)) for _ in range(4))
        det = a * d - b * c
        if abs(det) > 0.3:
            return mobius(a, b, c, d)


def random_disk_automorphism(rng) -> MobiusTransform:
    """Random ``e^{i theta} (z - a)/(1 - conj(a) z)`` with ``|a| < 0.8``."""
    theta = rng.uniform(0.0, 2.0 * math.pi)
    while True:
        a = complex(*rng.normal(scale=0.4, size=2))
        if abs(a) < 0.8:
            break
    rot = complex(math.cos(theta), math.sin(theta))
    return mobius(rot, -rot * a, -a.conjugate(), 1.0)


def random_interior_point(rng):
    x, y = rng.normal(0.0, 0.8, size=2)
    t = math.exp(rng.uniform(math.log(0.1), math.log(2.5)))
    return (float(x), float(y), float(t))


@pytest.fixture
def rng():
    return np.random.default_rng(20240814)
