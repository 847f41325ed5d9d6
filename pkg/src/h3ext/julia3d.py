"""Escape-time rasters for the spatial filled Julia sets of ``q_hat_c``.

A point belongs to the spatial filled Julia set when its orbit under the
translated star-square stays bounded.  Norm multiplicativity gives the
escape bound ``|q_hat_c(p)| >= |p|^2 - |c|``, so any radius at least
``max(2, |c|)`` is sound: once the norm passes it, it grows forever.

Slices through vertical planes ``y = y0`` are rendered on pixel grids
(cell-center sampling, top row at the largest height) with the exact
per-component arithmetic of `q_hat`, so the ``t = 0`` row reproduces the
classical planar escape counts integer for integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .geometry import HalfSpacePoint, is_inf
from .star import q_hat_c

__all__ = [
    "SliceSpec",
    "VolumeSpec",
    "EscapeGrid",
    "VolumeGrid",
    "escape_count",
    "classical_escape_count",
    "render_slice",
    "render_volume",
    "slice_stats",
    "default_escape_radius",
]


def default_escape_radius(c: complex) -> float:
    return max(2.0, abs(complex(c)))


@dataclass(frozen=True)
class SliceSpec:
    """Raster parameters for one vertical-plane slice ``y = y0``."""

    c: complex
    window: Tuple[float, float, float, float]  # xmin, xmax, tmin, tmax
    width: int = 512
    height: int = 512
    max_iter: int = 200
    y0: float = 0.0
    escape_radius: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        xmin, xmax, tmin, tmax = self.window
        if not (xmax > xmin and tmax > tmin):
            raise ValueError(f"degenerate window {self.window!r}")
        if tmin < 0.0:
            raise ValueError("the height range must stay in t >= 0")
        if self.width < 1 or self.height < 1:
            raise ValueError("pixel counts must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        r = self.escape_radius
        if r is None:
            object.__setattr__(self, "escape_radius", default_escape_radius(self.c))
        elif r < default_escape_radius(self.c):
            raise ValueError(f"escape radius {r!r} below the sound bound {default_escape_radius(self.c)!r}")

    def x_centers(self) -> np.ndarray:
        xmin, xmax, _, _ = self.window
        j = np.arange(self.width)
        return xmin + (j + 0.5) * (xmax - xmin) / self.width

    def t_centers(self) -> np.ndarray:
        """Height per row, row 0 on top (largest t)."""
        _, _, tmin, tmax = self.window
        i = np.arange(self.height)
        return tmax - (i + 0.5) * (tmax - tmin) / self.height


@dataclass(frozen=True)
class VolumeSpec:
    """Raster parameters for a 3D box, sampled slice by slice."""

    c: complex
    box: Tuple[float, float, float, float, float, float]  # xmin,xmax,ymin,ymax,tmin,tmax
    width: int = 64
    depth: int = 64
    height: int = 64
    max_iter: int = 60
    escape_radius: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        xmin, xmax, ymin, ymax, tmin, tmax = self.box
        if not (xmax > xmin and ymax > ymin and tmax > tmin):
            raise ValueError(f"degenerate box {self.box!r}")
        if tmin < 0.0:
            raise ValueError("the height range must stay in t >= 0")
        if min(self.width, self.depth, self.height) < 1 or self.max_iter < 1:
            raise ValueError("resolution and max_iter must be positive")
        if self.escape_radius is None:
            object.__setattr__(self, "escape_radius", default_escape_radius(self.c))
        elif self.escape_radius < default_escape_radius(self.c):
            raise ValueError("escape radius below the sound bound")

    def y_centers(self) -> np.ndarray:
        _, _, ymin, ymax, _, _ = self.box
        k = np.arange(self.depth)
        return ymin + (k + 0.5) * (ymax - ymin) / self.depth

    def layer_slice(self, y0: float) -> SliceSpec:
        xmin, xmax, _, _, tmin, tmax = self.box
        return SliceSpec(
            c=self.c,
            window=(xmin, xmax, tmin, tmax),
            width=self.width,
            height=self.height,
            max_iter=self.max_iter,
            y0=float(y0),
            escape_radius=self.escape_radius,
        )


@dataclass(frozen=True)
class EscapeGrid:
    """Escape counts for one slice; ``count == max_iter`` marks interior."""

    spec: SliceSpec
    counts: np.ndarray  # (height, width) int32, row 0 = top

    def __post_init__(self):
        if self.counts.shape != (self.spec.height, self.spec.width):
            raise ValueError("count matrix does not match the slice spec")


@dataclass(frozen=True)
class VolumeGrid:
    spec: VolumeSpec
    counts: np.ndarray  # (depth, height, width) int32

    def __post_init__(self):
        if self.counts.shape != (self.spec.depth, self.spec.height, self.spec.width):
            raise ValueError("count array does not match the volume spec")


def escape_count(c: complex, p: HalfSpacePoint, max_iter: int, escape_radius: Optional[float] = None) -> int:
    """Iterations applied before the orbit norm first exceeds the radius.

    Returns ``max_iter`` when the orbit never escapes within the budget;
    a starting point already beyond the radius counts 0.
    """
    c = complex(c)
    r = default_escape_radius(c) if escape_radius is None else float(escape_radius)
    if r < default_escape_radius(c):
        raise ValueError("escape radius below the sound bound")
    r2 = r * r
    for n in range(max_iter):
        if is_inf(p):
            return n
        x, y, t = p
        if x * x + y * y + t * t > r2:
            return n
        p = q_hat_c(c, p)
    return max_iter


def classical_escape_count(c: complex, z: complex, max_iter: int, escape_radius: Optional[float] = None) -> int:
    """Escape count of the plane iteration ``z -> z^2 + c`` (the 2D oracle)."""
    c = complex(c)
    r = default_escape_radius(c) if escape_radius is None else float(escape_radius)
    r2 = r * r
    z = complex(z)
    for n in range(max_iter):
        if z.real * z.real + z.imag * z.imag > r2:
            return n
        z = z * z + c
    return max_iter


def _iterate_grid(x0, y0, t0, c: complex, max_iter: int, r: float) -> np.ndarray:
    """Vectorized escape counts over flat coordinate arrays."""
    x = x0.copy()
    y = y0.copy()
    t = t0.copy()
    r2 = r * r
    cre, cim = c.real, c.imag
    counts = np.full(x.shape, max_iter, dtype=np.int32)
    alive = np.ones(x.shape, dtype=bool)
    idx = np.arange(x.size)
    for n in range(max_iter):
        s = x * x + y * y + t * t
        escaped = s > r2
        if escaped.any():
            counts[idx[escaped]] = n
            keep = ~escaped
            x, y, t, s = x[keep], y[keep], t[keep], s[keep]
            idx = idx[keep]
            if idx.size == 0:
                break
        with np.errstate(invalid="ignore"):
            a = s / (s + t * t)
        a = np.where(s == 0.0, 0.0, a)
        nx = a * (x * x - y * y) + cre
        ny = a * (2.0 * (x * y)) + cim
        nt = a * (2.0 * t * np.sqrt(s))
        x, y, t = nx, ny, nt
    return counts


def render_slice(spec: SliceSpec) -> EscapeGrid:
    """Render one slice deterministically (cell centers, top row first)."""
    xs = spec.x_centers()
    ts = spec.t_centers()
    X, T = np.meshgrid(xs, ts)
    Y = np.full_like(X, spec.y0)
    counts = _iterate_grid(
        X.ravel(), Y.ravel(), T.ravel(), spec.c, spec.max_iter, spec.escape_radius
    ).reshape(spec.height, spec.width)
    return EscapeGrid(spec, counts)


def render_volume(spec: VolumeSpec) -> VolumeGrid:
    """Render a 3D box as a stack of slices over the depth axis."""
    layers = [render_slice(spec.layer_slice(y0)).counts for y0 in spec.y_centers()]
    return VolumeGrid(spec, np.stack(layers, axis=0))


def render_boundary(
    c: complex,
    window: Tuple[float, float, float, float],
    width: int,
    height: int,
    max_iter: int,
    escape_radius: Optional[float] = None,
) -> np.ndarray:
    """Escape counts over a grid in the boundary plane ``t = 0``.

    The window is ``xmin, xmax, ymin, ymax`` in the complex plane; cell
    centers, top row at the largest imaginary part.  Since the boundary
    is exactly invariant and the squaring there is bitwise the complex
    one, these counts equal the classical plane iteration's integer for
    integer.
    """
    c = complex(c)
    r = default_escape_radius(c) if escape_radius is None else float(escape_radius)
    xmin, xmax, ymin, ymax = window
    xs = xmin + (np.arange(width) + 0.5) * (xmax - xmin) / width
    ys = ymax - (np.arange(height) + 0.5) * (ymax - ymin) / height
    X, Y = np.meshgrid(xs, ys)
    T = np.zeros_like(X)
    return _iterate_grid(X.ravel(), Y.ravel(), T.ravel(), c, max_iter, r).reshape(height, width)


@dataclass(frozen=True)
class SliceStats:
    interior_fraction: float
    symmetry_residual: float
    bounding_box: Optional[Tuple[float, float, float, float]]  # xmin,xmax,tmin,tmax of interior pixels


def slice_stats(grid: EscapeGrid) -> SliceStats:
    """Interior share, mirror-classification residual, and interior bounds."""
    interior = grid.counts == grid.spec.max_iter
    frac = float(interior.mean())
    mirrored = interior[:, ::-1]
    residual = float((interior != mirrored).mean())
    if interior.any():
        xs = grid.spec.x_centers()
        ts = grid.spec.t_centers()
        ii, jj = np.nonzero(interior)
        bbox = (float(xs[jj].min()), float(xs[jj].max()), float(ts[ii].min()), float(ts[ii].max()))
    else:
        bbox = None
    return SliceStats(frac, residual, bbox)
