"""Command-line surface: render, eval, compare, factor, report.

Map specifications use a compact textual grammar:

* ``quad:c=<complex>``                      the quadratic family z^2 + c
* ``rat:num=<coeffs>;den=<coeffs>``         rational map, ascending coefficients
* ``bls:theta=<radians>;zeros=<complexes>`` Blaschke product in normal form

Complex literals are ``a``, ``a+bi`` or ``a-bi`` with a mandatory sign in
front of the imaginary part and no whitespace, e.g. ``-1``, ``0.5+0i``,
``1.2-0.3i``.

Slices are written as binary PGM (P5) goldens or as CSV rows
``x,y,t,count``; the ``report`` command reproduces the standard gallery
of spatial filled Julia slices, writing one PGM per parameter, a stats
CSV, and a matplotlib overview figure.
"""

from __future__ import annotations

import argparse
import csv
import re
import sys
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np

from .extensions import ExtensionMethod, extension_operator
from .geometry import hyperbolic_distance, is_inf
from .julia3d import EscapeGrid, SliceSpec, VolumeSpec, render_slice, render_volume, slice_stats
from .maps import BlaschkeProduct, RationalMap, enumerate_pairings, factor_rational, rational

__all__ = [
    "parse_map_spec",
    "format_map_spec",
    "parse_complex",
    "format_complex",
    "write_pgm",
    "write_slice_csv",
    "write_volume_csv",
    "main",
]

_COMPLEX_RE = re.compile(
    r"^(?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"(?:(?P<im>[+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i)?$"
)


def parse_complex(token: str) -> complex:
    """Parse ``a``, ``a+bi`` or ``a-bi`` (no whitespace, explicit sign)."""
    m = _COMPLEX_RE.match(token)
    if not m:
        raise ValueError(f"bad complex literal {token!r}")
    re_part = float(m.group("re"))
    im_part = float(m.group("im")) if m.group("im") else 0.0
    return complex(re_part, im_part)


def format_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0.0:
        return f"{z.real:.12g}"
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:.12g}{sign}{abs(z.imag):.12g}i"


MapSpecValue = Union[RationalMap, BlaschkeProduct, complex]


def parse_map_spec(text: str) -> MapSpecValue:
    """Parse a textual map spec into its typed form.

    ``quad:`` specs return the parameter c itself; the caller decides the
    representation.
    """
    if ":" not in text:
        raise ValueError(f"map spec missing kind prefix: {text!r}")
    kind, _, body = text.partition(":")
    fields = {}
    for item in body.split(";"):
        if "=" not in item:
            raise ValueError(f"bad field {item!r} in map spec {text!r}")
        key, _, val = item.partition("=")
        fields[key] = val
    if kind == "quad":
        if set(fields) != {"c"}:
            raise ValueError(f"quad spec takes exactly the field c, got {sorted(fields)!r}")
        return parse_complex(fields["c"])
    if kind == "rat":
        if set(fields) != {"num", "den"}:
            raise ValueError(f"rat spec takes fields num and den, got {sorted(fields)!r}")
        num = [parse_complex(t) for t in fields["num"].split(",")]
        den = [parse_complex(t) for t in fields["den"].split(",")]
        return rational(num, den)
    if kind == "bls":
        if set(fields) != {"theta", "zeros"}:
            raise ValueError(f"bls spec takes fields theta and zeros, got {sorted(fields)!r}")
        theta = float(fields["theta"])
        zeros = [parse_complex(t) for t in fields["zeros"].split(",")]
        return BlaschkeProduct(theta, tuple(zeros))
    raise ValueError(f"unknown map kind {kind!r} (expected quad, rat or bls)")


def format_map_spec(value: MapSpecValue) -> str:
    if isinstance(value, complex):
        return f"quad:c={format_complex(value)}"
    if isinstance(value, BlaschkeProduct):
        zs = ",".join(format_complex(z) for z in value.zeros)
        return f"bls:theta={value.theta:.12g};zeros={zs}"
    if isinstance(value, RationalMap):
        num = ",".join(format_complex(z) for z in value.num)
        den = ",".join(format_complex(z) for z in value.den)
        return f"rat:num={num};den={den}"
    raise TypeError(f"not a map spec value: {value!r}")


def _spec_to_map(value: MapSpecValue) -> Union[RationalMap, BlaschkeProduct]:
    if isinstance(value, complex):
        return rational([value, 0.0, 1.0], [1.0])
    return value


def write_pgm(grid: EscapeGrid, path) -> None:
    """Write the grid as a binary PGM: interior black, instant escape white."""
    mi = grid.spec.max_iter
    pix = 255 - (255 * np.minimum(grid.counts, mi)) // mi
    data = pix.astype(np.uint8).tobytes()
    header = f"P5\n{grid.spec.width} {grid.spec.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + data)


def write_slice_csv(grid: EscapeGrid, path) -> None:
    xs = grid.spec.x_centers()
    ts = grid.spec.t_centers()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "t", "count"])
        for i in range(grid.spec.height):
            for j in range(grid.spec.width):
                w.writerow([f"{xs[j]:.12g}", f"{grid.spec.y0:.12g}", f"{ts[i]:.12g}", int(grid.counts[i, j])])


def write_volume_csv(vol, path) -> None:
    ys = vol.spec.y_centers()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "t", "count"])
        for k, y0 in enumerate(ys):
            layer = vol.spec.layer_slice(y0)
            xs = layer.x_centers()
            ts = layer.t_centers()
            for i in range(layer.height):
                for j in range(layer.width):
                    w.writerow([f"{xs[j]:.12g}", f"{y0:.12g}", f"{ts[i]:.12g}", int(vol.counts[k, i, j])])


def _parse_floats(text: str, n: int, what: str) -> Tuple[float, ...]:
    parts = text.split(",")
    if len(parts) != n:
        raise ValueError(f"{what} needs {n} comma-separated numbers, got {text!r}")
    return tuple(float(p) for p in parts)


def _parse_size(text: str) -> Tuple[int, ...]:
    parts = text.lower().split("x")
    if len(parts) not in (2, 3):
        raise ValueError(f"size must look like WxH or WxHxD, got {text!r}")
    return tuple(int(p) for p in parts)


def _point_from_arg(text: str):
    x, y, t = _parse_floats(text, 3, "point")
    return (x, y, t)


def _plane_value(text: str) -> float:
    if text.startswith("y="):
        text = text[2:]
    return float(text)


def _quad_c_of(args) -> complex:
    if args.c is not None:
        return parse_complex(args.c)
    if args.map is not None:
        val = parse_map_spec(args.map)
        if isinstance(val, complex):
            return val
        raise ValueError("render expects a quad: map spec or --c")
    raise ValueError("one of --c or --map is required")


def _cmd_render(args) -> int:
    c = _quad_c_of(args)
    if args.volume:
        box = _parse_floats(args.window, 6, "--window (volume)")
        size = _parse_size(args.size)
        if len(size) != 3:
            raise ValueError("volume rendering needs --size WxHxD")
        spec = VolumeSpec(
            c=c, box=box, width=size[0], height=size[1], depth=size[2],
            max_iter=args.max_iter, escape_radius=args.escape_radius,
        )
        vol = render_volume(spec)
        if args.format != "csv":
            raise ValueError("volumes are written as CSV; pass --format csv")
        write_volume_csv(vol, args.out)
        interior = float((vol.counts == spec.max_iter).mean())
        print(f"interior_fraction={interior:.6f}")
        print(f"out={args.out}")
        return 0
    window = _parse_floats(args.window, 4, "--window")
    size = _parse_size(args.size)
    if len(size) != 2:
        raise ValueError("slice rendering needs --size WxH")
    spec = SliceSpec(
        c=c, window=window, width=size[0], height=size[1],
        max_iter=args.max_iter, y0=args.plane, escape_radius=args.escape_radius,
    )
    grid = render_slice(spec)
    if args.format == "pgm":
        write_pgm(grid, args.out)
    else:
        write_slice_csv(grid, args.out)
    stats = slice_stats(grid)
    print(f"interior_fraction={stats.interior_fraction:.6f}")
    print(f"symmetry_residual={stats.symmetry_residual:.6f}")
    if stats.bounding_box:
        bb = ",".join(f"{v:.6g}" for v in stats.bounding_box)
        print(f"interior_bbox={bb}")
    print(f"out={args.out}")
    return 0


def _format_halfspace(p) -> str:
    if is_inf(p):
        return "inf"
    return " ".join(f"{v:.15g}" for v in p)


def _cmd_eval(args) -> int:
    value = parse_map_spec(args.map)
    method = ExtensionMethod(args.method)
    mp = _spec_to_map(value)
    op = extension_operator(method, mp)
    p = _point_from_arg(args.point)
    print(_format_halfspace(op(p)))
    return 0


def _cmd_compare(args) -> int:
    names = args.method.split(",")
    if len(names) != 2:
        raise ValueError("--method must name two methods, e.g. product,star-square")
    m1, m2 = (ExtensionMethod(n) for n in names)
    if m1.acts_on_ball != m2.acts_on_ball:
        raise ValueError("the two methods act on different models and cannot be compared pointwise")
    value = parse_map_spec(args.map)
    mp = _spec_to_map(value)
    op1 = extension_operator(m1, mp)
    op2 = extension_operator(m2, mp)
    rng = np.random.default_rng(args.seed)
    from .extensions import _sample_interior_ball, _sample_interior_halfspace
    from .geometry import ball_to_halfspace

    dists = []
    for _ in range(args.samples):
        if m1.acts_on_ball:
            v = _sample_interior_ball(rng)
            a, b = ball_to_halfspace(op1(v)), ball_to_halfspace(op2(v))
        else:
            p = _sample_interior_halfspace(rng)
            a, b = op1(p), op2(p)
        dists.append(hyperbolic_distance(a, b))
    print(f"max_distance={max(dists):.15g}")
    print(f"mean_distance={sum(dists) / len(dists):.15g}")
    print(f"samples={args.samples}")
    print(f"seed={args.seed}")
    return 0


def _format_sphere(z) -> str:
    return "inf" if is_inf(z) else format_complex(z)


def _cmd_factor(args) -> int:
    value = parse_map_spec(args.map)
    r = _spec_to_map(value)
    if isinstance(r, BlaschkeProduct):
        from .maps import blaschke_to_rational

        r = blaschke_to_rational(r)
    if args.enumerate:
        for k, fac in enumerate(enumerate_pairings(r, args.enumerate)):
            print(f"pairing {k}: {fac.provenance}")
            for f in fac.factors:
                g = f.transform
                print(
                    f"  {format_complex(g.a)} {format_complex(g.b)} {format_complex(g.c)} {format_complex(g.d)}"
                    f" # zero={_format_sphere(f.zero)} pole={_format_sphere(f.pole)}"
                )
        return 0
    fac = factor_rational(r)
    print(f"pairing: {fac.provenance}")
    for f in fac.factors:
        g = f.transform
        print(
            f"{format_complex(g.a)} {format_complex(g.b)} {format_complex(g.c)} {format_complex(g.d)}"
            f" # zero={_format_sphere(f.zero)} pole={_format_sphere(f.pole)}"
        )
    return 0


_REPORT_PARAMS = [0.25 + 0j, -0.75 + 0j, -0.77 + 0j, -1.0 + 0j, -1.28 + 0j]


def _cmd_report(args) -> int:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    window = (-2.0, 2.0, 0.0, 2.0)
    params = [0j] + _REPORT_PARAMS

    rows = []
    grids = []
    for c in params:
        spec = SliceSpec(c=c, window=window, width=args.size, height=args.size, max_iter=args.max_iter)
        grid = render_slice(spec)
        grids.append(grid)
        label = format_complex(c)
        write_pgm(grid, outdir / f"slice_c_{label}.pgm")
        st = slice_stats(grid)
        rows.append((label, st.interior_fraction, st.symmetry_residual))
        print(f"c={label} interior_fraction={st.interior_fraction:.6f}")

    with open(outdir / "report.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["c", "interior_fraction", "symmetry_residual"])
        for label, fr, sym in rows:
            w.writerow([label, f"{fr:.6f}", f"{sym:.6f}"])

    fig, axes = plt.subplots(2, 3, figsize=(12, 8))
    for ax, c, grid in zip(axes.ravel(), params, grids):
        ax.imshow(
            grid.counts,
            cmap="gray",
            vmin=0,
            vmax=grid.spec.max_iter,
            extent=(window[0], window[1], window[2], window[3]),
            origin="upper",
        )
        ax.set_title(f"c = {format_complex(c)}")
        ax.set_xlabel("x")
        ax.set_ylabel("t")
    fig.suptitle("Spatial filled Julia sets, slice y = 0")
    fig.tight_layout()
    fig.savefig(outdir / "report.png", dpi=150)
    plt.close(fig)
    print(f"out={outdir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="h3ext", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    rend = sub.add_parser("render", help="render a slice (or volume) of a spatial filled Julia set")
    rend.add_argument("--c", help="quadratic parameter c as a complex literal")
    rend.add_argument("--map", help="map spec (quad:c=... only for rendering)")
    rend.add_argument("--window", default="-2,2,0,2", help="xmin,xmax,tmin,tmax (6 numbers with --volume)")
    rend.add_argument("--plane", type=_plane_value, default=0.0, metavar="Y0", help="slice plane, Y0 or y=Y0")
    rend.add_argument("--size", default="512x512", help="WxH pixels (WxHxD voxels with --volume)")
    rend.add_argument("--max-iter", type=int, default=200)
    rend.add_argument("--escape-radius", type=float, default=None)
    rend.add_argument("--volume", action="store_true", help="render a 3D box instead of a slice")
    rend.add_argument("--format", choices=["pgm", "csv"], default="pgm")
    rend.add_argument("--out", required=True)
    rend.set_defaults(func=_cmd_render)

    ev = sub.add_parser("eval", help="evaluate an extension of a map at one point")
    ev.add_argument("--method", required=True, choices=[m.value for m in ExtensionMethod])
    ev.add_argument("--map", required=True)
    ev.add_argument("--point", required=True, help="x,y,t (half-space) or ball coordinates for ball methods")
    ev.set_defaults(func=_cmd_eval)

    cmp_ = sub.add_parser("compare", help="hyperbolic distance statistics between two extensions")
    cmp_.add_argument("--method", required=True, help="two method names separated by a comma")
    cmp_.add_argument("--map", required=True)
    cmp_.add_argument("--samples", type=int, default=100)
    cmp_.add_argument("--seed", type=int, default=0)
    cmp_.set_defaults(func=_cmd_compare)

    fac = sub.add_parser("factor", help="print the Mobius factorization of a rational map")
    fac.add_argument("--map", required=True)
    fac.add_argument("--enumerate", type=int, default=0, metavar="K", help="list up to K distinct pairings")
    fac.set_defaults(func=_cmd_factor)

    rep = sub.add_parser("report", help="render the standard slice gallery with figures and CSV")
    rep.add_argument("--out-dir", required=True)
    rep.add_argument("--size", type=int, default=512)
    rep.add_argument("--max-iter", type=int, default=200)
    rep.set_defaults(func=_cmd_report)

    return ap


_NUMBER_LIST_RE = re.compile(r"^-[\d.,+\-eEij]+$")
_LIST_FLAGS = {"--window", "--point", "--c"}


def _join_negative_values(argv: List[str]) -> List[str]:
    """Let ``--window -2,2,0,2`` parse: argparse reads ``-2,...`` as a flag."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _LIST_FLAGS and i + 1 < len(argv) and _NUMBER_LIST_RE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = ap.parse_args(_join_negative_values(list(argv)))
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
