import numpy as np
import pytest

from h3ext.cli import (
    format_complex,
    format_map_spec,
    main,
    parse_complex,
    parse_map_spec,
    write_pgm,
)
from h3ext.julia3d import EscapeGrid, SliceSpec
from h3ext.maps import BlaschkeProduct, RationalMap


class TestComplexGrammar:
    @pytest.mark.parametrize(
        "text,value",
        [
            ("-1", -1 + 0j),
            ("0.5", 0.5 + 0j),
            ("1+2i", 1 + 2j),
            ("1.5-0.25i", 1.5 - 0.25j),
            ("-0.75+0i", -0.75 + 0j),
            ("1e-3+2e-4i", 0.001 + 0.0002j),
        ],
    )
    def test_accepted(self, text, value):
        assert parse_complex(text) == value

    @pytest.mark.parametrize("text", ["i", "1 + 2i", "2i", "1+i", "abc", ""])
    def test_rejected(self, text):
        with pytest.raises(ValueError):
            parse_complex(text)

    def test_roundtrip(self):
        for z in (0.5 + 0.25j, -1 + 0j, 3j - 2):
            assert parse_complex(format_complex(z)) == z


class TestMapSpecs:
    def test_quad(self):
        assert parse_map_spec("quad:c=-1") == -1 + 0j

    def test_rational(self):
        r = parse_map_spec("rat:num=-1,0,1;den=0,1")
        assert isinstance(r, RationalMap)
        assert abs(r(2.0 + 0j) - 1.5) <= 1e-15

    def test_blaschke(self):
        b = parse_map_spec("bls:theta=0;zeros=0.5+0i,-0.5+0i")
        assert isinstance(b, BlaschkeProduct)
        assert b.degree == 2

    def test_parse_print_idempotent(self):
        for text in ("quad:c=-1", "rat:num=-1,0,1;den=0,1", "bls:theta=0;zeros=0.5+0i,-0.5+0i"):
            once = format_map_spec(parse_map_spec(text))
            twice = format_map_spec(parse_map_spec(once))
            assert once == twice

    def test_bad_specs(self):
        for text in ("quad:", "weird:c=1", "rat:num=1", "bls:theta=0;zeros=2+0i"):
            with pytest.raises(ValueError):
                parse_map_spec(text)


class TestWritePgm:
    def test_payload_formula(self, tmp_path):
        spec = SliceSpec(c=0j, window=(0, 2, 0, 1), width=2, height=1, max_iter=7)
        grid = EscapeGrid(spec, np.array([[0, 7]], dtype=np.int32))
        out = tmp_path / "t.pgm"
        write_pgm(grid, out)
        data = out.read_bytes()
        assert data == b"P5\n2 1\n255\n" + bytes([255, 0])

    def test_header_and_size(self, tmp_path):
        spec = SliceSpec(c=0j, window=(-2, 2, 0, 2), width=64, height=48, max_iter=30)
        from h3ext.julia3d import render_slice

        grid = render_slice(spec)
        out = tmp_path / "r.pgm"
        write_pgm(grid, out)
        data = out.read_bytes()
        header = b"P5\n64 48\n255\n"
        assert data.startswith(header)
        assert len(data) == len(header) + 64 * 48


class TestCommands:
    def test_render_writes_valid_file(self, tmp_path, capsys):
        out = tmp_path / "j.pgm"
        code = main(
            [
                "render", "--c", "-1", "--window", "-2,2,0,1.5", "--size", "128x96",
                "--max-iter", "100", "--out", str(out),
            ]
        )
        assert code == 0
        data = out.read_bytes()
        assert data.startswith(b"P5\n128 96\n255\n")
        printed = capsys.readouterr().out
        assert "interior_fraction=" in printed

    def test_render_rerun_is_byte_identical(self, tmp_path):
        a = tmp_path / "a.pgm"
        b = tmp_path / "b.pgm"
        args = ["render", "--c", "-0.75", "--window", "-2,2,0,2", "--size", "96x96", "--max-iter", "80"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_render_interior_fraction_control(self, tmp_path, capsys):
        out = tmp_path / "c0.pgm"
        code = main(
            ["render", "--c", "0", "--window", "-1.5,1.5,0,1.5", "--size", "256x256",
             "--max-iter", "150", "--out", str(out)]
        )
        assert code == 0
        printed = capsys.readouterr().out
        frac = float(next(l for l in printed.splitlines() if l.startswith("interior_fraction=")).split("=")[1])
        assert abs(frac - 0.349) <= 0.01

    def test_render_csv(self, tmp_path):
        out = tmp_path / "j.csv"
        code = main(
            ["render", "--c", "-1", "--window", "-2,2,0,2", "--size", "16x8",
             "--max-iter", "20", "--format", "csv", "--out", str(out)]
        )
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "x,y,t,count"
        assert len(lines) == 1 + 16 * 8

    def test_render_volume_csv(self, tmp_path):
        out = tmp_path / "v.csv"
        code = main(
            ["render", "--c", "0", "--volume", "--window", "-1.2,1.2,-1.2,1.2,0,1.2",
             "--size", "8x8x4", "--max-iter", "20", "--format", "csv", "--out", str(out)]
        )
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 1 + 8 * 8 * 4

    def test_eval_star_square_axis(self, capsys):
        code = main(["eval", "--method", "star-square", "--map", "quad:c=0", "--point", "0,0,2"])
        assert code == 0
        xs = [float(v) for v in capsys.readouterr().out.split()]
        assert xs == [0.0, 0.0, 4.0]

    def test_eval_radial_equator(self, capsys):
        code = main(["eval", "--method", "radial", "--map", "rat:num=0,0,1;den=1", "--point", "0,0.5,0"])
        assert code == 0
        xs = [float(v) for v in capsys.readouterr().out.split()]
        assert max(abs(a - b) for a, b in zip(xs, (-0.5, 0.0, 0.0))) <= 1e-12

    def test_eval_product_single_factor(self, capsys):
        code = main(["eval", "--method", "product", "--map", "rat:num=1,2;den=3,1", "--point", "0.1,0.2,0.5"])
        assert code == 0
        from h3ext.maps import rational
        from h3ext.mobius import poincare_extend
        from h3ext.maps import factor_rational

        fac = factor_rational(rational([1, 2], [3, 1]))
        want = poincare_extend(fac.factors[0].transform, (0.1, 0.2, 0.5))
        xs = [float(v) for v in capsys.readouterr().out.split()]
        assert max(abs(a - b) for a, b in zip(xs, want)) <= 1e-15

    def test_compare_same_method_zero(self, capsys):
        code = main(
            ["compare", "--method", "product,product", "--map", "rat:num=-1,0,1;den=0,1",
             "--samples", "20", "--seed", "7"]
        )
        assert code == 0
        out = capsys.readouterr().out
        maxd = float(next(l for l in out.splitlines() if l.startswith("max_distance=")).split("=")[1])
        assert maxd == 0.0

    def test_compare_product_vs_star_square(self, capsys):
        code = main(
            ["compare", "--method", "product,star-square", "--map", "quad:c=0",
             "--samples", "50", "--seed", "3"]
        )
        assert code == 0
        out = capsys.readouterr().out
        maxd = float(next(l for l in out.splitlines() if l.startswith("max_distance=")).split("=")[1])
        assert maxd <= 1e-10

    def test_compare_open_book_vs_product_reproducible(self, capsys):
        args = ["compare", "--method", "open-book,product", "--map",
                "bls:theta=0;zeros=0.4+0i,-0.2+0.1i", "--samples", "30", "--seed", "11"]
        assert main(args) == 0
        first = capsys.readouterr().out
        assert main(args) == 0
        second = capsys.readouterr().out
        assert first == second
        maxd = float(next(l for l in first.splitlines() if l.startswith("max_distance=")).split("=")[1])
        assert maxd > 0.0

    def test_factor_output(self, capsys):
        code = main(["factor", "--map", "rat:num=-1,0,1;den=0,1"])
        assert code == 0
        out = capsys.readouterr().out
        lines = [l for l in out.splitlines() if "#" in l]
        assert len(lines) == 2
        assert all("zero=" in l and "pole=" in l for l in lines)
        assert any("pole=inf" in l for l in lines)

    def test_factor_enumerate(self, capsys):
        code = main(["factor", "--map", "rat:num=-1,0,1;den=-4,0,1", "--enumerate", "5"])
        assert code == 0
        out = capsys.readouterr().out
        assert out.count("pairing") == 2

    def test_invalid_flags_give_nonzero_exit(self, tmp_path, capsys):
        code = main(["render", "--c", "0", "--window", "2,-2,0,2", "--size", "8x8",
                     "--out", str(tmp_path / "x.pgm")])
        assert code == 1
        assert "error:" in capsys.readouterr().err

    def test_report(self, tmp_path, capsys):
        outdir = tmp_path / "report"
        code = main(["report", "--out-dir", str(outdir), "--size", "64", "--max-iter", "40"])
        assert code == 0
        assert (outdir / "report.csv").exists()
        assert (outdir / "report.png").exists()
        pgms = sorted(outdir.glob("slice_c_*.pgm"))
        assert len(pgms) == 6
        csv_lines = (outdir / "report.csv").read_text().strip().splitlines()
        assert csv_lines[0] == "c,interior_fraction,symmetry_residual"
        assert len(csv_lines) == 7
