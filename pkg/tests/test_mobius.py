import math

import pytest

from h3ext import INF, hyperbolic_distance, is_inf
from h3ext.mobius import (
    MobiusTransform,
    mobius,
    page_decompose,
    poincare_extend,
    preserves_unit_circle,
    tau_phi,
)
from h3ext.mobius import preserves_unit_disk

from conftest import random_disk_automorphism, random_interior_point, random_mobius, rel_err


class TestSphereAction:
    def test_identity(self, rng):
        e = MobiusTransform.identity()
        for _ in range(20):
            z = complex(*rng.normal(size=2))
            assert e(z) == z

    def test_inversion(self):
        g = mobius(0, 1, 1, 0)
        assert abs(g(2.0 + 0j) - 0.5) <= 1e-15
        assert is_inf(g(0j))
        assert g(INF) == 0

    def test_value_at_infinity(self):
        g = mobius(1, -1j, 1, 1j)  # (z - i)/(z + i)
        assert abs(g(INF) - 1.0) <= 1e-15

    def test_compose_inverse_roundtrip(self, rng):
        for _ in range(100):
            g = random_mobius(rng)
            gi = g.inverse()
            z = complex(*rng.normal(size=2))
            assert abs(gi(g(z)) - z) <= 1e-12 * max(1.0, abs(z))

    def test_associativity_pointwise(self, rng):
        for _ in range(100):
            f, g, h = (random_mobius(rng) for _ in range(3))
            z = complex(*rng.normal(size=2))
            w1 = (f.compose(g)).compose(h)(z)
            w2 = f.compose(g.compose(h))(z)
            if is_inf(w1) or is_inf(w2):
                continue
            assert abs(w1 - w2) <= 1e-12 * max(1.0, abs(w1))

    def test_hand_composition(self):
        shift = mobius(1, 1, 0, 1)  # z + 1
        double = mobius(2, 0, 0, 1)  # 2z
        assert abs(shift.compose(double)(1.0 + 0j) - 3.0) <= 1e-15

    def test_singular_rejected(self):
        with pytest.raises(ValueError):
            mobius(1, 2, 2, 4)


class TestPoincareExtension:
    def test_translation(self):
        g = mobius(1, 2 + 1j, 0, 1)
        assert rel_err(poincare_extend(g, (0.5, 0.5, 2.0)), (2.5, 1.5, 2.0)) <= 1e-15

    def test_dilation_scales_height(self, rng):
        lam = 1.5 - 0.5j
        g = mobius(lam, 0, 0, 1)
        p = random_interior_point(rng)
        w = lam * complex(p[0], p[1])
        expect = (w.real, w.imag, abs(lam) * p[2])
        assert rel_err(poincare_extend(g, p), expect) <= 1e-13

    def test_inversion_fixes_unit_dome_top(self):
        g = mobius(0, 1, 1, 0)
        assert rel_err(poincare_extend(g, (0.0, 0.0, 1.0)), (0.0, 0.0, 1.0)) <= 1e-15

    def test_homomorphism(self, rng):
        worst = 0.0
        for _ in range(300):
            g, h = random_mobius(rng), random_mobius(rng)
            p = random_interior_point(rng)
            a = poincare_extend(g.compose(h), p)
            b = poincare_extend(g, poincare_extend(h, p))
            worst = max(worst, rel_err(a, b))
        assert worst <= 1e-10

    def test_isometry(self, rng):
        worst = 0.0
        for _ in range(200):
            g = random_mobius(rng)
            p, q = random_interior_point(rng), random_interior_point(rng)
            d = hyperbolic_distance(p, q)
            dg = hyperbolic_distance(poincare_extend(g, p), poincare_extend(g, q))
            worst = max(worst, abs(d - dg) / max(1.0, d))
        assert worst <= 1e-9

    def test_boundary_compatible(self, rng):
        for _ in range(100):
            g = random_mobius(rng)
            z = complex(*rng.normal(size=2))
            w = g(z)
            p = poincare_extend(g, (z.real, z.imag, 0.0))
            if is_inf(w):
                assert is_inf(p)
            else:
                assert p == (w.real, w.imag, 0.0)

    def test_interior_stays_interior(self, rng):
        for _ in range(100):
            g = random_mobius(rng)
            p = poincare_extend(g, random_interior_point(rng))
            assert p[2] > 0.0


class TestCirclePredicate:
    def test_disk_automorphism(self, rng):
        for _ in range(20):
            assert preserves_unit_circle(random_disk_automorphism(rng))

    def test_translation_is_not(self):
        assert not preserves_unit_circle(mobius(1, 1, 0, 1))

    def test_inversion_is(self):
        assert preserves_unit_circle(mobius(0, 1, 1, 0))
        assert not preserves_unit_disk(mobius(0, 1, 1, 0))


class TestTauPhi:
    def test_angle_zero_is_identity(self, rng):
        p = random_interior_point(rng)
        assert tau_phi(0.0, p) == p

    def test_quarter_turn_of_origin(self):
        assert rel_err(tau_phi(math.pi / 2, (0.0, 0.0, 0.0)), (0.0, 0.0, 1.0)) <= 1e-14

    def test_half_turn_is_circle_reflection(self):
        assert rel_err(tau_phi(math.pi, (0.5, 0.0, 0.0)), (2.0, 0.0, 0.0)) <= 1e-14

    def test_axis_sweep(self):
        for phi in (0.3, 1.0, 2.5):
            got = tau_phi(phi, (0.0, 0.0, 0.0))
            assert rel_err(got, (0.0, 0.0, math.tan(phi / 2.0))) <= 1e-12

    def test_group_law(self, rng):
        worst = 0.0
        for _ in range(200):
            phi, psi = rng.uniform(-math.pi, math.pi, size=2)
            p = random_interior_point(rng)
            a = tau_phi(phi, tau_phi(psi, p))
            b = tau_phi(phi + psi, p)
            worst = max(worst, rel_err(a, b))
        assert worst <= 1e-10

    def test_binding_fixed_pointwise(self, rng):
        worst = 0.0
        for _ in range(1000):
            th = rng.uniform(0.0, 2.0 * math.pi)
            phi = rng.uniform(-math.pi, math.pi)
            p = (math.cos(th), math.sin(th), 0.0)
            worst = max(worst, max(abs(a - b) for a, b in zip(tau_phi(phi, p), p)))
        assert worst <= 1e-12

    def test_commutes_with_disk_automorphism_extensions(self, rng):
        worst = 0.0
        for _ in range(100):
            g = random_disk_automorphism(rng)
            phi = rng.uniform(0.0, math.pi)
            p = random_interior_point(rng)
            a = tau_phi(phi, poincare_extend(g, p))
            b = poincare_extend(g, tau_phi(phi, p))
            worst = max(worst, rel_err(a, b))
        assert worst <= 1e-9

    def test_disk_swapping_maps_conjugate_the_rotation(self):
        # circle-preserving maps that swap the disk with its exterior
        # reverse the page rotation instead of commuting with it
        j = mobius(0, 1, 1, 0)
        p = (0.3, -0.1, 0.7)
        phi = 0.9
        lhs = poincare_extend(j, tau_phi(phi, p))
        rhs = tau_phi(-phi, poincare_extend(j, p))
        assert rel_err(lhs, rhs) <= 1e-12
        assert rel_err(lhs, tau_phi(phi, poincare_extend(j, p))) > 1e-3


class TestPageDecompose:
    def test_axis_point(self):
        phi, z = page_decompose((0.0, 0.0, 1.0))
        assert abs(phi - math.pi / 2) <= 1e-12 and abs(z) <= 1e-12

    def test_boundary_disk_page(self):
        phi, z = page_decompose((0.3, 0.2, 0.0))
        assert phi == 0.0 and z == complex(0.3, 0.2)

    def test_axis_height_two(self):
        phi, z = page_decompose((0.0, 0.0, 2.0))
        assert abs(phi - 2.0 * math.atan(2.0)) <= 1e-12 and abs(z) <= 1e-12

    def test_exterior_boundary_page(self):
        phi, z = page_decompose((2.0, 0.0, 0.0))
        assert phi == math.pi and abs(z - 0.5) <= 1e-15

    def test_roundtrip(self, rng):
        worst = 0.0
        for _ in range(500):
            p = random_interior_point(rng)
            phi, z = page_decompose(p)
            assert 0.0 < phi < math.pi and abs(z) <= 1.0 + 1e-9
            q = tau_phi(phi, (z.real, z.imag, 0.0))
            worst = max(worst, rel_err(p, q))
        assert worst <= 1e-9

    def test_infinity_rejected(self):
        with pytest.raises(ValueError):
            page_decompose(INF)
