import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entrogeo import (
    Curve,
    HatFunction,
    fisher_action,
    fisher_quadrature,
    geodesic_curve,
    hat_eval,
    kinetic_action,
    schrodinger_action,
)
from entrogeo.errors import DomainError, InvalidCurve


def segment_curve(backend, a, b, n):
    return geodesic_curve(backend, np.asarray(a, float), np.asarray(b, float), n)


class TestCurve:
    def test_grid_must_span_unit_interval(self):
        with pytest.raises(InvalidCurve):
            Curve([0.0, 0.5, 0.9], [np.zeros(1)] * 3)
        with pytest.raises(InvalidCurve):
            Curve([0.1, 0.5, 1.0], [np.zeros(1)] * 3)

    def test_grid_strictly_increasing(self):
        with pytest.raises(InvalidCurve):
            Curve([0.0, 0.5, 0.5, 1.0], [np.zeros(1)] * 4)

    def test_point_count_matches(self):
        with pytest.raises(InvalidCurve):
            Curve([0.0, 1.0], [np.zeros(1)] * 3)

    def test_mixed_payloads_rejected(self, quad2d):
        c = Curve([0.0, 1.0], [np.zeros(2), np.zeros(3)])
        with pytest.raises(InvalidCurve):
            kinetic_action(quad2d, c)


class TestKineticAction:
    def test_constant_curve_is_zero(self, quad2d):
        c = Curve.uniform([np.array([1.0, 2.0])] * 9)
        assert kinetic_action(quad2d, c) == 0.0

    @pytest.mark.parametrize("n", [2, 16, 64])
    def test_straight_line_half_distance_squared(self, quad2d, n):
        c = segment_curve(quad2d, [0.0, 0.0], [1.0, 0.0], n)
        assert kinetic_action(quad2d, c) == pytest.approx(0.5, abs=1e-12)

    def test_gaussian_quantile_geodesic(self, boltzmann):
        # translated Gaussians with a cell-aligned shift: W2 = 2 exactly and
        # the geodesic nodes are exact rolls, so the 2-energy is 1/2 * 2^2
        from entrogeo import GridDensity

        n, dx, x0 = 448, 1.0 / 32, -6.0
        a = GridDensity.gaussian(0.0, 1.0, n, dx, x0)
        pts = [a.with_rho(np.roll(a.rho, i)) for i in range(0, 65)]
        c = Curve.uniform(pts)
        assert kinetic_action(boltzmann, c) == pytest.approx(2.0, abs=1e-6)

    def test_lower_bound_on_random_curves(self, quad2d):
        rng = np.random.default_rng(3)
        for _ in range(20):
            pts = [rng.uniform(-2, 2, 2) for _ in range(9)]
            c = Curve.uniform(pts)
            lb = 0.5 * float(np.sum((pts[-1] - pts[0]) ** 2))
            assert kinetic_action(quad2d, c) >= lb - 1e-12

    def test_grid_refinement_of_geodesic(self, quad2d):
        coarse = segment_curve(quad2d, [0.0, 1.0], [2.0, -1.0], 8)
        fine = segment_curve(quad2d, [0.0, 1.0], [2.0, -1.0], 256)
        assert kinetic_action(quad2d, fine) <= kinetic_action(quad2d, coarse) + 1e-9

    def test_grid_refinement_of_density_geodesic(self, boltzmann):
        # exact cell-roll geodesic represented on two time resolutions; the
        # domain leaves ~7 sigma of headroom so no floored tail mass wraps
        from entrogeo import GridDensity

        n, dx, x0 = 512, 1.0 / 32, -7.0
        a = GridDensity.gaussian(0.0, 1.0, n, dx, x0)

        def rolled_curve(nodes):
            step = 64 // nodes
            pts = [a.with_rho(np.roll(a.rho, i * step)) for i in range(nodes + 1)]
            return Curve.uniform(pts)

        coarse = kinetic_action(boltzmann, rolled_curve(16))
        fine = kinetic_action(boltzmann, rolled_curve(64))
        assert fine <= coarse + 1e-9


class TestFisherAction:
    def test_constant_curve_value(self, quad2d):
        c = Curve.uniform([np.array([2.0, 0.0])] * 5)
        # |grad V|(x) = |x| = 2, integrand 1/2 * 4 constant
        assert fisher_action(quad2d, c) == pytest.approx(2.0, abs=1e-12)

    def test_zero_at_minimizer(self, quad2d):
        c = Curve.uniform([np.zeros(2)] * 5)
        assert fisher_action(quad2d, c) == 0.0

    def test_constant_gaussian_curve(self, boltzmann):
        from entrogeo import GridDensity

        g = GridDensity.gaussian(0.0, 1.0, 512, 20.0 / 512, -10.0)
        c = Curve.uniform([g] * 5)
        # Fisher information of N(0, s^2) is 1/s^2; the oracle below
        # re-derives it by quadrature of (rho'/rho)^2 rho on the grid
        xs = g.centers
        rho = np.exp(-0.5 * xs**2) / math.sqrt(2 * math.pi)
        oracle = np.sum((np.gradient(np.log(rho), xs) ** 2) * rho) * g.dx
        assert oracle == pytest.approx(1.0, rel=1e-3)
        assert fisher_action(boltzmann, c) == pytest.approx(0.5, rel=1e-3)

    def test_undefined_slope_raises(self):
        class NanSlope:
            lam = 0.0

            def slope(self, p):
                return math.nan

            def check_point(self, p):
                pass

            def same_space(self, a, b):
                return True

        from entrogeo.errors import SlopeUndefined

        c = Curve.uniform([np.zeros(1)] * 3)
        with pytest.raises(SlopeUndefined):
            fisher_action(NanSlope(), c)

    def test_infinite_endpoint_slopes_are_dropped(self, quad2d):
        class InfEndpoints:
            lam = 0.0

            def slope(self, p):
                return math.inf if p[0] == 0.0 else 1.0

            def check_point(self, p):
                pass

            def same_space(self, a, b):
                return True

        c = Curve.uniform([np.array([0.0]), np.array([1.0]), np.array([0.0])])
        q = fisher_quadrature(InfEndpoints(), c)
        assert q.endpoints_dropped
        assert q.value == pytest.approx(0.25)  # interior trapezoid weight only


class TestSchrodingerAction:
    def test_eps_zero_reduces_to_kinetic(self, quad2d):
        c = segment_curve(quad2d, [0.0, 0.0], [1.0, 1.0], 16)
        assert schrodinger_action(quad2d, c, 0.0) == kinetic_action(quad2d, c)

    def test_constant_curve_composition(self, quad2d):
        c = Curve.uniform([np.array([2.0, 0.0])] * 5)
        assert schrodinger_action(quad2d, c, 1.0) == pytest.approx(2.0, abs=1e-12)

    def test_line_through_potential(self, quad2d):
        # I along the segment 0 -> (1,0) is 1/2 int t^2 dt = 1/6
        c = segment_curve(quad2d, [0.0, 0.0], [1.0, 0.0], 256)
        expected = 0.5 + 0.25 / 6.0
        assert schrodinger_action(quad2d, c, 0.5) == pytest.approx(expected, abs=1e-5)

    def test_negative_eps_rejected(self, quad2d):
        c = segment_curve(quad2d, [0.0, 0.0], [1.0, 0.0], 4)
        with pytest.raises(DomainError):
            schrodinger_action(quad2d, c, -0.1)

    @given(
        e1=st.floats(0.0, 2.0),
        e2=st.floats(0.0, 2.0),
        shift=st.floats(-1.5, 1.5),
    )
    @settings(max_examples=25, deadline=None)
    def test_monotone_in_eps(self, quad2d, e1, e2, shift):
        c = Curve.uniform([np.array([shift, t]) for t in np.linspace(0, 1, 5)])
        lo, hi = sorted((e1, e2))
        assert schrodinger_action(quad2d, c, lo) <= schrodinger_action(quad2d, c, hi) + 1e-12


class TestHatFunction:
    def test_peak_value(self):
        assert hat_eval(HatFunction(0.2, 0.5), 0.5) == pytest.approx(0.2)

    def test_boundary_zeros(self):
        h = HatFunction(0.7, 0.3)
        assert hat_eval(h, 0.0) == 0.0
        assert hat_eval(h, 1.0) == 0.0

    def test_off_peak_interpolation(self):
        # descending branch: eps * (1 - t) / (1 - theta)
        assert hat_eval(HatFunction(0.3, 0.25), 0.5) == pytest.approx(0.2)

    def test_domain_enforced(self):
        with pytest.raises(DomainError):
            hat_eval(HatFunction(0.1, 0.5), 1.5)
        with pytest.raises(DomainError):
            HatFunction(0.1, 0.0)
        with pytest.raises(DomainError):
            HatFunction(-0.1, 0.5)

    def test_with_slope_matches_min_form(self):
        h = HatFunction.with_slope(0.3)
        for t in np.linspace(0, 1, 17):
            assert hat_eval(h, float(t)) == pytest.approx(0.3 * min(t, 1 - t), abs=1e-15)

    @given(eps=st.floats(0.0, 10.0), theta=st.floats(0.01, 0.99))
    @settings(max_examples=50, deadline=None)
    def test_integral_is_half_eps(self, eps, theta):
        # closed form: the triangle with base 1 and height eps has area eps/2
        h = HatFunction(eps, theta)
        area = 0.5 * theta * eps + 0.5 * (1 - theta) * eps
        assert area == pytest.approx(eps / 2, abs=1e-12)
        ts = np.linspace(0, 1, 20001)
        quad = np.trapezoid([hat_eval(h, float(t)) for t in ts], ts)
        assert quad == pytest.approx(eps / 2, rel=1e-6, abs=1e-12)


class TestMetricAxioms:
    def test_euclidean_triples(self, quad2d):
        rng = np.random.default_rng(17)
        for _ in range(25):
            a, b, c = (rng.uniform(-3, 3, 2) for _ in range(3))
            dab = quad2d.distance(a, b)
            assert dab == pytest.approx(quad2d.distance(b, a), abs=1e-12)
            assert dab <= quad2d.distance(a, c) + quad2d.distance(c, b) + 1e-9
            assert quad2d.distance(a, a) == 0.0

    def test_density_triples(self, boltzmann):
        from entrogeo import GridDensity

        rng = np.random.default_rng(23)
        n, dx, x0 = 128, 20.0 / 128, -10.0
        pts = [
            GridDensity.gaussian(rng.uniform(-2, 2), rng.uniform(0.5, 2.0), n, dx, x0)
            for _ in range(6)
        ]
        for a, b, c in ((0, 1, 2), (3, 4, 5), (0, 3, 5), (1, 4, 2)):
            dab = boltzmann.distance(pts[a], pts[b])
            assert dab == pytest.approx(boltzmann.distance(pts[b], pts[a]), abs=1e-12)
            assert dab <= (
                boltzmann.distance(pts[a], pts[c])
                + boltzmann.distance(pts[c], pts[b])
                + 1e-9
            )
