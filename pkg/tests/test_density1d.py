import math

import numpy as np
import pytest
from scipy.stats import norm

from entrogeo import (
    EntropyKind,
    GridDensity,
    density_from_csv,
    density_to_csv,
    w2_distance,
    w2_geodesic,
)
from entrogeo.density1d import entropy, flow, slope
from entrogeo.errors import DomainError, GridMismatch

from conftest import WIDE, gaussian_on

KB = EntropyKind.boltzmann()
KP = EntropyKind.porous_medium(2.0)


def l1(a, b):
    return float(np.sum(np.abs(a.rho - b.rho)) * a.dx)


class TestGridDensity:
    def test_mass_invariant_enforced(self):
        with pytest.raises(DomainError):
            GridDensity(np.full(8, 1.0), dx=1.0)  # mass 8

    def test_floor_enforced(self):
        rho = np.full(8, 0.125)
        rho[0] = 0.0
        with pytest.raises(DomainError):
            GridDensity(rho, dx=1.0)

    def test_normalize_projects(self):
        d = GridDensity(np.arange(1.0, 9.0), dx=0.5, normalize=True)
        assert abs(d.rho.sum() * d.dx - 1.0) <= 1e-12
        assert np.all(d.rho >= d.floor)

    def test_csv_round_trip(self, tmp_path):
        d = gaussian_on(WIDE, 0.3, 1.1)
        path = tmp_path / "density.csv"
        density_to_csv(d, path)
        back = density_from_csv(path)
        assert back.n == d.n
        assert back.dx == pytest.approx(d.dx, rel=1e-12)
        assert l1(back, d) <= 1e-12


class TestW2Distance:
    def test_identity(self):
        a = gaussian_on(WIDE, 0.0, 1.0)
        assert w2_distance(a, a) == 0.0

    def test_aligned_translation_exact(self):
        # a shift by a whole number of cells is represented exactly
        n, dx, x0 = 448, 1.0 / 32, -6.0
        a = GridDensity.gaussian(0.0, 1.0, n, dx, x0)
        b = a.with_rho(np.roll(a.rho, 48))
        assert w2_distance(a, b) == pytest.approx(48 * dx, abs=1e-6)

    def test_generic_translation(self):
        a = gaussian_on(WIDE, -1.0, 1.0)
        b = gaussian_on(WIDE, 0.3, 1.0)
        assert w2_distance(a, b) == pytest.approx(1.3, abs=1e-4)

    def test_gaussian_closed_form(self):
        # W2(N(0,1), N(2, 1.5^2))^2 = (m0-m1)^2 + (s0-s1)^2 = 4.25; the
        # quantile-quadrature oracle below re-derives it independently
        n, dx, x0 = 512, 22.0 / 512, -10.0
        a = GridDensity.gaussian(0.0, 1.0, n, dx, x0)
        b = GridDensity.gaussian(2.0, 1.5, n, dx, x0)
        u = (np.arange(200000) + 0.5) / 200000
        oracle = math.sqrt(np.mean((norm.ppf(u, 0, 1) - norm.ppf(u, 2, 1.5)) ** 2))
        assert oracle == pytest.approx(math.sqrt(4.25), abs=1e-4)
        assert w2_distance(a, b) == pytest.approx(math.sqrt(4.25), abs=1e-3)

    def test_grid_mismatch_rejected(self):
        a = gaussian_on(WIDE, 0.0, 1.0)
        b = GridDensity.gaussian(0.0, 1.0, 256, 20.0 / 256, -10.0)
        with pytest.raises(GridMismatch):
            w2_distance(a, b)

    def test_periodic_tight_translate(self):
        # sigma small enough that no mass reaches the seam: the circle
        # distance coincides with the rigid rotation cost
        n, dx = 384, 1.0 / 32
        a = GridDensity.gaussian(0.0, 0.5, n, dx, x0=-6.0, boundary="periodic")
        b = a.with_rho(np.roll(a.rho, 64))
        assert w2_distance(a, b) == pytest.approx(2.0, abs=1e-6)

    def test_periodic_wraps_the_short_way(self):
        n, dx = 256, 1.0 / 32
        a = GridDensity.gaussian(0.0, 0.3, n, dx, x0=-4.0, boundary="periodic")
        b = a.with_rho(np.roll(a.rho, -32))  # shift -1, i.e. 7 the long way
        assert w2_distance(a, b) == pytest.approx(1.0, abs=1e-6)


class TestW2Geodesic:
    def test_endpoints_rebinned_exactly(self):
        a = gaussian_on(WIDE, 0.0, 1.0)
        b = gaussian_on(WIDE, 2.0, 1.5)
        assert l1(w2_geodesic(a, b, 0.0), a) <= 1e-6
        assert l1(w2_geodesic(a, b, 1.0), b) <= 1e-6

    def test_gaussian_midpoint(self):
        a = gaussian_on(WIDE, 0.0, 1.0)
        b = gaussian_on(WIDE, 2.0, 1.0)
        mid = w2_geodesic(a, b, 0.5)
        assert l1(mid, gaussian_on(WIDE, 1.0, 1.0)) <= 1e-3

    def test_constant_speed(self):
        a = gaussian_on(WIDE, 0.0, 1.0)
        b = gaussian_on(WIDE, 2.0, 1.5)
        d = w2_distance(a, b)
        for th1, th2 in ((0.0, 0.25), (0.25, 0.75), (0.5, 1.0)):
            g1 = w2_geodesic(a, b, th1)
            g2 = w2_geodesic(a, b, th2)
            assert w2_distance(g1, g2) == pytest.approx((th2 - th1) * d, rel=1e-3)

    def test_periodic_geodesic_rotates(self):
        n, dx = 256, 1.0 / 32
        a = GridDensity.gaussian(0.0, 0.4, n, dx, x0=-4.0, boundary="periodic")
        b = a.with_rho(np.roll(a.rho, 64))
        mid = w2_geodesic(a, b, 0.5)
        ref = a.with_rho(np.roll(a.rho, 32))
        assert l1(mid, ref) <= 5e-3  # re-binning error at dx/sigma ~ 0.08
        d = w2_distance(a, b)
        assert w2_distance(a, mid) == pytest.approx(0.5 * d, rel=1e-3)


class TestEntropy:
    def test_uniform_boltzmann(self):
        d = GridDensity.uniform(64, 0.25)  # L = 16
        assert entropy(KB, d) == pytest.approx(-math.log(16.0), abs=1e-12)

    def test_uniform_porous(self):
        d = GridDensity.uniform(64, 0.25)
        assert entropy(KP, d) == pytest.approx(1.0 / 16.0, abs=1e-12)

    def test_gaussian_differential_entropy(self):
        d = gaussian_on(WIDE, 0.0, 1.0)
        assert entropy(KB, d) == pytest.approx(-0.5 * math.log(2 * math.pi * math.e), abs=1e-3)


class TestSlope:
    def test_uniform_is_flat(self):
        d = GridDensity.uniform(64, 0.25)
        assert slope(KB, d) == 0.0
        assert slope(KP, d) == 0.0

    @pytest.mark.parametrize("sigma", [0.5, 1.0, 2.0])
    def test_gaussian_fisher_information(self, sigma):
        d = gaussian_on(WIDE, 0.0, sigma)
        assert slope(KB, d) ** 2 == pytest.approx(1.0 / sigma**2, rel=1e-3)

    def test_porous_sine_density_vs_quadrature_oracle(self):
        # rho = (1 + sin(2 pi x)/2) on the unit circle; slope^2 for U_2 is
        # int |2 rho'|^2 rho dx = 2 pi^2, re-derived by dense quadrature
        n = 256
        d = GridDensity.from_function(
            lambda x: 1.0 + 0.5 * np.sin(2 * np.pi * x), n, 1.0 / n,
            boundary="periodic",
        )
        xs = np.linspace(0.0, 1.0, 200001)
        rho = 1.0 + 0.5 * np.sin(2 * np.pi * xs)
        drho = np.gradient(rho, xs)
        oracle = np.trapezoid((2.0 * drho) ** 2 * rho, xs)
        assert oracle == pytest.approx(2.0 * math.pi**2, rel=1e-6)
        assert slope(KP, d) ** 2 == pytest.approx(oracle, rel=1e-3)


class TestFlow:
    def test_zero_time_identity(self):
        d = gaussian_on(WIDE, 0.0, 1.0)
        assert flow(KB, d, 0.0) is d

    @pytest.mark.parametrize("s", [0.1, 0.25, 0.5])
    def test_heat_variance_law(self, s):
        d = gaussian_on(WIDE, 0.0, 1.0)
        evolved = flow(KB, d, s)
        ref = gaussian_on(WIDE, 0.0, math.sqrt(1.0 + 2.0 * s))
        assert l1(evolved, ref) <= 1e-3

    def test_entropy_strictly_decreasing(self):
        d = gaussian_on(WIDE, 0.0, 1.0)
        vals = [entropy(KB, flow(KB, d, s)) for s in (0.0, 0.05, 0.1, 0.2)]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_porous_entropy_strictly_decreasing(self):
        d = gaussian_on(WIDE, 0.0, 1.0)
        vals = [entropy(KP, flow(KP, d, s)) for s in (0.0, 0.05, 0.1, 0.2)]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_mass_conserved(self):
        d = gaussian_on(WIDE, 1.0, 0.8)
        out = flow(KB, d, 0.3)
        assert abs(out.rho.sum() * out.dx - 1.0) <= 1e-12

    def test_grid_refinement_self_consistency(self):
        # doubling n changes the entropy of the evolved state by < 1e-3 rel
        coarse = GridDensity.gaussian(0.0, 1.0, 256, 20.0 / 256, -10.0)
        fine = GridDensity.gaussian(0.0, 1.0, 512, 20.0 / 512, -10.0)
        ec = entropy(KB, flow(KB, coarse, 0.2))
        ef = entropy(KB, flow(KB, fine, 0.2))
        assert ec == pytest.approx(ef, rel=1e-3)

    def test_periodic_heat_flow_to_uniform(self):
        n = 128
        d = GridDensity.from_function(
            lambda x: 1.0 + 0.9 * np.sin(2 * np.pi * x), n, 1.0 / n,
            boundary="periodic",
        )
        out = flow(KB, d, 1.0)
        assert l1(out, GridDensity.uniform(n, 1.0 / n, boundary="periodic")) <= 1e-3


class TestFlowInvariants:
    def test_w2_contraction_boltzmann(self, boltzmann):
        a = gaussian_on(WIDE, -1.0, 0.8)
        b = gaussian_on(WIDE, 1.5, 1.2)
        for s in (0.05, 0.1, 0.2):
            lhs = w2_distance(flow(KB, a, s), flow(KB, b, s))
            assert lhs <= w2_distance(a, b) + 2e-3

    def test_w2_contraction_porous(self, porous2):
        a = gaussian_on(WIDE, -1.0, 0.8)
        b = gaussian_on(WIDE, 1.5, 1.2)
        for s in (0.05, 0.1, 0.2):
            lhs = w2_distance(flow(KP, a, s), flow(KP, b, s))
            assert lhs <= w2_distance(a, b) + 2e-3

    @pytest.mark.parametrize("kind", [KB, KP], ids=["boltzmann", "porous"])
    def test_energy_dissipation_equality(self, kind):
        d = gaussian_on(WIDE, 0.5, 0.9)
        T, K = 0.2, 64
        ss = np.linspace(0.0, T, K + 1)
        cur = d
        slopes = [slope(kind, cur)]
        for ds in np.diff(ss):
            cur = flow(kind, cur, float(ds))
            slopes.append(slope(kind, cur))
        dissipated = np.trapezoid(np.array(slopes) ** 2, ss)
        drop = entropy(kind, d) - entropy(kind, cur)
        assert dissipated == pytest.approx(drop, rel=2e-2)

    def test_slope_monotone_along_flow(self):
        d = GridDensity.from_function(
            lambda x: np.exp(-0.5 * ((x + 2) / 0.5) ** 2) + 0.7 * np.exp(-0.5 * ((x - 1) / 0.8) ** 2),
            **WIDE,
        )
        vals = []
        cur = d
        for ds in np.diff(np.linspace(0.0, 0.2, 9)):
            cur = flow(KB, cur, float(ds))
            vals.append(slope(KB, cur))
        assert all(b <= a + 1e-6 for a, b in zip(vals, vals[1:]))

    def test_regularization_bound(self):
        x = GridDensity.from_function(
            lambda q: np.exp(-0.5 * ((q + 2) / 0.4) ** 2) + np.exp(-0.5 * ((q - 2) / 0.6) ** 2),
            **WIDE,
        )
        y = gaussian_on(WIDE, 0.0, 1.0)
        sy2 = slope(KB, y) ** 2
        d2 = w2_distance(x, y) ** 2
        for t in (0.05, 0.1, 0.2):
            lhs = slope(KB, flow(KB, x, t)) ** 2
            assert lhs <= sy2 + d2 / t**2 + 5e-3

    @pytest.mark.parametrize("kind", [KB, KP], ids=["boltzmann", "porous"])
    def test_displacement_convexity(self, kind):
        pairs = [
            (gaussian_on(WIDE, -1.0, 0.7), gaussian_on(WIDE, 1.5, 1.3)),
            (gaussian_on(WIDE, 0.0, 0.5), gaussian_on(WIDE, 2.0, 2.0)),
        ]
        for a, b in pairs:
            ea, eb = entropy(kind, a), entropy(kind, b)
            for th in np.linspace(0.0, 1.0, 9):
                e_mid = entropy(kind, w2_geodesic(a, b, float(th)))
                assert e_mid <= (1 - th) * ea + th * eb + 1e-3
