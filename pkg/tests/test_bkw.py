from fractions import Fraction

import numpy as np
import pytest

from qesquartic import bkw
from qesquartic.errors import InsideSupport


class TestCharacteristicRoots:
    def test_large_beta_dominant_balance(self):
        r = bkw.characteristic_roots(1000.0, 1.0, 0.3)
        assert abs(r[0] + 1000.0) < 0.1          # ~ -beta
        assert abs(r[1]) < 0.1 and abs(r[2]) < 0.1

    def test_tau_zero_degenerate(self):
        # the double root at 0 carries the usual sqrt(eps) closed-form noise
        r = bkw.characteristic_roots(5.0, 0.0, 0.0)
        assert abs(r[0] + 5.0) < 1e-12
        assert abs(r[1]) < 1e-7 and abs(r[2]) < 1e-7

    def test_double_root_at_branch_point(self):
        # real branch point at tau=1/2 for the zero-parameter case is 3/4
        r = bkw.characteristic_roots(0.75, 0.0, 0.5)
        assert abs(abs(r[0]) - abs(r[1])) < 1e-9

    def test_roots_satisfy_cubic(self):
        rng = np.random.RandomState(2)
        for _ in range(50):
            beta = complex(*rng.randn(2))
            a = complex(*rng.randn(2))
            tau = rng.rand()
            T = tau * (1 - tau)
            for psi in bkw.characteristic_roots(beta, a, tau):
                val = psi**3 + beta * psi**2 + a * T * psi - T * T
                assert abs(val) < 1e-9 * (1 + abs(psi)) ** 3


class TestSupportMembership:
    def test_on_leg(self):
        assert bkw.support_membership(0.5, 0, 0.5)

    def test_beyond_branch_point(self):
        assert not bkw.support_membership(1.0, 0, 0.5)

    def test_tau_zero_never(self):
        assert not bkw.support_membership(0.7, 0, 0.0)

    def test_tol_validation(self):
        with pytest.raises(ValueError):
            bkw.support_membership(0.5, 0, 0.5, tol=0)


class TestBranchPoints:
    def test_zero_parameter(self):
        bp = bkw.branch_points(0, 0.5)
        w = np.exp(2j * np.pi / 3)
        targets = [0.75, 0.75 * w, 0.75 * np.conj(w)]
        dev = max(min(abs(b - t) for t in targets) for b in bp)
        assert dev < 1e-12

    def test_degenerate_tau(self):
        for tau in (0.0, 1.0):
            bp = bkw.branch_points(2.0, tau)
            # equation collapses to 4 b^3 + a^2 b^2 = 0: roots 0, 0, -a^2/4
            assert sorted(np.abs(bp)) == pytest.approx([0, 0, 1.0], abs=1e-9)

    def test_a3_all_real(self):
        bp = bkw.branch_points(3.0, 0.5)
        assert np.abs(bp.imag).max() < 1e-10

    def test_roots_kill_cubic_discriminant(self):
        rng = np.random.RandomState(7)
        for _ in range(20):
            a = complex(*rng.randn(2))
            tau = float(rng.uniform(0.05, 0.95))
            T = tau * (1 - tau)
            for b in bkw.branch_points(a, tau):
                # cubic in Psi at this beta must have a double root
                r = bkw.characteristic_roots(b, a, tau)
                gaps = sorted(
                    abs(r[i] - r[j]) for i in range(3) for j in range(i + 1, 3)
                )
                assert gaps[0] < 1e-6 * (1 + max(abs(x) for x in r))


class TestDsc:
    def test_degenerate_tau(self):
        assert bkw.dsc(1.7, 0.0) == 0
        assert bkw.dsc(1.7, 1.0) == 0

    def test_threshold_value_exact(self):
        assert bkw.dsc_exact(Fraction(27, 4), Fraction(1, 2)) == 0

    def test_a3_value(self):
        expect = 16 * 0.25 * (27 - 27 / 4) ** 3
        assert bkw.dsc(3.0, 0.5).real == pytest.approx(expect, rel=1e-12)

    def test_matches_resultant_discriminant(self):
        # cross-check: dsc vanishes exactly where the branch cubic has a
        # double root (sampled)
        for a in (1.0, 2.2):
            for tau in (0.3, 0.5):
                d = bkw.dsc(a, tau)
                bp = bkw.branch_points(a, tau)
                gaps = sorted(
                    abs(bp[i] - bp[j]) for i in range(3) for j in range(i + 1, 3)
                )
                if abs(d) < 1e-12:
                    assert gaps[0] < 1e-6
                else:
                    assert gaps[0] > 1e-6


class TestSupportEndpoints:
    def test_zero_parameter(self):
        ep = bkw.support_endpoints(0)
        assert np.abs(np.abs(ep) - 0.75).max() < 1e-12

    def test_threshold_double(self):
        a = 3 / 4 ** (1 / 3)
        ep = bkw.support_endpoints(a)
        gaps = sorted(abs(ep[i] - ep[j]) for i in range(3) for j in range(i + 1, 3))
        assert gaps[0] < 1e-6

    def test_identity_with_branch_points_numeric(self):
        rng = np.random.RandomState(3)
        for _ in range(20):
            a = complex(*rng.randn(2))
            ep = sorted(bkw.support_endpoints(a), key=lambda z: (z.real, z.imag))
            bp = sorted(bkw.branch_points(a, 0.5), key=lambda z: (z.real, z.imag))
            assert max(abs(x - y) for x, y in zip(ep, bp)) < 1e-9

    def test_identity_exact(self):
        assert bkw.branch_cubic_coeffs_in_a(Fraction(1, 2)) == \
            bkw.endpoint_cubic_coeffs_in_a()


class TestCauchyNu:
    def test_far_field_mass(self):
        for beta in (40.0, 60j, -35 + 20j):
            c = bkw.cauchy_nu(beta, 0)
            assert abs(c - 1 / beta) < 1e-3 / abs(beta)

    def test_real_on_real_axis(self):
        c = bkw.cauchy_nu(2.5, 3.0)
        assert abs(c.imag) < 1e-10

    def test_inside_support_raises(self):
        with pytest.raises(InsideSupport):
            bkw.cauchy_nu(0.4, 0)

    def test_branch_satisfies_cubic(self):
        for tau in (0.21, 0.5, 0.83):
            T = tau * (1 - tau)
            for beta in (2.0 + 0.5j, -1.5 + 1.2j):
                psi = bkw.psi_branch(beta, 0.7, tau)
                val = psi**3 + beta * psi**2 + 0.7 * T * psi - T * T
                assert abs(val) < 1e-12


class TestUnionSupport:
    def test_zero_parameter_legs(self):
        sup = bkw.union_support(0, tau_grid=[0.2, 0.35, 0.5], grid_size=31)
        pts = sup.union
        assert len(pts) > 30
        args = np.angle(pts[np.abs(pts) > 1e-6])
        k = np.round(args / (2 * np.pi / 3))
        # refined points sit on the three rays, inside the leg length
        assert np.abs(args - k * 2 * np.pi / 3).max() < 1e-6
        assert np.abs(pts).max() < 0.75 + 1e-6

    def test_refined_points_pass_membership(self):
        a = 1 + 1j
        sup = bkw.union_support(a, tau_grid=[0.3, 0.5], grid_size=25)
        for t, pts in sup.per_tau.items():
            for b in pts[:12]:
                assert bkw.support_membership(b, a, t)

    def test_endpoint_markers(self):
        sup = bkw.union_support(0, tau_grid=[0.5], grid_size=21)
        ep = sup.endpoints[0.5]
        assert np.abs(np.abs(ep) - 0.75).max() < 1e-9

    def test_real_interval_a3(self):
        lo, hi = bkw.real_support_interval(3.0, refine_tol=1e-8)
        ep = sorted(bkw.support_endpoints(3.0).real)
        assert abs(lo - ep[1]) < 1e-6
        assert abs(hi - ep[2]) < 1e-6


class TestRecurrenceRoots:
    def test_tau_zero(self):
        ps = bkw.recurrence_roots(0.0, 0, 10)
        assert len(ps.points) == 10
        assert np.abs(ps.points).max() == 0

    def test_rays_and_radius(self):
        ps = bkw.recurrence_roots(0.5, 0, 90)
        pts = ps.points
        args = np.angle(pts[np.abs(pts) > 1e-10])
        k = np.round(args / (2 * np.pi / 3))
        assert np.abs(args - k * 2 * np.pi / 3).max() < 1e-6
        assert np.abs(pts).max() < 0.75 + 1e-3

    def test_tau_quarter_radius(self):
        ps = bkw.recurrence_roots(0.25, 0, 120)
        limit = (27 / 4 * (0.25 * 0.75) ** 2) ** (1 / 3)
        assert np.abs(ps.points).max() < limit + 1e-3
        assert np.abs(ps.points).max() > limit - 0.05

    def test_kmax_validation(self):
        with pytest.raises(ValueError):
            bkw.recurrence_roots(0.5, 0, 2)
