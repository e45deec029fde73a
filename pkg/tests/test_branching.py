import numpy as np
import pytest

from qesquartic import branching
from qesquartic.exactpoly import ExactPoly, resultant
from qesquartic.pointset import PointSet
from qesquartic.spectral import charpoly_bivariate, spectral_polynomial


class TestSigmaPolynomial:
    def test_n1(self, tmp_cache):
        p = branching.sigma_polynomial(1, cache_dir=tmp_cache)
        assert p == ExactPoly([0, 1], "a")

    def test_n2(self, tmp_cache):
        # primitive part of the discriminant of -x^3 + 4ax + 4
        p = branching.sigma_polynomial(2, cache_dir=tmp_cache)
        assert p == ExactPoly([-27, 0, 0, 16], "a")

    @pytest.mark.parametrize("n", [3, 5, 8, 10])
    def test_degree(self, n, tmp_cache):
        p = branching.sigma_polynomial(n, cache_dir=tmp_cache)
        assert p.degree == n * (n + 1) // 2

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_matches_exact_sylvester_route(self, n, tmp_cache):
        # full-polynomial comparison against the fraction-free determinant
        biv = charpoly_bivariate(n)
        raw = resultant(biv, biv.derivative_x(), "x")
        ip, _ = raw._int_form()
        from qesquartic import intpoly

        prim, _ = intpoly.primitive(ip)
        got = branching.sigma_polynomial(n, cache_dir=tmp_cache)
        gip, _ = got._int_form()
        assert prim == gip

    def test_mod3_support(self, tmp_cache):
        for n in (4, 7, 9):
            p = branching.sigma_polynomial(n, cache_dir=tmp_cache)
            nz = [j for j, c in enumerate(p.coeffs) if c != 0]
            assert len({j % 3 for j in nz}) == 1

    def test_conjugation_symmetry_exact(self, tmp_cache):
        for n in (3, 6, 9):
            p = branching.sigma_polynomial(n, cache_dir=tmp_cache)
            assert all(c.denominator == 1 for c in p.coeffs)

    def test_cache_roundtrip(self, tmp_cache):
        a = branching.sigma_polynomial(5, cache_dir=tmp_cache)
        b = branching.sigma_polynomial(5, cache_dir=tmp_cache)
        assert a == b


class TestSigmaPoints:
    def test_n2_values(self, tmp_cache):
        pts = branching.sigma_points(2, cache_dir=tmp_cache).points.points
        m = 3 * 2 ** (-4 / 3)
        w = np.exp(2j * np.pi / 3)
        targets = [m, m * w, m * np.conj(w)]
        dev = max(min(abs(p - t) for t in targets) for p in pts)
        assert dev < 1e-10

    def test_counts_and_columns(self, tmp_cache):
        bs = branching.sigma_points(6, cache_dir=tmp_cache)
        assert len(bs.points.points) == 21
        sizes = {j: bs.cols.count(j) for j in set(bs.cols)}
        assert sizes == {j: j for j in range(1, 7)}

    def test_rows_conjugation(self, tmp_cache):
        bs = branching.sigma_points(5, cache_dir=tmp_cache)
        pts = bs.points.points
        # conjugation closure, exact coefficients => multiset symmetric
        from scipy.optimize import linear_sum_assignment

        D = np.abs(pts[:, None] - np.conj(pts)[None, :])
        ri, ci = linear_sum_assignment(D)
        assert D[ri, ci].max() < 1e-8

    def test_omega_invariance(self, tmp_cache):
        for n in (4, 7):
            pts = branching.sigma_points(n, cache_dir=tmp_cache).points.points
            w = np.exp(2j * np.pi / 3)
            from scipy.optimize import linear_sum_assignment

            D = np.abs(pts[:, None] - (w * pts)[None, :])
            ri, ci = linear_sum_assignment(D)
            assert D[ri, ci].max() < 1e-8

    def test_multiple_root_witness(self, tmp_cache):
        # each branching point forces a near-double eigenvalue
        bs = branching.sigma_points(4, cache_dir=tmp_cache)
        for a0 in bs.points.points[:5]:
            lam = np.roots(
                [complex(c) for c in spectral_polynomial(4, None).eval_a_numeric(complex(a0))][::-1]
            )
            D = np.abs(lam[:, None] - lam[None, :]) + np.diag([np.inf] * len(lam))
            assert D.min() < 1e-4


class TestScaledSigma:
    def test_n2_modulus(self, tmp_cache):
        ps = branching.scaled_sigma(2, cache_dir=tmp_cache)
        expect = 3 * 2 ** (-4 / 3) / ((27 / 4) ** (1 / 3) * 2 ** (2 / 3))
        assert abs(ps.max_modulus() - expect) < 1e-10

    def test_growth_trend(self, tmp_cache):
        r5 = branching.scaled_sigma(5, cache_dir=tmp_cache).max_modulus()
        r10 = branching.scaled_sigma(10, cache_dir=tmp_cache).max_modulus()
        assert r5 < r10 < 1.0


class TestCompareSets:
    def test_identical(self):
        ps = PointSet(np.array([1 + 1j, 2 - 1j, 0j]))
        rep = branching.compare_sets(ps, ps)
        assert rep["hausdorff"] == 0
        assert rep["mean_nn"] == 0
        assert rep["assignment_cost"] == 0

    def test_unit_offset(self):
        rep = branching.compare_sets(
            PointSet(np.array([0j])), PointSet(np.array([1 + 0j]))
        )
        assert rep["hausdorff"] == 1.0
        assert rep["assignment_cost"] == 1.0

    def test_cardinality_mismatch(self):
        rep = branching.compare_sets(
            PointSet(np.array([0j, 1j])), PointSet(np.array([0j]))
        )
        assert rep["card_a"] == 2 and rep["card_b"] == 1
        assert rep["assignment_cost"] is None


class TestLatticeProbe:
    def test_empty_window(self, tmp_cache):
        rep = branching.lattice_probe(4, (100, 101, 100, 101), cache_dir=tmp_cache)
        assert rep["count_a"] == 0

    def test_drift_shrinks(self, tmp_cache):
        # stabilization trend: drift near the origin shrinks as n grows
        w = (-1.5, 1.5, -1.5, 1.5)
        r_small = branching.lattice_probe(5, w, cache_dir=tmp_cache)
        r_big = branching.lattice_probe(10, w, cache_dir=tmp_cache)
        assert r_small["count_a"] > 0 and r_big["count_a"] > 0
        assert r_big["mean_drift"] < r_small["mean_drift"]


def test_scaling_constants_identity():
    assert branching.scaling_constants_agree()
    assert (27 / 4) ** (1 / 3) == pytest.approx(3 / 4 ** (1 / 3), rel=1e-15)


def test_indexing_failure_is_lazy():
    # points remain usable when band clustering degrades; only grid consumers
    # must see the failure
    from qesquartic.errors import IndexingAmbiguity
    from qesquartic.pointset import PointSet

    bs = branching.BranchSet(
        n=3, disc_poly=ExactPoly([0, 1], "a"),
        points=PointSet(np.array([0j])), indexing_error="bands merged",
    )
    assert len(bs.points.points) == 1
    with pytest.raises(IndexingAmbiguity):
        bs.require_grid()
