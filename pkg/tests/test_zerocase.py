import pytest

from qesquartic.errors import MultipleRoot
from qesquartic.exactpoly import ExactPoly
from qesquartic.spectral import spectral_polynomial
from qesquartic.zerocase import (
    certify_all,
    certify_interlacing,
    factor_structure,
    pqr_matches_factor,
    pqr_sequences,
)


def xi_poly(*coeffs):
    return ExactPoly(list(coeffs), "xi")


class TestPQRSequences:
    @pytest.mark.parametrize("n", [3, 5, 6, 9, 14])
    def test_first_triple(self, n):
        t = pqr_sequences(n)[1]
        assert t.P == xi_poly(2 * n * n - 2 * n, 1)
        assert t.Q == xi_poly(8 * n * n - 20 * n + 12, 1)
        assert t.R == xi_poly(20 * n * n - 80 * n + 84, 1)

    def test_monic_degrees(self):
        for n in (6, 10, 13):
            for tr in pqr_sequences(n):
                for fam in (tr.P, tr.Q, tr.R):
                    assert fam.degree == tr.l
                    assert fam.leading() == 1

    def test_positive_coefficients(self):
        for n in (9, 12):
            for tr in pqr_sequences(n):
                if 3 * tr.l > n:
                    continue
                for fam in (tr.P, tr.Q, tr.R):
                    assert all(c > 0 for c in fam.coeffs)


class TestFactorStructure:
    def test_n2(self):
        r, q = factor_structure(2)
        assert r == 0
        assert q == xi_poly(-4, 1)

    def test_n1(self):
        r, q = factor_structure(1)
        assert r == 2
        assert q == ExactPoly.one("xi")

    def test_n3(self):
        r, q = factor_structure(3)
        assert r == 1
        assert q.degree == 1
        # the brute-force determinant gives x^4 - 24x, i.e. q = xi - 24
        assert q == xi_poly(-24, 1)

    @pytest.mark.parametrize("n", list(range(1, 30)))
    def test_reconstruction(self, n):
        r, q = factor_structure(n)
        rebuilt = q.compose_cube().shift_up(r) * ((-1) ** (n + 1))
        assert rebuilt == spectral_polynomial(n, 0)

    @pytest.mark.parametrize("n", list(range(1, 25)))
    def test_matches_triple_convention(self, n):
        assert pqr_matches_factor(n)


class TestInterlacing:
    def test_quadratic_pair(self):
        v = certify_interlacing(xi_poly(1, 3, 1), xi_poly(1, 1))
        assert v == "interlacing-with-largest-in-p"

    def test_no_real_roots(self):
        v = certify_interlacing(xi_poly(1, 0, 1), xi_poly(0, 1))
        assert v == "not-interlacing"

    def test_recurrence_pair_n6(self):
        tr = pqr_sequences(6)
        v = certify_interlacing(tr[2].P, tr[1].P)
        assert v == "interlacing-with-largest-in-p"

    def test_multiple_root_raises(self):
        with pytest.raises(MultipleRoot):
            certify_interlacing(xi_poly(1, 2, 1), xi_poly(1, 1))

    def test_wrong_order_detected(self):
        # same roots, swapped ownership of the largest
        assert certify_interlacing(xi_poly(2, 1), xi_poly(1, 1)) == "not-interlacing"
        assert certify_interlacing(xi_poly(1, 1), xi_poly(2, 1)) == \
            "interlacing-with-largest-in-p"


class TestCertifyAll:
    @pytest.mark.parametrize("n", [7, 18, 33])
    def test_everything_holds(self, n):
        rec = certify_all(n)
        assert rec["structure_ok"]
        for e in rec["pqr"]:
            for key, val in e.items():
                if key == "l":
                    continue
                assert val is True or val in (
                    "interlacing-with-largest-in-p", "degenerate-equal"
                ), (n, e)

    def test_report_shape(self):
        rec = certify_all(9)
        assert rec["n"] == 9
        assert len(rec["pqr"]) == 3
        assert rec["seconds"] >= 0
