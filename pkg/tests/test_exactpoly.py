import random
from fractions import Fraction

import pytest

from qesquartic import intpoly
from qesquartic.errors import NotDivisible, NotSquarefree
from qesquartic.exactpoly import (
    BivariatePoly,
    ExactPoly,
    discriminant,
    exact_div,
    real_roots,
    resultant,
)

from oracles import numpy_real_root_count, sylvester_det_by_hand


def P(*coeffs):
    return ExactPoly(list(coeffs))


class TestExactDiv:
    def test_monomial(self):
        # (t^3 + 4t) / t
        assert exact_div(P(0, 4, 0, 1), P(0, 1)) == P(4, 0, 1)

    def test_yv_step_quotient(self):
        # frozen from the degree-3 recursion step: (t^7 + 20 t^4 - 80 t) / t
        assert exact_div(P(0, -80, 0, 0, 20, 0, 0, 1), P(0, 1)) == \
            P(-80, 0, 0, 20, 0, 0, 1)

    def test_remainder_raises(self):
        with pytest.raises(NotDivisible):
            exact_div(P(1, 0, 1), P(1, 1))

    def test_roundtrip_random(self):
        rng = random.Random(3)
        for _ in range(60):
            p = P(*[Fraction(rng.randint(-9, 9), rng.randint(1, 4))
                    for _ in range(rng.randint(1, 7))] + [1])
            q = P(*[Fraction(rng.randint(-9, 9), rng.randint(1, 4))
                    for _ in range(rng.randint(1, 6))] + [1])
            assert exact_div(p * q, q) == p


class TestResultant:
    def test_linear_pair(self):
        # res_x(x - a, x + a) = 2a
        p = BivariatePoly([[0, -1], [1]])
        q = BivariatePoly([[0, 1], [1]])
        assert resultant(p, q, "x") == ExactPoly([0, 2], "a")

    def test_quadratic_with_derivative(self):
        # res_x(x^2 - a, 2x): the 3x3 Sylvester determinant is -4a
        # (hand oracle below confirms the sign of the raw determinant)
        p = BivariatePoly([[0, -1], [], [1]])
        q = BivariatePoly([[], [2]])
        assert resultant(p, q, "x") == ExactPoly([0, -4], "a")
        hand = sylvester_det_by_hand([-5, 0, 1], [0, 2])   # a = 5
        assert hand == -4 * 5

    def test_cubic_discriminant_pattern(self):
        # res_x(x^3 - 4a x - 4, 3x^2 - 4a) = -(256 a^3 - 432)
        p = BivariatePoly([[-4], [0, -4], [], [1]])
        q = BivariatePoly([[0, -4], [], [3]])
        assert resultant(p, q, "x") == ExactPoly([432, 0, 0, -256], "a")

    def test_univariate_matches_hand_oracle(self):
        rng = random.Random(11)
        for _ in range(40):
            p = [rng.randint(-6, 6) for _ in range(rng.randint(1, 5))] + [rng.randint(1, 5)]
            q = [rng.randint(-6, 6) for _ in range(rng.randint(1, 5))] + [rng.randint(1, 5)]
            got = resultant(ExactPoly(p), ExactPoly(q))
            assert got == sylvester_det_by_hand(p, q)

    def test_discriminant_detects_multiple_roots(self):
        rng = random.Random(5)
        for _ in range(25):
            # build a polynomial with a known double root r
            r = rng.randint(-5, 5)
            s = rng.randint(-5, 5)
            p = ExactPoly([r * r, -2 * r, 1]) * ExactPoly([-s, 1])
            assert discriminant(p) == 0
            # and a squarefree one with distinct roots
            roots = rng.sample(range(-20, 20), 3)
            q = ExactPoly([1])
            for rt in roots:
                q = q * ExactPoly([-rt, 1])
            assert discriminant(q) != 0


class TestRealRoots:
    def test_simple_quadratic(self):
        count, ivs = real_roots(P(-1, 0, 1), -2, 2)
        assert count == 2
        for (a, b), root in zip(ivs, (-1, 1)):
            assert a < root <= b

    def test_no_real_roots(self):
        assert real_roots(P(1, 0, 1))[0] == 0

    def test_shifted_linear(self):
        # the l=1 member of the zero-parameter family at n=5: xi + 40
        count, ivs = real_roots(P(40, 1), lo=None, hi=0)
        assert count == 1

    def test_not_squarefree(self):
        with pytest.raises(NotSquarefree) as exc:
            real_roots(P(1, 2, 1))
        assert exc.value.gcd_factor is not None
        assert exc.value.gcd_factor.degree == 1

    def test_count_matches_numpy_oracle(self):
        rng = random.Random(17)
        for _ in range(30):
            roots = rng.sample(range(-30, 30), rng.randint(1, 6))
            coeffs = [1]
            p = ExactPoly([1])
            for rt in roots:
                p = p * ExactPoly([-rt, 1])
            lo, hi = -40, 40
            count, _ = real_roots(p, lo, hi)
            ip, _ = p._int_form()
            assert count == numpy_real_root_count(ip, lo, hi) == len(roots)


class TestBivariate:
    def test_degrees(self):
        b = BivariatePoly([[4], [0, 4], [], [-1]])
        assert b.x_degree == 3
        assert b.a_degree == 1
        assert b.total_degree == 3

    def test_eval_matches_grid(self):
        b = BivariatePoly([[4], [0, 4], [], [-1]])
        p = b.eval_a(Fraction(3, 2))
        assert p == ExactPoly([4, 6, 0, -1])


class TestKroneckerMultiplication:
    def test_matches_schoolbook(self):
        rng = random.Random(23)
        for _ in range(80):
            p = [rng.randint(-10**6, 10**6) for _ in range(rng.randint(33, 70))]
            q = [rng.randint(-10**6, 10**6) for _ in range(rng.randint(33, 70))]
            ref = [0] * (len(p) + len(q) - 1)
            for i, a in enumerate(p):
                for j, b in enumerate(q):
                    ref[i + j] += a * b
            while ref and ref[-1] == 0:
                ref.pop()
            assert intpoly.mul(p, q) == ref

    def test_borrow_rollover(self):
        # sparse structured products exercise the digit-rollover path
        p = [-80, 0, 0, 20, 0, 0, 1] * 7
        q = list(p)
        naive = [0] * (len(p) + len(q) - 1)
        for i, a in enumerate(p):
            for j, b in enumerate(q):
                naive[i + j] += a * b
        while naive and naive[-1] == 0:
            naive.pop()
        assert intpoly._mul_kronecker(p, q) == naive


def test_degree_cap():
    from qesquartic.errors import DegreeCapExceeded

    with pytest.raises(DegreeCapExceeded):
        intpoly.mul([1] * 60_000, [1] * 60_000)
