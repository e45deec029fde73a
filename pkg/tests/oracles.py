"""Independent brute-force oracles used to freeze expected test values.

Nothing here shares an algorithm with the package paths it checks: the
Sylvester determinant is expanded by hand-style elimination over Fractions,
determinants come from permutation-free cofactor recursion on dense lists,
and root counting falls back to numpy with wide margins.
"""

from fractions import Fraction

import numpy as np


def dense_det_fraction(M):
    """Cofactor-expansion determinant of a small matrix of Fractions."""
    m = len(M)
    if m == 1:
        return M[0][0]
    total = Fraction(0)
    for j in range(m):
        if M[0][j] == 0:
            continue
        sub = [row[:j] + row[j + 1 :] for row in M[1:]]
        term = M[0][j] * dense_det_fraction(sub)
        total += term if j % 2 == 0 else -term
    return total


def sylvester_det_by_hand(p, q):
    """Resultant as the cofactor determinant of the Sylvester matrix
    (p's coefficients in the top rows, descending powers)."""
    dp, dq = len(p) - 1, len(q) - 1
    n = dp + dq
    M = [[Fraction(0)] * n for _ in range(n)]
    prow = [Fraction(c) for c in reversed(p)]
    qrow = [Fraction(c) for c in reversed(q)]
    for i in range(dq):
        for j, c in enumerate(prow):
            M[i][i + j] = c
    for i in range(dp):
        for j, c in enumerate(qrow):
            M[dq + i][i + j] = c
    return dense_det_fraction(M)


def numpy_real_root_count(coeffs, lo, hi, imag_tol=1e-7):
    """Real roots of an integer poly in (lo, hi], via numpy with margins."""
    cs = [float(c) for c in coeffs]
    roots = np.roots(cs[::-1])
    count = 0
    for r in roots:
        if abs(r.imag) < imag_tol and lo < r.real <= hi:
            count += 1
    return count
