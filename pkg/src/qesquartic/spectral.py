"""The banded spectral family: matrices, characteristic polynomials, spectra.

The (n+1)x(n+1) matrix has subdiagonal (n, n-1, ..., 1), zero diagonal,
first superdiagonal (a, 2a, ..., na) and second superdiagonal
(2, 6, 12, ..., n(n-1)).  Its characteristic polynomial is always computed
through the 4-term principal-minor recurrence

    D^(k) = -x D^(k-1) - (k-1)(n-k+2) a D^(k-2)
            + (n-k+2)(n-k+3)(k-1)(k-2) D^(k-3),

with D^(-2) = D^(-1) = 0, D^(0) = 1, never by determinant expansion.

Spectra: dense LAPACK eigensolve is accurate for this nonnormal family only
up to n ~ 80 in double precision (measured; the spectrum degrades from 1e-7
around n=90 to complete garbage at n=150).  Above the threshold, eigenvalues
are computed as roots of the exact characteristic polynomial with the staged
multiprecision Aberth solver; at a = 0 the exact cubic factor structure
x^r q(x^3) is used, which is both faster and immune to the multiple root at
the origin.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath as mp
import numpy as np

from . import rootfind
from .errors import NonConvergence, TooClose
from .exactpoly import BivariatePoly
from .pointset import PointSet, sort_points

DENSE_EIG_MAX_N = 80
EIG_CAP_DEFAULT = 400


@dataclass
class SpectralMatrix:
    """The banded matrix for a given (n, a); entries exact when a is rational."""

    n: int
    a: complex
    matrix: np.ndarray

    @property
    def shape(self):
        return self.matrix.shape


def build_matrix(n: int, a=0.0) -> SpectralMatrix:
    """Dense (n+1)x(n+1) matrix of the family; n >= 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ac = complex(a)
    M = np.zeros((n + 1, n + 1), dtype=complex)
    for i in range(n):
        M[i + 1, i] = n - i
        M[i, i + 1] = (i + 1) * ac
    for i in range(n - 1):
        M[i, i + 2] = (i + 1) * (i + 2)
    return SpectralMatrix(n, ac, M)


def _minor_step_coeffs(n, k):
    c2 = (k - 1) * (n - k + 2)
    c3 = (n - k + 2) * (n - k + 3) * (k - 1) * (k - 2)
    return c2, c3


@lru_cache(maxsize=32)
def charpoly_bivariate(n: int) -> BivariatePoly:
    """det(M - x I) as an integer polynomial in (x, a), via the recurrence."""
    p3, p2, p1 = None, None, [[1]]
    for k in range(1, n + 2):
        c2, c3 = _minor_step_coeffs(n, k)
        new = [[0] for _ in range(len(p1) + 1)]
        for i, row in enumerate(p1):  # -x * D^(k-1)
            cur = new[i + 1]
            while len(cur) < len(row):
                cur.append(0)
            for j, c in enumerate(row):
                cur[j] -= c
        if p2 is not None and c2:  # -c2 a * D^(k-2)
            for i, row in enumerate(p2):
                cur = new[i]
                while len(cur) < len(row) + 1:
                    cur.append(0)
                for j, c in enumerate(row):
                    cur[j + 1] -= c2 * c
        if p3 is not None and c3:  # +c3 * D^(k-3)
            for i, row in enumerate(p3):
                cur = new[i]
                while len(cur) < len(row):
                    cur.append(0)
                for j, c in enumerate(row):
                    cur[j] += c3 * c
        p3, p2, p1 = p2, p1, new
    return BivariatePoly(p1, x_name="lambda", a_name="a")


def spectral_polynomial(n: int, a=None):
    """Characteristic polynomial det(M - x I).

    With ``a=None`` returns the exact BivariatePoly in (x, a); with a rational
    (int/Fraction) ``a`` returns the exact ExactPoly in x.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    biv = charpoly_bivariate(n)
    if a is None:
        return biv
    if isinstance(a, (int, Fraction)):
        return biv.eval_a(a)
    raise TypeError("a must be None (symbolic) or an exact rational")


def charpoly_coeffs_mp(n: int, a, dps: int = 60):
    """x-coefficients at a complex a, as exact-int-combination mpc values."""
    biv = charpoly_bivariate(n)
    with mp.workdps(dps + 10):
        av = mp.mpc(complex(a))
        out = []
        for row in biv.grid:
            acc = mp.mpc(0)
            for c in reversed(row):
                acc = acc * av + c
            out.append(acc)
    return out


def zero_a_structure(n: int):
    """(r, q_int) with det(M - x I)|_{a=0} = (-1)^(n+1) x^r q(x^3), q monic.

    The integer list q_int is ascending in xi = x^3; raises StructureViolation
    if any coefficient sits outside the x^(3j+r) support.
    """
    from .errors import StructureViolation

    p = spectral_polynomial(n, 0)
    cs, _ = p._int_form()
    r = (n + 1) % 3
    for j, c in enumerate(cs):
        if c != 0 and j % 3 != r:
            raise StructureViolation(
                f"nonzero coefficient at degree {j} for n={n} (expected {r} mod 3)"
            )
    sign = (-1) ** (n + 1)
    q = [sign * c for c in cs[r::3]]
    return r, q


def _eigs_dense(n, a):
    M = build_matrix(n, a)
    lam, vecs = np.linalg.eig(M.matrix)
    # per-pair residual ||(M - lam I) v|| / ||M||
    Mnorm = np.linalg.norm(M.matrix, ord=np.inf)
    R = M.matrix @ vecs - vecs * lam[None, :]
    res = np.linalg.norm(R, axis=0) / Mnorm
    worst = int(np.argmax(res))
    if res[worst] > 1e-10:
        raise NonConvergence(
            f"eigen residual {res[worst]:.2e} at index {worst}", index=worst
        )
    return lam


def _eigs_poly_zero_a(n):
    r, q = zero_a_structure(n)
    lam = [0.0] * r
    if len(q) > 1:
        xi = rootfind.aberth_roots(q)
        for x in xi:
            rad = abs(x) ** (1.0 / 3.0)
            th = np.angle(x) / 3.0
            for k in range(3):
                lam.append(rad * np.exp(1j * (th + 2 * np.pi * k / 3)))
    return np.asarray(lam, dtype=complex)


def _eigs_poly_general(n, a):
    dps = 40 + int(0.6 * n)
    cs = charpoly_coeffs_mp(n, a, dps=dps)
    return rootfind.aberth_roots(cs, check_sum=False)


def _a_token(a: complex) -> str:
    s = f"{a.real:.12g}_{a.imag:.12g}"
    return s.replace("-", "m").replace(".", "p").replace("+", "")


def eigenvalues(n: int, a=0.0, cap: int = EIG_CAP_DEFAULT, cache_dir=None) -> PointSet:
    """All n+1 eigenvalues, sorted lexicographically by (Re, Im).

    Above the dense-precision threshold the multiprecision polynomial route
    runs; those spectra are disk-cached (keyed by n and a) because they cost
    tens of seconds each.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cap:
        raise ValueError(f"n={n} exceeds the configured cap {cap}")
    ac = complex(a)
    meta = {"n": n, "a": [ac.real, ac.imag]}
    if n <= DENSE_EIG_MAX_N:
        lam = _eigs_dense(n, ac)
        return PointSet(sort_points(lam), label=f"spectrum n={n}", meta=meta)
    from . import cache

    kind = f"eigs-{_a_token(ac)}"
    payload = cache.load(kind, n, cache_dir)
    if payload is not None:
        lam = np.array([complex(re, im) for re, im in payload["points"]])
        return PointSet(lam, label=f"spectrum n={n}", meta=meta)
    if ac == 0:
        lam = _eigs_poly_zero_a(n)
    else:
        lam = _eigs_poly_general(n, ac)
    lam = sort_points(lam)
    cache.store(kind, n, {"n": n, "a": [ac.real, ac.imag],
                          "points": [[z.real, z.imag] for z in lam]}, cache_dir)
    return PointSet(lam, label=f"spectrum n={n}", meta=meta)


def scaled_spectrum(n: int, a=0.0, rule="const", cap: int = EIG_CAP_DEFAULT,
                    cache_dir=None) -> PointSet:
    """Eigenvalues of M at a_n, divided by n^(4/3).

    rule: "const" (a_n = a), "n23" (a_n = a n^(2/3)), or a callable n -> a_n.
    """
    if callable(rule):
        an = complex(rule(n))
    elif rule == "const":
        an = complex(a)
    elif rule == "n23":
        an = complex(a) * n ** (2.0 / 3.0)
    else:
        raise ValueError(f"unknown scaling rule {rule!r}")
    ps = eigenvalues(n, an, cap=cap, cache_dir=cache_dir)
    factor = n ** (4.0 / 3.0)
    out = ps.scaled(factor, label=f"scaled spectrum n={n}")
    out.meta = {"n": n, "a_n": [an.real, an.imag], "rule": rule if isinstance(rule, str) else "callable",
                "a": [complex(a).real, complex(a).imag], "scaling": "n^(4/3)"}
    return out


def empirical_cauchy(sample: PointSet, z, tol: float = 1e-8) -> complex:
    """(1/|S|) sum 1/(z - xi) over the point set; z must stay off the points."""
    pts = np.asarray(sample.points if isinstance(sample, PointSet) else sample,
                     dtype=complex)
    if len(pts) == 0:
        raise ValueError("empty point set")
    zc = complex(z)
    d = np.abs(zc - pts)
    if d.min() <= tol:
        raise TooClose(f"z within {d.min():.2e} of a sample point (tol {tol:.1e})")
    return complex(np.mean(1.0 / (zc - pts)))
