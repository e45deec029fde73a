"""Yablonskii-Vorob'ev polynomials, their zero loci, and the rational
solutions of the second Painleve equation built from them.

The sequence starts from YV_0 = 1, YV_1 = t and continues by

    YV_{n+1} = (t YV_n^2 - 4 (YV_n YV_n'' - (YV_n')^2)) / YV_{n-1},

where every division is exact over the integers (enforced, not assumed:
a failed division would falsify the adopted recursion).  deg YV_n is the
triangular number n(n+1)/2 and the coefficient support sits in degrees
congruent to it mod 3, which is what pins the zero locus onto a threefold
symmetric triangular pattern.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp
import numpy as np

from . import intpoly, rootfind
from .errors import NonConvergence, TooClose
from .exactpoly import ExactPoly
from .pointset import PointSet

ZERO_CAP_DEFAULT = 60
SCALE_CONSTANT = (9 / 2) ** (2 / 3)
RESIDUAL_TOL = 1e-10


@dataclass
class YVSequence:
    """YV_0..YV_N as exact integer-coefficient polynomials in t."""

    polys: list

    def __getitem__(self, n: int) -> ExactPoly:
        return self.polys[n]

    def __len__(self):
        return len(self.polys)


@lru_cache(maxsize=8)
def _yv_int_coeffs(N: int):
    seq = [[1], [0, 1]]
    for n in range(1, N):
        Y = seq[n]
        tYY = intpoly.mul([0, 1], intpoly.mul(Y, Y))
        wron = intpoly.sub(
            intpoly.mul(Y, intpoly.deriv(intpoly.deriv(Y))),
            intpoly.mul(intpoly.deriv(Y), intpoly.deriv(Y)),
        )
        num = intpoly.sub(tYY, intpoly.scale(wron, 4))
        seq.append(intpoly.div_exact(num, seq[n - 1]))
    return tuple(tuple(p) for p in seq[: N + 1])


def yv_generate(N: int) -> YVSequence:
    """YV_0..YV_N; raises NotDivisible if the recursion ever fails to divide."""
    if N < 0:
        raise ValueError("N must be >= 0")
    coeffs = _yv_int_coeffs(max(N, 1))
    return YVSequence(
        [ExactPoly.from_int_coeffs(list(c), "t") for c in coeffs[: N + 1]]
    )


def coefficients_json(N: int) -> dict:
    """All generated members with coefficients as decimal strings."""
    coeffs = _yv_int_coeffs(max(N, 1))
    return {
        "members": [
            {"n": n, "degree": len(cs) - 1, "coeffs": [str(c) for c in cs]}
            for n, cs in enumerate(coeffs[: N + 1])
        ]
    }


def coefficient_support_mod3_ok(n: int) -> bool:
    """Exact check: supp(YV_n) lies in degrees == deg YV_n (mod 3)."""
    cs = _yv_int_coeffs(max(n, 1))[n]
    d = len(cs) - 1
    return all(c == 0 or j % 3 == d % 3 for j, c in enumerate(cs))


def yv_zeros(n: int, cap: int = ZERO_CAP_DEFAULT, residual_tol: float = RESIDUAL_TOL,
             cache_dir=None) -> PointSet:
    """All n(n+1)/2 zeros of YV_n, multiplicity included.

    Roots come from the exact cubic-structure factor g (YV_n = t^r g(t^3))
    through the staged Aberth solver, then map back by cube roots; each
    returned zero passes the scale-aware residual test
    |YV_n(z)| / sum_k |c_k||z|^k < residual_tol.  Large-n zero sets are
    disk-cached (the solve costs a minute near the cap).
    """
    if n > cap:
        raise ValueError(f"n={n} exceeds the configured cap {cap}")
    if n == 0:
        return PointSet(np.empty(0, complex), label="YV_0 zeros", meta={"n": 0})
    if n >= 25:
        from . import cache

        payload = cache.load("yv-zeros", n, cache_dir)
        if payload is not None:
            pts = np.array([complex(re, im) for re, im in payload["points"]])
            return PointSet(pts, label=f"YV_{n} zeros", meta={"n": n})
    cs = list(_yv_int_coeffs(n)[n])
    d = len(cs) - 1
    r = d % 3
    if not coefficient_support_mod3_ok(n):
        raise NonConvergence("unexpected coefficient support; structure route invalid")
    g = cs[r::3]
    zs = [0.0] * r
    if len(g) > 1:
        xi = rootfind.aberth_roots(g)
        xi = rootfind.newton_polish(g, xi, dps=50, steps=2)
        for x in xi:
            rad = mp.cbrt(abs(x))
            th = mp.arg(x) / 3
            for k in range(3):
                zs.append(complex(rad * mp.exp(1j * (th + 2 * mp.pi * k / 3))))
    pts = np.asarray(zs, dtype=complex)
    _check_residuals(cs, pts, residual_tol)
    if n >= 25:
        from . import cache
        from .pointset import sort_points

        pts = sort_points(pts)
        cache.store("yv-zeros", n,
                    {"n": n, "points": [[z.real, z.imag] for z in pts]},
                    cache_dir)
    return PointSet(pts, label=f"YV_{n} zeros", meta={"n": n})


def _check_residuals(cs, pts, tol):
    stride = max(1, len(pts) // 40)
    worst = 0.0
    worst_z = None
    for z in pts[::stride]:
        if z == 0:
            res = 0.0 if cs[0] == 0 else math.inf
        else:
            res = rootfind.residual_scale_aware(cs, z)
        if res > worst:
            worst, worst_z = res, z
    if worst > tol:
        raise NonConvergence(
            f"zero residual {worst:.2e} at {worst_z} exceeds {tol:.1e}"
        )


def scaled_zeros(n: int, cap: int = ZERO_CAP_DEFAULT, cache_dir=None) -> PointSet:
    """Zero locus divided by (9/2)^(2/3) n^(2/3)."""
    ps = yv_zeros(n, cap=cap, cache_dir=cache_dir)
    factor = SCALE_CONSTANT * n ** (2.0 / 3.0)
    out = ps.scaled(factor, label=f"scaled YV_{n} zeros")
    out.meta = {"n": n, "scaling": "(9/2)^(2/3) n^(2/3)"}
    return out


def painleve_rational(n: int, t_samples, pole_tol: float = 1e-6):
    """u(t; n) = YV_{n-1}'/YV_{n-1} - YV_n'/YV_n at each sample.

    Raises TooClose when a sample sits within pole_tol of a zero of either
    polynomial (a pole of u).
    """
    if n < 1:
        raise ValueError("n must be >= 1 (u(t;0) = 0 identically)")
    seq = yv_generate(n)
    p, q = seq[n - 1], seq[n]
    dp, dq = p.derivative(), q.derivative()
    zp = yv_zeros(n - 1).points if n >= 2 else np.empty(0, complex)
    zq = yv_zeros(n).points
    out = []
    for t in t_samples:
        tc = complex(t)
        dmin = min(
            (np.abs(tc - zp).min() if len(zp) else math.inf),
            (np.abs(tc - zq).min() if len(zq) else math.inf),
        )
        if dmin < pole_tol:
            raise TooClose(f"sample {tc} within {dmin:.2e} of a pole")
        pv, qv = p(tc), q(tc)
        out.append(dp(tc) / pv - dq(tc) / qv)
    return out


def painleve_residual(n: int, t, h: float = None) -> float:
    """|u'' - t u - 2u^3 - n| at t.

    By default u'' comes from differentiating the log-derivative formula
    analytically (with v = p'/p: v' = p''/p - v^2, v'' = p'''/p - 3 v p''/p
    + 2 v^3), so the residual is exact up to float evaluation noise.  Passing
    a step h switches to Richardson-extrapolated central differences, which
    carry an eps/h^2 noise floor near poles.
    """
    tc = complex(t)
    if h is not None:
        def u(x):
            return painleve_rational(n, [x])[0]

        def d2(s):
            return (u(tc + s) - 2 * u(tc) + u(tc - s)) / (s * s)

        upp = (4 * d2(h / 2) - d2(h)) / 3
        uv = u(tc)
        return abs(upp - tc * uv - 2 * uv**3 - n)
    seq = yv_generate(n)
    uv, upp = 0j, 0j
    for poly, sign in ((seq[n - 1], 1.0), (seq[n], -1.0)):
        pv = poly(tc)
        v = poly.derivative()(tc) / pv
        p2 = poly.derivative().derivative()(tc) / pv
        p3 = poly.derivative().derivative().derivative()(tc) / pv
        uv += sign * v
        upp += sign * (p3 - 3 * v * p2 + 2 * v**3)
    return abs(upp - tc * uv - 2 * uv**3 - n)
