"""Simultaneous polynomial root finding at staged multiprecision.

The driver is Aberth-Ehrlich iteration: Newton ratios p/p' are evaluated with
mpmath at a working precision that escalates in stages, while the mutual
repulsion sums run vectorized in double precision (root estimates live at
unit scale after rescaling, so double is plenty for the geometry; only the
polynomial evaluation needs big arithmetic because the coefficients are
huge).  Initial estimates come from the Newton polygon of the coefficient
moduli unless the caller supplies better ones.

Everything is rescaled to the dominant root radius before iterating; without
that, evaluation near roots of a polynomial whose coefficients span hundreds
of digits cancels catastrophically at any fixed precision.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath as mp
import numpy as np

from .errors import NonConvergence

DEFAULT_SCHEDULE = ((50, 90), (120, 20), (250, 8))


def _log_abs(c):
    """Natural log of |c| for int/Fraction/mpf/mpc/complex; None for zero."""
    if c == 0:
        return None
    if isinstance(c, int):
        return _log_abs_int(c)
    if isinstance(c, Fraction):
        return _log_abs_int(c.numerator) - _log_abs_int(c.denominator)
    if isinstance(c, (mp.mpf, mp.mpc)):
        return float(mp.log(abs(c)))
    return math.log(abs(c))


def _log_abs_int(n):
    n = abs(n)
    if n.bit_length() <= 900:
        return math.log(n)
    shift = n.bit_length() - 60
    return math.log(n >> shift) + shift * math.log(2)


def newton_polygon_radii(coeffs):
    """Per-root modulus estimates from the upper hull of (k, log|c_k|)."""
    logs = [_log_abs(c) for c in coeffs]
    d = len(coeffs) - 1
    hull = []
    for k in range(d + 1):
        if logs[k] is None:
            continue
        while len(hull) >= 2:
            i, j = hull[-2], hull[-1]
            if (logs[j] - logs[i]) * (k - i) <= (logs[k] - logs[i]) * (j - i):
                hull.pop()
            else:
                break
        hull.append(k)
    radii = np.empty(d, dtype=float)
    for t in range(len(hull) - 1):
        i, j = hull[t], hull[t + 1]
        radii[i:j] = math.exp((logs[i] - logs[j]) / (j - i))
    return radii


def _coeff_to_mp(c, slog, k, d):
    """c * exp((k-d) slog) at the current working precision."""
    if isinstance(c, int):
        base = mp.mpf(c)
    elif isinstance(c, Fraction):
        base = mp.mpf(c.numerator) / c.denominator
    elif isinstance(c, (mp.mpf, mp.mpc)):
        base = c
    elif isinstance(c, complex):
        base = mp.mpc(c)
    else:
        base = mp.mpf(c)
    return base * mp.e ** (mp.mpf(k - d) * slog)


def aberth_roots(coeffs, init=None, schedule=None, tol=1e-15,
                 check_sum=True):
    """All roots of sum coeffs[k] z^k (ascending; exact or mp coefficients).

    Returns a complex ndarray of the d roots.  Raises NonConvergence when the
    final sweep still moves by more than sqrt(tol) at root scale, or when the
    exact sum-of-roots identity fails beyond tolerance.
    """
    if schedule is None:
        schedule = DEFAULT_SCHEDULE
    d = len(coeffs) - 1
    if d >= 0 and coeffs[d] == 0:
        raise ValueError("leading coefficient must be nonzero")
    if d < 1:
        return np.empty(0, dtype=complex)
    if d == 1:
        with mp.workdps(40):
            r = -_coeff_to_mp(coeffs[0], mp.mpf(0), 0, 0) / _coeff_to_mp(
                coeffs[1], mp.mpf(0), 0, 0
            )
            return np.array([complex(r)])
    radii = newton_polygon_radii(coeffs)
    s = float(radii.max())
    if s == 0 or not math.isfinite(s):
        s = 1.0
    if init is None:
        ang = 2 * np.pi * ((np.arange(d) * 0.38196601125010515) % 1.0) + 0.31
        z = (np.maximum(radii, 1e-12 * s) / s) * np.exp(1j * ang)
    else:
        z = np.asarray(init, dtype=complex) / s
    slog_f = math.log(s)
    last_step = math.inf
    for dps, max_sweeps in schedule:
        with mp.workdps(dps):
            slog = mp.mpf(slog_f)
            cs = [_coeff_to_mp(c, slog, k, d) for k, c in enumerate(coeffs)]
            m = max(abs(c) for c in cs)
            cs = [c / m for c in cs]
            dcs = [cs[k] * k for k in range(1, d + 1)]
            rng = np.random.RandomState(12345)
            for _ in range(max_sweeps):
                N = np.empty(d, dtype=complex)
                for i in range(d):
                    zi = mp.mpc(complex(z[i]))
                    p = cs[d]
                    for k in range(d - 1, -1, -1):
                        p = p * zi + cs[k]
                    q = dcs[d - 1]
                    for k in range(d - 2, -1, -1):
                        q = q * zi + dcs[k]
                    if q == 0:
                        N[i] = 1e-3 * (1 + abs(z[i]))
                    else:
                        N[i] = complex(p / q)
                diff = z[:, None] - z[None, :]
                np.fill_diagonal(diff, np.inf)
                with np.errstate(all="ignore"):
                    S = np.sum(1.0 / diff, axis=1)
                    w = N / (1 - N * S)
                bad = ~np.isfinite(w)
                if bad.any():
                    w[bad] = 1e-3 * np.exp(2j * np.pi * rng.rand(int(bad.sum())))
                aw = np.abs(w)
                cap = 0.2 + 0.5 * np.abs(z)
                w = np.where(aw > cap, w / np.maximum(aw, 1e-300) * cap, w)
                z = z - w
                last_step = float(np.max(np.abs(w)))
                if last_step < tol:
                    break
        if last_step < tol:
            break
    roots = z * s
    if last_step > math.sqrt(tol):
        raise NonConvergence(
            f"Aberth stalled with max step {last_step:.2e} at root scale"
        )
    if check_sum and _is_exact(coeffs[d]) and _is_exact(coeffs[d - 1]):
        expected = -Fraction(coeffs[d - 1]) / Fraction(coeffs[d])
        got = complex(roots.sum())
        err = abs(got - complex(expected)) / (1 + d * s)
        if err > 1e-8:
            raise NonConvergence(
                f"sum-of-roots check failed: relative error {err:.2e}"
            )
    return roots


def _is_exact(c):
    return isinstance(c, (int, Fraction))


def newton_polish(coeffs, roots, dps=50, steps=3):
    """A few high-precision Newton steps on each root; returns mpc list."""
    d = len(coeffs) - 1
    out = []
    with mp.workdps(dps):
        cs = [_coeff_to_mp(c, mp.mpf(0), 0, 0) for c in coeffs]
        dcs = [cs[k] * k for k in range(1, d + 1)]
        for z0 in roots:
            z = mp.mpc(complex(z0))
            for _ in range(steps):
                p = cs[d]
                for k in range(d - 1, -1, -1):
                    p = p * z + cs[k]
                q = dcs[d - 1]
                for k in range(d - 2, -1, -1):
                    q = q * z + dcs[k]
                if q == 0:
                    break
                z = z - p / q
            out.append(z)
    return out


def residual_scale_aware(coeffs, z, dps=60):
    """|p(z)| / sum_k |c_k||z|^k   (backward-stable residual normalization)."""
    with mp.workdps(dps):
        zc = mp.mpc(complex(z))
        az = abs(zc)
        p = mp.mpf(0)
        den = mp.mpf(0)
        for c in reversed(coeffs):
            cm = _coeff_to_mp(c, mp.mpf(0), 0, 0)
            p = p * zc + cm
            den = den * az + abs(cm)
        if den == 0:
            return 0.0 if p == 0 else math.inf
        return float(abs(p) / den)


def cubic_roots(b, c, d):
    """Roots of z^3 + b z^2 + c z + d, numerically stable closed form."""
    b = complex(b)
    c = complex(c)
    d = complex(d)
    p = c - b * b / 3
    q = 2 * b**3 / 27 - b * c / 3 + d
    disc = (q / 2) ** 2 + (p / 3) ** 3
    sq = np.sqrt(complex(disc))
    # pick the better-conditioned cube-root branch
    u3a = -q / 2 + sq
    u3b = -q / 2 - sq
    u3 = u3a if abs(u3a) >= abs(u3b) else u3b
    if u3 == 0:
        u = 0j
    else:
        u = u3 ** (1 / 3)
    w = np.exp(2j * np.pi / 3)
    roots = []
    for k in range(3):
        uk = u * w**k
        if uk == 0:
            roots.append(-b / 3)
        else:
            roots.append(uk - p / (3 * uk) - b / 3)
    return np.array(roots)
