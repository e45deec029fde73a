"""Constant-coefficient recurrence asymptotics in the scaled spectral plane.

For each tau in [0,1] the scaled minor recurrence freezes into a
constant-coefficient 4-term relation whose characteristic cubic is

    Psi^3 + beta Psi^2 + a tau(1-tau) Psi - (1-tau)^2 tau^2 = 0.

The root-counting measures of its solution sequence live, by the
equimodularity principle for such recurrences, on the locus where the two
largest-modulus roots share their modulus.  This module computes those
supports, their branch points in beta, the discriminant factorization, the
support endpoints, and the tau-averaged Cauchy transform taken along the
unique branch with Psi/beta -> -1 at infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BranchCollision, InsideSupport, NonConvergence
from .exactpoly import ExactPoly
from .pointset import PointSet
from .rootfind import cubic_roots

EQUIMODULAR_TOL = 1e-4


@dataclass
class RecurrenceSpec:
    """The frozen recurrence at fixed (a, tau)."""

    a: complex
    tau: float

    def cubic_coeffs(self, beta):
        """(b, c, d) of Psi^3 + b Psi^2 + c Psi + d at this (a, tau)."""
        T = self.tau * (1 - self.tau)
        return complex(beta), self.a * T, -(T * T)


@dataclass
class SupportSample:
    """Union-of-supports sample over a tau grid."""

    a: complex
    tau_grid: list
    per_tau: dict = field(default_factory=dict)   # tau -> ndarray of beta points
    union: np.ndarray = None
    endpoints: dict = field(default_factory=dict)  # tau -> 3 branch points

    def union_points(self) -> PointSet:
        return PointSet(self.union, label="union support",
                        meta={"a": [self.a.real, self.a.imag],
                              "tau_count": len(self.tau_grid)})

    def to_json_dict(self) -> dict:
        """{a, tau_grid, legs (chained polylines per tau), endpoints}."""
        legs = {}
        for t, pts in self.per_tau.items():
            legs[f"{t:.6f}"] = [
                [[float(z.real), float(z.imag)] for z in leg]
                for leg in _chain_polylines(pts)
            ]
        return {
            "a": [self.a.real, self.a.imag],
            "tau_grid": [float(t) for t in self.tau_grid],
            "legs": legs,
            "endpoints": {
                f"{t:.6f}": sorted([float(z.real), float(z.imag)] for z in eps)
                for t, eps in self.endpoints.items()
            },
        }


def characteristic_roots(beta, a=0.0, tau=0.5):
    """The three roots of the characteristic cubic, stably ordered by modulus
    (largest first)."""
    T = tau * (1 - tau)
    r = cubic_roots(beta, complex(a) * T, -(T * T))
    return r[np.argsort(-np.abs(r))]


def support_membership(beta, a=0.0, tau=0.5, tol=EQUIMODULAR_TOL) -> bool:
    """True iff the two largest-modulus cubic roots are equimodular to tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    r = characteristic_roots(beta, a, tau)
    m0, m1 = abs(r[0]), abs(r[1])
    if m0 == 0:
        return False
    return (m0 - m1) / m0 < tol


def branch_points(a=0.0, tau=0.5):
    """The three beta roots of the branch-point cubic

    4 b^3 + a^2 b^2 - 18 a b tau(1-tau) + tau(1-tau)(27 tau^2 - 27 tau - 4a^3) = 0.
    """
    a = complex(a)
    T = tau * (1 - tau)
    c3, c2, c1, c0 = 4.0, a * a, -18.0 * a * T, T * (27 * tau * tau - 27 * tau - 4 * a**3)
    return cubic_roots(c2 / c3, c1 / c3, c0 / c3)


def branch_cubic_coeffs_in_a(tau):
    """Exact branch-point cubic at rational tau, as polynomials in a.

    Returns [c0(a), c1(a), c2(a), c3(a)] (ascending beta powers), each an
    ExactPoly in a, so the tau = 1/2 case can be compared coefficientwise
    against the endpoint cubic as an exact identity.
    """
    tau = Fraction(tau)
    T = tau * (1 - tau)
    return [
        ExactPoly([T * (27 * tau * tau - 27 * tau), 0, 0, -4 * T], "a"),
        ExactPoly([0, -18 * T], "a"),
        ExactPoly([0, 0, 1], "a"),
        ExactPoly([4], "a"),
    ]


def endpoint_cubic_coeffs_in_a():
    """Exact endpoint cubic coefficients [c0(a), ..., c3(a)], ascending in L."""
    return [
        ExactPoly([Fraction(-27, 16), 0, 0, -1], "a"),
        ExactPoly([0, Fraction(-9, 2)], "a"),
        ExactPoly([0, 0, 1], "a"),
        ExactPoly([4], "a"),
    ]


def dsc(a=0.0, tau=0.5):
    """Closed-form discriminant factor 16 tau(1-tau) (a^3 - 27tau + 27tau^2)^3."""
    a = complex(a)
    return 16 * tau * (1 - tau) * (a**3 - 27 * tau + 27 * tau * tau) ** 3


def dsc_exact(a3, tau) -> Fraction:
    """Exact dsc value given rational a^3 and tau (a enters through a^3 only)."""
    a3 = Fraction(a3)
    tau = Fraction(tau)
    return 16 * tau * (1 - tau) * (a3 - 27 * tau + 27 * tau * tau) ** 3


def support_endpoints(a=0.0):
    """The three roots of 4 L^3 + a^2 L^2 - (9/2) a L - a^3 - 27/16 = 0.

    These coincide with branch_points(a, 1/2); the support endpoints of the
    limiting measure are contained among them.
    """
    a = complex(a)
    return cubic_roots(a * a / 4, -9 * a / 8, (-(a**3) - 27 / 16) / 4)


def endpoint_cubic_exact(a3: Fraction, a_linear: Fraction):
    """Exact ascending coefficients of the endpoint cubic in L."""
    a3 = Fraction(a3)
    a1 = Fraction(a_linear)
    return [-a3 - Fraction(27, 16), -Fraction(9, 2) * a1, a1 * a1, Fraction(4)]


def psi_branch(beta, a, tau, start_radius=None, steps=48, max_halvings=48):
    """Psi~ at beta: the cubic root with Psi/beta -> -1, continued inward.

    Continuation runs along the straight ray arg(z) = arg(beta) from
    |z| = 10(1+|a|) down to |beta|; at each step the root nearest the
    previous value is taken, halving the step whenever the nearest and the
    next-nearest root are not cleanly separated.
    """
    beta = complex(beta)
    a = complex(a)
    T = tau * (1 - tau)
    phase = beta / abs(beta)
    R0 = start_radius if start_radius is not None else 10.0 * (1 + abs(a))
    R0 = max(R0, 2 * abs(beta))
    radii = list(np.geomspace(R0, abs(beta), steps))
    psi = None
    halvings = 0
    i = 0
    prev_rad = None
    while i < len(radii):
        rad = radii[i]
        roots = cubic_roots(rad * phase, a * T, -(T * T))
        if psi is None:
            psi = roots[np.argmin(np.abs(roots - (-rad * phase)))]
            prev_rad = rad
            i += 1
            continue
        dist = np.sort(np.abs(roots - psi))
        if dist[0] > 0.5 * dist[1]:
            if halvings >= max_halvings:
                raise BranchCollision(
                    f"refinement floor at |beta|={rad:.4g} (tau={tau:.4f})"
                )
            radii.insert(i, 0.5 * (prev_rad + rad))
            halvings += 1
            continue
        psi = roots[int(np.argmin(np.abs(roots - psi)))]
        prev_rad = rad
        i += 1
    return psi


def cauchy_nu(beta, a=0.0, quadrature_order=64, tol=1e-10, membership_tol=EQUIMODULAR_TOL):
    """tau-averaged Cauchy transform at beta, outside the union support.

    Gauss-Legendre quadrature over tau in (0,1) of dPsi/dbeta / Psi, with the
    branch fixed by Psi/beta -> -1 at infinity and followed by straight-ray
    continuation; the order doubles until two successive values agree to tol.
    """
    beta = complex(beta)
    a = complex(a)
    if beta == 0:
        raise InsideSupport("beta = 0 lies on every support")
    order = quadrature_order
    prev = None
    for _ in range(5):
        nodes, weights = np.polynomial.legendre.leggauss(order)
        taus = 0.5 * (nodes + 1.0)
        ws = 0.5 * weights
        # membership precheck on the quadrature grid
        for t in taus[:: max(1, order // 16)]:
            if support_membership(beta, a, t, membership_tol):
                raise InsideSupport(f"beta={beta} is on the tau={t:.3f} support")
        total = 0j
        for t, w in zip(taus, ws):
            T = t * (1 - t)
            psi = psi_branch(beta, a, t)
            dpsi = -(psi * psi) / (3 * psi * psi + 2 * beta * psi + a * T)
            total += w * dpsi / psi
        if prev is not None and abs(total - prev) < tol:
            return total
        prev = total
        order *= 2
    raise NonConvergence("quadrature did not stabilize for cauchy_nu")


def _chain_polylines(pts, break_factor=4.0):
    """Order curve-sample points into connected polylines.

    Near-duplicates are collapsed first (raster hits and refined edge points
    can land on top of each other), then a nearest-neighbor chain is split
    wherever a hop exceeds break_factor times the median hop.  A chain may
    legitimately run through a junction (two legs traversed as one V-shaped
    polyline); consumers get connected curves rather than scatter.
    """
    pts = np.asarray(pts, dtype=complex)
    if len(pts) <= 1:
        return [list(pts)] if len(pts) else []
    # dedupe at a fraction of the median nearest-neighbor distance
    D = np.abs(pts[:, None] - pts[None, :])
    np.fill_diagonal(D, np.inf)
    med_nn = np.median(D.min(axis=1))
    keep = []
    for i in range(len(pts)):
        if all(abs(pts[i] - pts[j]) > 0.3 * med_nn for j in keep):
            keep.append(i)
    pts = pts[keep]
    if len(pts) <= 1:
        return [list(pts)]
    remaining = list(range(len(pts)))
    center = pts.mean()
    cur = max(remaining, key=lambda i: abs(pts[i] - center))
    remaining.remove(cur)
    order = [cur]
    while remaining:
        nxt = min(remaining, key=lambda i: abs(pts[i] - pts[cur]))
        remaining.remove(nxt)
        order.append(nxt)
        cur = nxt
    chain = pts[order]
    hops = np.abs(np.diff(chain))
    med = np.median(hops) if len(hops) else 0.0
    legs = []
    leg = [chain[0]]
    for k, h in enumerate(hops):
        if med > 0 and h > break_factor * med:
            legs.append(leg)
            leg = []
        leg.append(chain[k + 1])
    legs.append(leg)
    return [l for l in legs if l]


def _cubic_roots_batch(betas, a, tau):
    """Roots of the characteristic cubic at many beta values (batched eig)."""
    betas = np.asarray(betas, dtype=complex)
    T = tau * (1 - tau)
    m = betas.shape[0]
    C = np.zeros((m, 3, 3), dtype=complex)
    C[:, 1, 0] = 1.0
    C[:, 2, 1] = 1.0
    C[:, 0, 2] = T * T
    C[:, 1, 2] = -complex(a) * T
    C[:, 2, 2] = -betas
    return np.linalg.eigvals(C)


def _dominance_gap(beta, a, tau):
    r = np.sort(np.abs(cubic_roots(beta, complex(a) * tau * (1 - tau),
                                   -(tau * (1 - tau)) ** 2)))
    return (r[2] - r[1]) / r[2] if r[2] > 0 else 1.0


def _refine_edge(b0, b1, a, tau, steps=36):
    """Bisect the equimodular-curve crossing on the segment [b0, b1].

    The curve is where the largest-modulus root hands over to another root;
    the handover flips the sign of |r_i| - |r_j| for the continued pair.
    """
    T = tau * (1 - tau)

    def top_two_gap(b, ref_roots):
        roots = cubic_roots(b, complex(a) * T, -(T * T))
        # continue the previously-largest root by proximity
        j = int(np.argmin(np.abs(roots - ref_roots[0])))
        other = np.delete(roots, j)
        return abs(roots[j]) - np.abs(other).max(), roots

    roots0 = cubic_roots(b0, complex(a) * T, -(T * T))
    roots0 = roots0[np.argsort(-np.abs(roots0))]
    g0, _ = top_two_gap(b0, roots0)
    lo, hi = b0, b1
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        gm, _ = top_two_gap(mid, roots0)
        if (gm > 0) == (g0 > 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def union_support(a=0.0, tau_grid=None, beta_grid=None, tol=EQUIMODULAR_TOL,
                  grid_size=61) -> SupportSample:
    """Per-tau equimodular supports refined onto the actual curves.

    A coarse raster only straddles the (one-dimensional) supports, so grid
    edges where the dominant cubic root hands over are bisected transversely
    until the curve point is located; every refined point then passes the
    membership test at ``tol``.  Raster points that already pass membership
    are kept too, and the per-tau branch points ride along as endpoint
    markers.
    """
    a = complex(a)
    if tau_grid is None:
        tau_grid = [k / 32 for k in range(1, 32)]
        if 0.5 not in tau_grid:
            tau_grid.append(0.5)
        tau_grid.sort()
    if beta_grid is None:
        R = 1.0 + 0.75 * max(1.0, abs(a)) ** 1.5
        side = np.linspace(-R, R, grid_size)
        beta_grid = side[:, None] + 1j * side[None, :]
    grid = np.asarray(beta_grid, dtype=complex)
    if grid.ndim == 1:
        m = int(math.isqrt(len(grid)))
        grid = grid.reshape(m, m) if m * m == len(grid) else grid[:, None]
    sample = SupportSample(a=a, tau_grid=list(tau_grid))
    union = []
    for t in tau_grid:
        pts = _support_curve_points(grid, a, t, tol)
        sample.per_tau[t] = pts
        sample.endpoints[t] = branch_points(a, t)
        union.append(pts)
    sample.union = (np.concatenate(union) if union else
                    np.empty(0, dtype=complex))
    return sample


def _support_curve_points(grid, a, tau, tol):
    flat = grid.ravel()
    roots = _cubic_roots_batch(flat, a, tau)
    order = np.argsort(-np.abs(roots), axis=1)
    top = np.take_along_axis(roots, order[:, :1], axis=1)[:, 0].reshape(grid.shape)
    mods = np.sort(np.abs(roots), axis=1)
    gap = ((mods[:, 2] - mods[:, 1]) / np.maximum(mods[:, 2], 1e-300))
    gap = gap.reshape(grid.shape)
    member = (gap < tol).ravel()
    found = list(flat[member])
    # dominance handover along horizontal and vertical edges
    for axis in (0, 1):
        t0 = top if axis == 0 else top.T
        g = grid if axis == 0 else grid.T
        # a handover is a jump of the dominant root larger than the local move
        jump = np.abs(np.diff(t0, axis=1))
        scale = np.abs(np.diff(g, axis=1)) + np.abs(t0[:, :-1]) * 0.05 + 1e-12
        idx = np.argwhere(jump > 0.5 * scale)
        for i, j in idx:
            b0, b1 = g[i, j], g[i, j + 1]
            pt = _refine_edge(b0, b1, a, tau)
            if _dominance_gap(pt, a, tau) < tol:
                found.append(pt)
    return np.asarray(found, dtype=complex)


def real_support_interval(a, refine_tol=1e-8):
    """For real a above the all-real-branch-point threshold: the union
    support interval [lo, hi] on the real axis.

    The per-tau supports are nested real intervals whose union equals the
    tau = 1/2 one (its branch points are extremal), so membership bisection
    at tau = 1/2 localizes both endpoints to refine_tol.
    """
    a = float(a)
    B = 2.0 + abs(a) ** 1.5
    xs = np.linspace(-B, B, 2001)
    inside = [x for x in xs if support_membership(x, a, 0.5)]
    if not inside:
        raise InsideSupport("no support found on the real axis")
    lo_rough, hi_rough = min(inside), max(inside)
    step = xs[1] - xs[0]

    def refine(inner, outer):
        while abs(outer - inner) > refine_tol:
            mid = 0.5 * (inner + outer)
            if support_membership(mid, a, 0.5):
                inner = mid
            else:
                outer = mid
        return 0.5 * (inner + outer)

    hi = refine(hi_rough, hi_rough + 2 * step)
    lo = refine(lo_rough, lo_rough - 2 * step)
    return lo, hi


def recurrence_roots(tau, a=0.0, k_max=150) -> PointSet:
    """Roots (in beta) of the k_max-th solution polynomial of the frozen
    recurrence with D^(-2)=D^(-1)=0, D^(0)=1.

    At a = 0 the solution polynomial is supported on every third degree, so
    the roots are computed through the cubic substitution (exactly when tau
    is rational); this pins them onto the three rays instead of smearing
    them with companion-matrix noise.
    """
    if k_max < 3:
        raise ValueError("k_max must be >= 3")
    a = complex(a)
    if tau in (0, 1):
        return PointSet(np.zeros(k_max, dtype=complex),
                        label=f"recurrence roots tau={tau}",
                        meta={"tau": tau, "a": [a.real, a.imag], "k_max": k_max})
    if a == 0:
        pts = _recurrence_roots_structured(tau, k_max)
    else:
        T = tau * (1 - tau)
        p3, p2, p1 = None, None, np.array([1.0 + 0j])
        for _ in range(k_max):
            new = np.zeros(len(p1) + 1, dtype=complex)
            new[1:] -= p1
            if p2 is not None:
                new[: len(p2)] -= a * T * p2
            if p3 is not None:
                new[: len(p3)] += T * T * p3
            p3, p2, p1 = p2, p1, new
        pts = np.roots(p1[::-1])
    return PointSet(pts, label=f"recurrence roots tau={tau}",
                    meta={"tau": tau, "a": [a.real, a.imag], "k_max": k_max})


def _recurrence_roots_structured(tau, k_max):
    from fractions import Fraction as F

    from . import intpoly
    from .rootfind import aberth_roots

    exact = isinstance(tau, (int, F)) or (isinstance(tau, float) and
                                          F(tau).limit_denominator(10**6) == F(tau))
    tq = F(tau) if exact else None
    if exact:
        T2 = (tq * (1 - tq)) ** 2
        p3, p2, p1 = None, None, [F(1)]
        for _ in range(k_max):
            new = [F(0)] * (len(p1) + 1)
            for i, c in enumerate(p1):
                new[i + 1] -= c
            if p3 is not None:
                for i, c in enumerate(p3):
                    new[i] += T2 * c
            p3, p2, p1 = p2, p1, new
        r = k_max % 3
        g = p1[r::3]
        den = 1
        for c in g:
            den = den * c.denominator // math.gcd(den, c.denominator)
        gi = [int(c * den) for c in g]
        gi = intpoly.primitive(gi)[0]
        xi = aberth_roots(gi) if len(gi) > 1 else np.empty(0, complex)
    else:
        T2 = (tau * (1 - tau)) ** 2
        p3, p2, p1 = None, None, np.array([1.0])
        for _ in range(k_max):
            new = np.zeros(len(p1) + 1)
            new[1:] -= p1
            if p3 is not None:
                new[: len(p3)] += T2 * p3
            p3, p2, p1 = p2, p1, new
        r = k_max % 3
        g = p1[r::3]
        xi = np.roots(g[::-1]) if len(g) > 1 else np.empty(0, complex)
    pts = [0.0] * (k_max % 3)
    for x in xi:
        rad = abs(x) ** (1.0 / 3.0)
        th = np.angle(x) / 3.0
        for j in range(3):
            pts.append(rad * np.exp(1j * (th + 2 * np.pi * j / 3)))
    return np.asarray(pts, dtype=complex)
