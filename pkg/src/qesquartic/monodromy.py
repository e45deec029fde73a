"""Eigenvalue monodromy along closed paths in the parameter plane.

A standard path ("vertical hook") drops from a large positive base point B
to the height of a chosen branching point, runs horizontally left until just
short of it, circles it counterclockwise, and retraces itself back.  The
spectrum at B is real and simple; tracking the eigenvalues frame by frame
along the path (optimal assignment between consecutive frames, step halving
whenever the motion is not small against the intra-frame gap) produces a
permutation of the sorted-at-B spectrum.

The columns of the branching triangle are numbered from the right (the
rightmost point is column 1, and column j holds j points); the measured
monodromy of a column-j hook is the transposition (j, j+1), which the
verification suite checks for every branching point up to moderate n.

For |a| large the matrix is dominated by its tridiagonal part, which after a
diagonal similarity is the classical equispaced-spectrum tridiagonal matrix
scaled by sqrt(a); eigenvalues divided by n sqrt(a) then approach the grid
{-1 + 2k/n}, and a full turn of a reverses the real order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .branching import sigma_points
from .errors import ClearanceViolation, CollisionUnresolved
from .spectral import build_matrix


@dataclass
class APath:
    """Closed piecewise path t in [0,1] -> a(t) with clearance metadata."""

    func: object
    base: complex
    target: complex | None = None
    clearance: float = math.inf
    label: str = ""

    def __call__(self, t: float) -> complex:
        return self.func(t)


@dataclass
class MonodromyResult:
    """Permutation of the sorted-at-base spectrum plus tracking diagnostics."""

    permutation: tuple          # 0-based: start position p ends at permutation[p]
    min_gap: float
    frames: int
    traces: np.ndarray | None = None

    def one_line(self):
        """1-based one-line notation."""
        return tuple(p + 1 for p in self.permutation)

    def is_transposition(self):
        moved = [i for i, p in enumerate(self.permutation) if p != i]
        if len(moved) != 2:
            return None
        i, j = moved
        if self.permutation[i] == j and self.permutation[j] == i:
            return (i + 1, j + 1)
        return None

    def to_json_dict(self, path_id=None, downsample=None):
        out = {
            "path_id": path_id,
            "permutation": list(self.one_line()),
            "min_gap": self.min_gap,
            "frames": self.frames,
        }
        if downsample and self.traces is not None:
            step = max(1, len(self.traces) // downsample)
            out["traces"] = [
                [[float(z.real), float(z.imag)] for z in frame]
                for frame in self.traces[::step]
            ]
        return out


def kac_matrix(n: int, a=1.0) -> np.ndarray:
    """The tridiagonal comparison matrix: sub (n-i)/n, super (i+1)a/n.

    At a=1 its spectrum is exactly {-1 + 2k/n : k = 0..n}.
    """
    M = np.zeros((n + 1, n + 1), dtype=complex)
    ac = complex(a)
    for i in range(n):
        M[i + 1, i] = (n - i) / n
        M[i, i + 1] = (i + 1) * ac / n
    return M


def _eig_sorted_real(n, a):
    lam = np.linalg.eigvals(build_matrix(n, a).matrix)
    return np.sort_complex(lam)


def standard_path(n: int, i: int, j: int, B=None, radius_factor=0.3,
                  clearance_factor=0.05, bump=None, cache_dir=None,
                  branch_set=None) -> APath:
    """The vertical hook around the branching point with grid label (i, j).

    B defaults to 2 max|branch points| + 1.  The circle radius is
    radius_factor times the distance to the nearest other branching point;
    hooks around real branching points get their horizontal run bumped off
    the axis.  Raises ClearanceViolation if no shrink keeps the path clear.
    """
    bs = branch_set if branch_set is not None else sigma_points(n, cache_dir=cache_dir)
    bs.require_grid()
    pts = bs.points.points
    try:
        idx = next(k for k in range(len(pts))
                   if bs.rows[k] == i and bs.cols[k] == j)
    except StopIteration:
        raise ValueError(f"no branching point with grid label ({i}, {j})")
    return path_around_index(n, idx, B=B, radius_factor=radius_factor,
                             clearance_factor=clearance_factor, bump=bump,
                             branch_set=bs)


def path_around_index(n: int, idx: int, B=None, radius_factor=0.3,
                      clearance_factor=0.05, bump=None,
                      cache_dir=None, branch_set=None) -> APath:
    """Vertical hook around the idx-th branching point (sorted order)."""
    bs = branch_set if branch_set is not None else sigma_points(n, cache_dir=cache_dir)
    pts = bs.points.points
    sigma = complex(pts[idx])
    others = np.delete(pts, idx)
    if B is None:
        B = 2.0 * float(np.abs(pts).max()) + 1.0
    B = float(B)
    if others.size:
        near = float(np.abs(others - sigma).min())
    else:
        near = 1.0
    radius = radius_factor * near
    clearance = clearance_factor * near
    is_real = abs(sigma.imag) < 1e-9
    if bump is None:
        bump = 0.0 if not is_real else min(0.5 * near, 0.35)
    for attempt in range(8):
        func = _hook_func(B, sigma, radius, bump)
        dmin = _path_min_distance(func, others)
        if dmin > clearance:
            p = APath(func=func, base=complex(B), target=sigma,
                      clearance=dmin, label=f"hook idx={idx}")
            return p
        radius *= 0.6
        bump *= 0.6
        clearance *= 0.6
    raise ClearanceViolation(
        f"hook around {sigma} cannot clear other branching points"
    )


def _hook_func(B, sigma, radius, bump):
    """Closed path: vertical drop, horizontal (bumped) approach, ccw circle,
    and the reverse run home."""
    y = sigma.imag
    approach_from = B + 0j
    p0 = complex(B, y)                 # after vertical segment
    p1 = sigma + radius                # approach point, right of sigma
    # outbound: 0..0.15 vertical, 0.15..0.45 horizontal (with bump),
    # 0.45..0.55 circle, then mirror back
    def horizontal(s):
        z = p0 + (p1 - p0) * s
        return z + 1j * bump * math.sin(math.pi * min(max(s, 0.0), 1.0))

    def func(t):
        t = t % 1.0
        if t < 0.15:
            s = t / 0.15
            return approach_from + 1j * y * s
        if t < 0.45:
            s = (t - 0.15) / 0.30
            return horizontal(s)
        if t < 0.55:
            s = (t - 0.45) / 0.10
            return sigma + radius * np.exp(2j * np.pi * s)
        if t < 0.85:
            s = (t - 0.55) / 0.30
            return horizontal(1 - s)
        s = (t - 0.85) / 0.15
        return approach_from + 1j * y * (1 - s)

    return func


def _path_min_distance(func, pts, samples=600):
    if pts.size == 0:
        return math.inf
    ts = np.linspace(0, 1, samples)
    zs = np.array([func(t) for t in ts])
    return float(np.abs(zs[:, None] - pts[None, :]).min())


def circle_path(center, radius_or_start, full_turns=1) -> APath:
    """a(t) = center + R e^(2 pi i t); R from a scalar or a start point."""
    center = complex(center)
    R = float(abs(radius_or_start)) if not isinstance(radius_or_start, complex) \
        else abs(radius_or_start - center)
    return APath(func=lambda t: center + R * np.exp(2j * np.pi * t * full_turns),
                 base=center + R, label=f"circle R={R}")


def track_path(n: int, path, steps: int = 256, keep_traces: bool = False,
               refine_factor: float = 0.3, max_frames: int = 200_000) -> MonodromyResult:
    """Track all eigenvalues around a closed path; the end-to-start matching
    expressed against the ascending-real order of the spectrum at the base.

    Consecutive frames are matched by optimal assignment on |dLambda|; a step
    is halved whenever the maximal motion exceeds refine_factor times the
    minimal intra-frame gap.  Raises CollisionUnresolved at the refinement
    floor (the path runs too close to a branching point).
    """
    func = path.func if isinstance(path, APath) else path
    ts = list(np.linspace(0.0, 1.0, steps + 1))
    start = _eig_sorted_real(n, func(0.0))
    cur = start.copy()
    traces = [cur.copy()] if keep_traces else None
    min_gap = math.inf
    frames = 1
    i = 1
    while i < len(ts):
        if len(ts) > max_frames:
            raise CollisionUnresolved("frame budget exhausted")
        new = np.linalg.eigvals(build_matrix(n, func(ts[i])).matrix)
        D = np.abs(cur[:, None] - new[None, :])
        ri, ci = linear_sum_assignment(D)
        moved = float(D[ri, ci].max())
        E = np.abs(new[:, None] - new[None, :]) + np.diag([math.inf] * len(new))
        gap = float(E.min())
        if moved > refine_factor * gap and moved > 1e-13 * (1 + np.abs(new).max()):
            if ts[i] - ts[i - 1] < 1e-12:
                raise CollisionUnresolved(
                    f"refinement floor at t={ts[i]:.6f} (gap {gap:.2e})"
                )
            ts.insert(i, 0.5 * (ts[i - 1] + ts[i]))
            continue
        min_gap = min(min_gap, gap)
        cur = new[ci]
        frames += 1
        if keep_traces:
            traces.append(cur.copy())
        i += 1
    D = np.abs(start[:, None] - cur[None, :])
    ri, ci = linear_sum_assignment(D)
    closure = float(D[ri, ci].max())
    scale = 1 + float(np.abs(start).max())
    if closure > 1e-6 * scale:
        raise CollisionUnresolved(f"trace closure failed: {closure:.2e}")
    perm = tuple(int(c) for c in ci)
    return MonodromyResult(permutation=perm, min_gap=min_gap, frames=frames,
                           traces=np.array(traces) if keep_traces else None)


def compose(perms):
    """Composition of permutations applied left to right; () is identity."""
    perms = list(perms)
    if not perms:
        return tuple()
    size = len(perms[0])
    out = list(range(size))
    for p in perms:
        out = [p[out[k]] for k in range(size)]
    return tuple(out)


def monodromy_table(n: int, B=None, steps: int = 192, cache_dir=None) -> dict:
    """Permutation of every standard path, keyed by the (row, col) label."""
    bs = sigma_points(n, cache_dir=cache_dir)
    bs.require_grid()
    out = {}
    for idx in range(len(bs.points.points)):
        path = path_around_index(n, idx, B=B, branch_set=bs)
        res = track_path(n, path, steps=steps)
        out[(bs.rows[idx], bs.cols[idx])] = res
    return out


def kac_limit_check(n: int, a) -> dict:
    """Deviation of the scaled spectrum from the equispaced limit grid.

    Eigenvalues are divided by n sqrt(a) (principal branch); in the |a| ->
    infinity limit they approach {-1 + 2k/n} exactly, so the report carries
    the max deviation after sorting along the segment direction.
    """
    a = complex(a)
    if a == 0:
        raise ValueError("a must be nonzero")
    lam = np.linalg.eigvals(build_matrix(n, a).matrix)
    gamma = lam / (n * np.sqrt(a))
    gamma = gamma[np.argsort(gamma.real)]
    grid = np.array([-1 + 2 * k / n for k in range(n + 1)])
    dev = np.abs(gamma - grid)
    return {
        "n": n,
        "a": [a.real, a.imag],
        "gamma": gamma,
        "grid": grid,
        "max_deviation": float(dev.max()),
        "mean_deviation": float(dev.mean()),
    }
