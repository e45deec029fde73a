"""Branching sets: where the spectral polynomial has a multiple eigenvalue.

The discriminant-in-x of the characteristic polynomial is an integer
polynomial in a of degree n(n+1)/2; its zero locus is the branching set.
It is computed exactly by a CRT-modular scheme: for each 31-bit prime the
resultant of the polynomial and its x-derivative is evaluated at the
integers 0..D (vectorized mod-p Euclid over all points at once - the
x-leading coefficients are +-1 and +-(n+1), so every prime above n+1 is
good), interpolated through Newton divided differences mod p, and the
coefficients are lifted by CRT until they stabilize over two extra primes.

Exactness is cross-checked, not assumed: the computed polynomial must have
degree exactly n(n+1)/2, and its value at random integer points must equal
the fraction-free Sylvester determinant computed independently by Bareiss
elimination.  Results are disk-cached ({kind}-{n}.json) since large-n
resultants are the most expensive objects in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import cache, intpoly, rootfind
from .errors import DegreeMismatch, IndexingAmbiguity, NonConvergence
from .exactpoly import ExactPoly
from .pointset import PointSet
from .spectral import charpoly_bivariate

SIGMA_CAP_DEFAULT = 40
SCALE_CONSTANT = (27 / 4) ** (1 / 3)   # equals 3/4^(1/3)


@dataclass
class BranchSet:
    """Branching points of one n: the exact polynomial plus numeric roots."""

    n: int
    disc_poly: ExactPoly
    points: PointSet
    rows: list = field(default_factory=list)      # per-point row index (1-based)
    cols: list = field(default_factory=list)      # per-point column index (1-based)
    indexing_error: str | None = None

    def require_grid(self):
        if self.indexing_error:
            raise IndexingAmbiguity(self.indexing_error, points=self.points.points)


# ---------------------------------------------------------------------------
# modular machinery
# ---------------------------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _primes_from(start: int):
    p = start | 1
    while True:
        if _is_prime(p):
            yield p
        p += 2


def _modpow_vec(b, e, p):
    r = np.ones_like(b)
    b = b % p
    while e:
        if e & 1:
            r = (r * b) % p
        b = (b * b) % p
        e >>= 1
    return r


def _resultant_scalar_mod(f, g, p):
    def deg(u):
        d = len(u) - 1
        while d >= 0 and u[d] % p == 0:
            d -= 1
        return d

    f = [x % p for x in f]
    g = [x % p for x in g]
    res = 1
    df, dg = deg(f), deg(g)
    if df < 0 or dg < 0:
        return 0
    f = f[: df + 1]
    g = g[: dg + 1]
    while True:
        if dg == 0:
            return (res * pow(g[0], df, p)) % p
        inv = pow(g[dg], p - 2, p)
        r = list(f)
        for i in range(df, dg - 1, -1):
            q = (r[i] * inv) % p
            if q:
                for j in range(dg + 1):
                    r[i - dg + j] = (r[i - dg + j] - q * g[j]) % p
        r = r[:dg]
        dr = deg(r)
        if dr < 0:
            return 0
        if (df * dg) % 2:
            res = (-res) % p
        res = (res * pow(g[dg], df - dr, p)) % p
        f, g = g, r[: dr + 1]
        df, dg = dg, dr


def _resultants_vector_mod(F, G, p):
    """Resultants of many pairs at once mod p; returns (values, ok_mask).

    Points where the generic degree sequence breaks (leading coefficient of
    a remainder vanishing mod p) are flagged for the scalar fallback.
    """
    m = F[0].shape[0]
    f = [c % p for c in F]
    g = [c % p for c in G]
    res = np.ones(m, dtype=np.int64)
    ok = np.ones(m, dtype=bool)
    while True:
        df, dg = len(f) - 1, len(g) - 1
        lg = g[-1]
        ok &= lg != 0
        if dg == 0:
            res = (res * _modpow_vec(g[0], df, p)) % p
            return res, ok
        inv = _modpow_vec(lg, p - 2, p)
        r = [c.copy() for c in f]
        for i in range(df, dg - 1, -1):
            q = (r[i] * inv) % p
            for j in range(dg + 1):
                r[i - dg + j] = (r[i - dg + j] - q * g[j]) % p
        r = r[:dg]
        dr = dg - 1
        while dr > 0 and not r[dr].any():
            dr -= 1
        r = r[: dr + 1]
        if dr == 0 and not r[0].any():
            ok &= False
            return res, ok
        if (df * dg) % 2:
            res = (-res) % p
        res = (res * _modpow_vec(lg, df - dr, p)) % p
        f, g = g, r


def _eval_grid_mod(rows, pts, p):
    """Evaluate each Z[a] coefficient row at all points, mod p."""
    out = []
    for row in rows:
        acc = np.zeros(len(pts), dtype=np.int64)
        for c in reversed(row or [0]):
            acc = (acc * pts + c % p) % p
        out.append(acc)
    return out


def _interpolate_mod(pts, vals, p):
    """Monomial coefficients of the unique degree <= D interpolant mod p."""
    D = len(pts) - 1
    dd = vals.copy() % p
    for j in range(1, D + 1):
        num = (dd[j:] - dd[j - 1 : -1]) % p
        den = (pts[j:] - pts[: len(pts) - j]) % p
        dd[j:] = (num * _modpow_vec(den, p - 2, p)) % p
    coeffs = np.zeros(D + 1, dtype=np.int64)
    for j in range(D, -1, -1):
        shifted = np.roll(coeffs, 1)
        shifted[0] = 0
        coeffs = (shifted - pts[j] * coeffs) % p
        coeffs[0] = (coeffs[0] + dd[j]) % p
    return coeffs


def discriminant_resultant_exact(n: int, progress=None):
    """Raw integer coefficients (ascending in a) of Res_x(Sp, dSp/dx)."""
    biv = charpoly_bivariate(n)
    dbiv = biv.derivative_x()
    D = n * (n + 1) // 2
    pts = np.arange(D + 1, dtype=np.int64)
    crt_mod = 1
    crt_val = [0] * (D + 1)
    sym = None
    stable = 0
    for p in _primes_from((1 << 30) + 1):
        if p <= n + 1:
            continue
        F = _eval_grid_mod(biv.grid, pts, p)
        G = _eval_grid_mod(dbiv.grid, pts, p)
        vals, ok = _resultants_vector_mod(F, G, p)
        if not ok.all():
            for idx in np.nonzero(~ok)[0]:
                fc = [int(c[idx]) for c in F]
                gc = [int(c[idx]) for c in G]
                vals[idx] = _resultant_scalar_mod(fc, gc, p)
        coeffs = _interpolate_mod(pts, vals, p)
        inv = pow(crt_mod % p, p - 2, p)
        crt_val = [
            r + crt_mod * (((int(c) - r) * inv) % p)
            for r, c in zip(crt_val, coeffs)
        ]
        crt_mod *= p
        new_sym = [v - crt_mod if v > crt_mod // 2 else v for v in crt_val]
        if sym is not None and new_sym == sym:
            stable += 1
            if stable >= 2:
                return new_sym
        else:
            stable = 0
        sym = new_sym
        if progress:
            progress(p)


def _spot_check(n: int, coeffs):
    """Exact verification at random integer points against Sylvester-Bareiss."""
    biv = charpoly_bivariate(n)
    dbiv = biv.derivative_x()
    rng = np.random.RandomState(n)
    D = n * (n + 1) // 2
    for a0 in rng.randint(D + 2, D + 50, size=2).tolist():
        p_at = [intpoly.eval_int(row, a0) for row in biv.grid]
        q_at = [intpoly.eval_int(row, a0) for row in dbiv.grid]
        expected = intpoly.sylvester_resultant(intpoly.trim(p_at), intpoly.trim(q_at))
        got = intpoly.eval_int(coeffs, a0)
        if expected != got:
            raise NonConvergence(
                f"modular resultant spot check failed at a={a0} for n={n}"
            )


def sigma_polynomial(n: int, cap: int = SIGMA_CAP_DEFAULT, cache_dir=None,
                     verify: bool = True) -> ExactPoly:
    """Exact branching polynomial in a: content-free, positive leading.

    Degree must come out to exactly n(n+1)/2 (DegreeMismatch otherwise).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cap:
        raise ValueError(f"n={n} exceeds the configured cap {cap}")
    payload = cache.load("sigma-poly", n, cache_dir)
    if payload is not None:
        coeffs = cache.decode_int_poly(payload["coeffs"])
        return ExactPoly.from_int_coeffs(coeffs, "a")
    raw = discriminant_resultant_exact(n)
    raw = intpoly.trim(list(raw))
    if verify:
        _spot_check(n, raw)
    prim, _ = intpoly.primitive(raw)
    D = n * (n + 1) // 2
    if len(prim) - 1 != D:
        raise DegreeMismatch(
            f"discriminant degree {len(prim) - 1} != {D} for n={n}"
        )
    cache.store("sigma-poly", n, {"n": n, "coeffs": cache.encode_int_poly(prim)},
                cache_dir)
    return ExactPoly.from_int_coeffs(prim, "a")


# ---------------------------------------------------------------------------
# numeric roots and indexing
# ---------------------------------------------------------------------------

def _roots_via_structure(ip):
    """Roots of an integer poly supported on a single residue class mod 3.

    Strips the a^s monomial factor, substitutes b = a^3 in the remainder,
    finds the b-roots with the staged Aberth solver, and maps back through
    cube roots; this keeps the threefold symmetry exact.  Falls back to
    plain Aberth when the support is not single-class.
    """
    klass = {j % 3 for j, c in enumerate(ip) if c}
    if len(klass) != 1:
        return rootfind.aberth_roots(ip)
    s = min(j for j, c in enumerate(ip) if c)
    body = ip[s:]
    g = body[::3]
    roots = [0.0] * s
    if len(g) > 1:
        xi = rootfind.aberth_roots(g)
        for x in xi:
            rad = abs(x) ** (1.0 / 3.0)
            th = np.angle(x) / 3.0
            for k in range(3):
                roots.append(rad * np.exp(1j * (th + 2 * np.pi * k / 3)))
    return np.asarray(roots, dtype=complex)


def sigma_points(n: int, cap: int = SIGMA_CAP_DEFAULT, cache_dir=None) -> BranchSet:
    """Numeric branching points with (row, column) grid indices.

    Columns are real-part bands counted from the RIGHT (j = 1 is the single
    rightmost point; column j holds exactly j points); rows are imaginary
    part bands counted bottom-to-top, the real axis being the middle row.
    Band clustering degrades once neighboring columns almost touch (large
    n); the points themselves are always returned, and the indexing failure
    is carried on the result for callers that actually need the grid.
    """
    poly = sigma_polynomial(n, cap=cap, cache_dir=cache_dir)
    ip, _ = poly._int_form()
    pts = _roots_via_structure(ip)
    pts = np.asarray(sorted(pts, key=lambda z: (z.real, z.imag)), dtype=complex)
    ps = PointSet(pts, label=f"branching points n={n}", meta={"n": n})
    try:
        rows, cols = _grid_index(n, pts)
        return BranchSet(n=n, disc_poly=poly, points=ps, rows=rows, cols=cols)
    except IndexingAmbiguity as exc:
        return BranchSet(n=n, disc_poly=poly, points=ps,
                         indexing_error=str(exc))


def _cluster_1d(values, expected=None, gap_factor=3.0):
    """Split sorted values at large gaps; returns cluster ids in value order."""
    order = np.argsort(values)
    sv = np.asarray(values)[order]
    if len(sv) == 1:
        return np.zeros(1, dtype=int)
    gaps = np.diff(sv)
    if expected is not None and expected <= len(sv):
        # cut at the expected-1 largest gaps
        cut_idx = np.sort(np.argsort(gaps)[-(expected - 1):]) if expected > 1 else []
        cuts = set((i for i in cut_idx))
    else:
        med = np.median(gaps[gaps > 0]) if (gaps > 0).any() else 0
        cuts = {i for i, g in enumerate(gaps) if med and g > gap_factor * med}
    ids_sorted = np.zeros(len(sv), dtype=int)
    cid = 0
    for i in range(1, len(sv)):
        if (i - 1) in cuts:
            cid += 1
        ids_sorted[i] = cid
    ids = np.empty(len(sv), dtype=int)
    ids[order] = ids_sorted
    return ids


def _grid_index(n, pts):
    # columns: n real-part bands, right-to-left numbering
    col_ids = _cluster_1d(pts.real, expected=n)
    ncols = col_ids.max() + 1
    cols = [int(ncols - c) for c in col_ids]           # rightmost band -> 1
    sizes = {}
    for c in cols:
        sizes[c] = sizes.get(c, 0) + 1
    if sorted(sizes.keys()) != list(range(1, n + 1)) or any(
        sizes[j] != j for j in sizes
    ):
        raise IndexingAmbiguity(
            f"column clustering sizes {sizes} do not match 1..{n}",
            points=pts,
        )
    # rows: imaginary-part bands, bottom-to-top (2n-1 of them; the real axis
    # is the middle row by the conjugation symmetry)
    expected_rows = 2 * n - 1 if len(pts) >= 2 * n - 1 else None
    row_ids = _cluster_1d(pts.imag, expected=expected_rows)
    rows = [int(r + 1) for r in row_ids]
    return rows, cols


def scaled_sigma(n: int, cap: int = SIGMA_CAP_DEFAULT, cache_dir=None) -> PointSet:
    """Branching points divided by (27/4)^(1/3) n^(2/3)."""
    bs = sigma_points(n, cap=cap, cache_dir=cache_dir)
    factor = SCALE_CONSTANT * n ** (2.0 / 3.0)
    out = bs.points.scaled(factor, label=f"scaled branching points n={n}")
    out.meta = {"n": n, "scaling": "(27/4)^(1/3) n^(2/3)"}
    return out


# ---------------------------------------------------------------------------
# set comparison and lattice stabilization
# ---------------------------------------------------------------------------

def compare_sets(A: PointSet, B: PointSet) -> dict:
    """Cardinalities, Hausdorff distance, mean nearest-neighbor distance,
    and the optimal-assignment total cost between two point sets."""
    from scipy.optimize import linear_sum_assignment

    pa = np.asarray(A.points if isinstance(A, PointSet) else A, dtype=complex)
    pb = np.asarray(B.points if isinstance(B, PointSet) else B, dtype=complex)
    out = {"card_a": len(pa), "card_b": len(pb)}
    if len(pa) == 0 or len(pb) == 0:
        out.update(hausdorff=math.inf, mean_nn=math.inf, assignment_cost=math.inf)
        return out
    D = np.abs(pa[:, None] - pb[None, :])
    d_ab = D.min(axis=1)
    d_ba = D.min(axis=0)
    out["hausdorff"] = float(max(d_ab.max(), d_ba.max()))
    out["mean_nn"] = float((d_ab.mean() + d_ba.mean()) / 2)
    if len(pa) == len(pb):
        ri, ci = linear_sum_assignment(D)
        out["assignment_cost"] = float(D[ri, ci].sum())
    else:
        out["assignment_cost"] = None
    return out


def lattice_probe(n: int, window, cache_dir=None) -> dict:
    """Drift of the unscaled branching lattice between n and n+3.

    window is (re_min, re_max, im_min, im_max); points of both sets inside
    are matched by nearest neighbor and the per-pair drift reported.
    """
    re0, re1, im0, im1 = window
    A = sigma_points(n, cache_dir=cache_dir).points.points
    B = sigma_points(n + 3, cache_dir=cache_dir).points.points

    def clip(pts):
        return pts[(pts.real >= re0) & (pts.real <= re1)
                   & (pts.imag >= im0) & (pts.imag <= im1)]

    a_in, b_in = clip(A), clip(B)
    out = {"n": n, "m": n + 3, "count_a": len(a_in), "count_b": len(b_in),
           "pairs": [], "max_drift": None, "mean_drift": None}
    if len(a_in) == 0 or len(b_in) == 0:
        return out
    spacing = _local_spacing(a_in if len(a_in) > 1 else A)
    drifts = []
    for z in a_in:
        w = b_in[np.argmin(np.abs(b_in - z))]
        drifts.append(abs(w - z))
        out["pairs"].append({"from": [z.real, z.imag], "to": [w.real, w.imag],
                             "drift": abs(w - z)})
    out["max_drift"] = float(max(drifts))
    out["mean_drift"] = float(np.mean(drifts))
    out["local_spacing"] = float(spacing)
    return out


def _local_spacing(pts):
    if len(pts) < 2:
        return math.inf
    D = np.abs(pts[:, None] - pts[None, :])
    np.fill_diagonal(D, np.inf)
    return float(np.median(D.min(axis=1)))


def distinct_imag_report(n: int, tol: float = 1e-9, cache_dir=None) -> dict:
    """Are the imaginary parts of the nonreal branching points all distinct?

    The standard-path construction relies on this numerically observed fact;
    it is verified per n and violations are reported, never assumed.
    """
    pts = sigma_points(n, cache_dir=cache_dir).points.points
    nonreal = pts[np.abs(pts.imag) > tol]
    ims = np.sort(nonreal.imag)
    gaps = np.diff(ims)
    viol = [(float(ims[i]), float(ims[i + 1]))
            for i in np.nonzero(gaps < tol)[0]]
    return {"n": n, "nonreal_count": len(nonreal), "violations": viol,
            "all_distinct": not viol,
            "min_gap": float(gaps.min()) if len(gaps) else math.inf}


def sigma_points_numeric(n: int, window=None, grid: int = 160,
                         gap_tol: float = 1e-6) -> PointSet:
    """NON-EXACT fallback beyond the exact-resultant cap.

    Scans an a-grid for near-collisions of eigenvalues and polishes each
    local minimum by minimizing gap^4 (the gap is a sqrt-type cone at a
    collision, so its fourth power is smooth there).  The result is a
    numerical estimate: points can be missed or duplicated near the grid
    resolution, unlike the exact route, and nothing here is certified.
    """
    from scipy.optimize import minimize

    from .spectral import build_matrix

    if window is None:
        R = 1.15 * SCALE_CONSTANT * n ** (2.0 / 3.0)
        window = (-R, R, -R, R)
    re0, re1, im0, im1 = window

    def min_gap(a):
        lam = np.linalg.eigvals(build_matrix(n, complex(a[0], a[1])).matrix)
        D = np.abs(lam[:, None] - lam[None, :]) + np.diag([np.inf] * len(lam))
        return float(D.min())

    xs = np.linspace(re0, re1, grid)
    ys = np.linspace(im0, im1, grid)
    gap = np.empty((grid, grid))
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            gap[i, j] = min_gap((x, y))
    scale = float(np.median(gap))
    found = []
    thresh = np.percentile(gap, 15)
    for i in range(1, grid - 1):
        for j in range(1, grid - 1):
            v = gap[i, j]
            if v > thresh:
                continue
            if v == gap[i - 1 : i + 2, j - 1 : j + 2].min():
                res = minimize(lambda a: min_gap(a) ** 4,
                               x0=[xs[i], ys[j]], method="Nelder-Mead",
                               options={"xatol": 1e-12, "fatol": 0,
                                        "maxiter": 800})
                if res.fun ** 0.25 < gap_tol * max(scale, 1.0):
                    z = complex(res.x[0], res.x[1])
                    if all(abs(z - w) > 1e-5 for w in found):
                        found.append(z)
    pts = np.asarray(sorted(found, key=lambda z: (z.real, z.imag)),
                     dtype=complex)
    return PointSet(pts, label=f"branching points n={n} (numeric, non-exact)",
                    meta={"n": n, "exact": False, "grid": grid})


def topology_table(a_values, n_probe: int = 200, cache_dir=None) -> list:
    """Falsification table: the support shape at each sampled parameter.

    Interior points of the scaled triangle should report three legs and
    exterior ones a single arc; the table reports what was measured, it does
    not assume the pattern.
    """
    from .quaddiff import support_topology

    out = []
    for a in a_values:
        verdict, details = support_topology(a, n_probe=n_probe,
                                            cache_dir=cache_dir)
        out.append({"a": [complex(a).real, complex(a).imag],
                    "verdict": verdict, **details})
    return out


def scaling_constants_agree() -> bool:
    """The two stated growth constants coincide: (27/4)^(1/3) == 3/4^(1/3);
    checked exactly on cubes."""
    from fractions import Fraction

    return Fraction(27, 4) == Fraction(3, 1) ** 3 / Fraction(4, 1)
