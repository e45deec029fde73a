"""Structure theory of the a = 0 spectral polynomials.

At a = 0 the characteristic polynomial collapses onto every third power of x
and splits, after the sign-simplifying variable flip x -> -x, into three
families P_l, Q_l, R_l of monic integer polynomials in xi = x^3 defined by
the triple recurrence

    P_l = xi R_{l-1} + (n-3l+2)(n-3l+3)(3l-2)(3l-1) P_{l-1}
    Q_l = P_l + (n-3l+1)(n-3l+2)(3l-1)(3l) Q_{l-1}
    R_l = Q_l + (n-3l)(n-3l+1)(3l)(3l+1) R_{l-1}

with P_0 = Q_0 = R_0 = 1.  All three have positive coefficients, so their
real roots are negative; this module certifies - in exact integer
arithmetic, never floating point - that the roots are real, simple, negative
and interlace along the recurrence chains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import intpoly
from .errors import MultipleRoot, StructureViolation
from .exactpoly import ExactPoly
from .spectral import spectral_polynomial, zero_a_structure


@dataclass
class PQRTriple:
    """P_l, Q_l, R_l at one recurrence depth l for a fixed n (xi = x^3)."""

    n: int
    l: int
    P: ExactPoly
    Q: ExactPoly
    R: ExactPoly


def pqr_sequences(n: int):
    """All triples for l = 0..floor(n/3); exact integer recurrence."""
    if n < 3:
        raise ValueError("n must be >= 3 for a nontrivial triple recurrence")
    P, Q, R = [1], [1], [1]
    out = [PQRTriple(n, 0,
                     ExactPoly.from_int_coeffs(P, "xi"),
                     ExactPoly.from_int_coeffs(Q, "xi"),
                     ExactPoly.from_int_coeffs(R, "xi"))]
    for l in range(1, n // 3 + 1):
        cP = (n - 3 * l + 2) * (n - 3 * l + 3) * (3 * l - 2) * (3 * l - 1)
        cQ = (n - 3 * l + 1) * (n - 3 * l + 2) * (3 * l - 1) * (3 * l)
        cR = (n - 3 * l) * (n - 3 * l + 1) * (3 * l) * (3 * l + 1)
        Pn = intpoly.add([0] + R, intpoly.scale(P, cP))
        Qn = intpoly.add(Pn, intpoly.scale(Q, cQ))
        Rn = intpoly.add(Qn, intpoly.scale(R, cR))
        P, Q, R = Pn, Qn, Rn
        out.append(PQRTriple(n, l,
                             ExactPoly.from_int_coeffs(P, "xi"),
                             ExactPoly.from_int_coeffs(Q, "xi"),
                             ExactPoly.from_int_coeffs(R, "xi")))
    return out


def factor_structure(n: int):
    """(r, q) with det(M - x I)|_{a=0} = (-1)^(n+1) x^r q(x^3) and q monic.

    r is 0, 1, 2 according to n+1 = 3k, 3k+1, 3k+2; the identity is verified
    exactly against the recurrence-built characteristic polynomial, and a
    StructureViolation is raised if any coefficient escapes the x^(3j+r)
    support.
    """
    r, q_int = zero_a_structure(n)
    q = ExactPoly.from_int_coeffs(q_int, "xi")
    # exact reconstruction check
    rebuilt = q.compose_cube().shift_up(r) * ((-1) ** (n + 1))
    if rebuilt != spectral_polynomial(n, 0):
        raise StructureViolation(f"reconstruction failed for n={n}")
    return r, q


def pqr_matches_factor(n: int) -> bool:
    """Cross-check the two conventions: q(xi) == (-1)^k F_k(-xi) exactly.

    F is P, Q or R according to n+1 = 3k, 3k+1, 3k+2 (k = floor((n+1)/3));
    the (-1)^k makes the right side monic, matching q.
    """
    r, q = factor_structure(n)
    k = (n + 1) // 3
    if k == 0:
        return q == ExactPoly.one("xi")
    if n == 2:  # P_1 = xi + 2n^2 - 2n, below the n >= 3 triple range
        return q == ExactPoly.from_int_coeffs([2 * n * n - 2 * n, 1], "xi") \
            .negate_variable() * (-1)
    triples = pqr_sequences(n)
    fam = {0: "P", 1: "Q", 2: "R"}[r]
    if k <= n // 3:
        F = getattr(triples[k], fam)
    else:
        # n+1 = 3k: the factor is P_k, one step past the l <= n//3 triples
        assert r == 0 and k == n // 3 + 1
        prev = triples[k - 1]
        cP = (n - 3 * k + 2) * (n - 3 * k + 3) * (3 * k - 2) * (3 * k - 1)
        F = _xi_times(prev.R) + prev.P * cP
    return q == F.negate_variable() * ((-1) ** k)


def _all_roots_negative_simple(p: ExactPoly) -> bool:
    """Exact: every root of p real, simple, and in (-inf, 0)."""
    ip, _ = p._int_form()
    if len(ip) <= 1:
        return True
    seq = intpoly.sturm_sequence(ip)
    d = len(ip) - 1
    count = intpoly.sturm_count(seq, -math.inf, Fraction(0))
    # d distinct roots, all strictly negative: real-rooted, simple, negative
    return count == d and intpoly.sign_at(ip, 0) != 0


def certify_interlacing(p: ExactPoly, q: ExactPoly) -> str:
    """Exact interlacing verdict for real-rooted p, q.

    Accepts deg p = deg q or deg p = deg q + 1.  Returns
    "interlacing-with-largest-in-p" or "not-interlacing".  Root isolation is
    Sturm-based bisection over the rationals; float roots are used only to
    propose cut points, every count is certified exactly.  Raises
    MultipleRoot if either polynomial is not squarefree.
    """
    if not (p.degree - q.degree in (0, 1)):
        raise ValueError("degrees must differ by 0 or 1 (p the larger)")
    ip, _ = p._int_form()
    iq, _ = q._int_form()
    for u, name in ((ip, "p"), (iq, "q")):
        if len(u) > 1 and len(intpoly.gcd(u, intpoly.deriv(u))) > 1:
            raise MultipleRoot(f"{name} is not squarefree")
    if intpoly.gcd(ip, iq) and len(intpoly.gcd(ip, iq)) > 1:
        return "not-interlacing"  # shared root: not strictly interlacing
    seq_p = intpoly.sturm_sequence(ip)
    seq_q = intpoly.sturm_sequence(iq)
    dp, dq = len(ip) - 1, len(iq) - 1
    if intpoly.sturm_count(seq_p, -math.inf, math.inf) != dp:
        return "not-interlacing"
    if dq and intpoly.sturm_count(seq_q, -math.inf, math.inf) != dq:
        return "not-interlacing"
    hints = _float_root_hints(ip, iq)
    ivs_p = intpoly.isolate_real_roots(ip, seq=seq_p, hints=hints)
    ivs_q = intpoly.isolate_real_roots(iq, seq=seq_q, hints=hints)
    # refine until the two interval families are pairwise disjoint
    ivs_p, ivs_q = _disjoin(ip, seq_p, ivs_p, iq, seq_q, ivs_q)
    marked = sorted([(a, b, "p") for a, b in ivs_p] + [(a, b, "q") for a, b in ivs_q])
    pattern = "".join(m[2] for m in marked)
    if dp == dq:
        ok = pattern == "qp" * dp
    else:
        ok = pattern == "p" + "qp" * dq
    return "interlacing-with-largest-in-p" if ok else "not-interlacing"


def _float_root_hints(ip, iq):
    hints = []
    for u in (ip, iq):
        if len(u) <= 1:
            continue
        try:
            sc = _float_scaled(u)
            hints.extend(np.roots(sc[::-1]).real.tolist())
        except Exception:
            pass
    return hints


def _float_scaled(u):
    """Float image of an integer poly, scaled to avoid overflow."""
    logs = [math.log(abs(c)) if c else None for c in u]
    top = max(v for v in logs if v is not None)
    out = []
    for c, lv in zip(u, logs):
        if c == 0:
            out.append(0.0)
        else:
            v = math.exp(lv - top)
            out.append(v if c > 0 else -v)
    return out


def _disjoin(ip, seq_p, ivs_p, iq, seq_q, ivs_q, max_passes=4000):
    """Bisect isolating intervals until no p-interval overlaps a q-interval.

    Tight pairs can be genuinely close here (each family is a small relative
    perturbation of its predecessor at the top recurrence depths), so the
    budget is generous; coincidence proper is excluded beforehand by the gcd
    check, so this terminates.
    """
    for _ in range(max_passes):
        overlaps = _all_overlaps(ivs_p, ivs_q)
        if not overlaps:
            return ivs_p, ivs_q
        for i, j in overlaps:
            ivs_p[i] = _shrink(ip, seq_p, ivs_p[i])
            ivs_q[j] = _shrink(iq, seq_q, ivs_q[j])
    raise MultipleRoot("could not separate root intervals (roots may coincide)")


def _all_overlaps(ivs_p, ivs_q):
    out = []
    for i, (a, b) in enumerate(ivs_p):
        for j, (c, d) in enumerate(ivs_q):
            if not (b <= c or d <= a):
                out.append((i, j))
    return out


def _shrink(u, seq, iv):
    a, b = iv
    m = (a + b) / 2
    if intpoly.sturm_count(seq, a, m) == 1:
        return (a, m)
    return (m, b)


def certify_all(n: int):
    """Certification record for one n: structure, negativity, interlacing.

    Returns a dict with per-l verdicts; everything certified exactly.  The
    interlacing arrows checked are the three that define each new triple:
    xi R_{l-1} <- P_l, P_l <- Q_l, Q_l <- R_l.
    """
    import time

    t0 = time.time()
    r, q = factor_structure(n)
    rec = {"n": n, "r": r, "q_degree": q.degree, "structure_ok": True,
           "pqr": [], "seconds": None}
    if n >= 3:
        triples = pqr_sequences(n)
        for l in range(1, len(triples)):
            t = triples[l]
            prev = triples[l - 1]
            entry = {"l": l}
            for name in ("P", "Q", "R"):
                entry[f"{name}_neg_simple"] = _all_roots_negative_simple(
                    getattr(t, name)
                )
            # arrowheads per the proof chains: the largest root (nearest 0)
            # sits in xi*R_{l-1}, then P_l, then Q_l respectively.  At the
            # top depth a recurrence coefficient can vanish, leaving the two
            # polynomials identical; that degenerate step is recorded as such.
            entry["xiR_P"] = _arrow(_xi_times(prev.R), t.P)
            entry["P_Q"] = _arrow(t.P, t.Q)
            entry["Q_R"] = _arrow(t.Q, t.R)
            rec["pqr"].append(entry)
    rec["seconds"] = round(time.time() - t0, 3)
    return rec


def _xi_times(p: ExactPoly) -> ExactPoly:
    return p.shift_up(1)


def _arrow(p: ExactPoly, q: ExactPoly) -> str:
    if p == q:
        return "degenerate-equal"
    return certify_interlacing(p, q)


def certification_report(n_values) -> str:
    """JSON certification report: per-n, per-l verdicts with timing."""
    import json

    return json.dumps({"records": [certify_all(n) for n in n_values]},
                      sort_keys=True, indent=1)
