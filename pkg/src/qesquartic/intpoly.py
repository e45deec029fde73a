"""Dense univariate polynomial arithmetic over Python big integers.

Polynomials are plain lists of int coefficients in ascending degree, with no
trailing zeros (the zero polynomial is the empty list).  This module is the
exact-arithmetic workhorse underneath the public ExactPoly type: everything
here is closed over the integers and never rounds.

Multiplication switches to Kronecker substitution above a size threshold:
the two polynomials are packed into single big integers with enough bits per
digit to hold every convolution coefficient, multiplied once (CPython's big
int product is subquadratic), and unpacked with signed-digit borrows.
"""

from __future__ import annotations

import math
from fractions import Fraction

KRONECKER_MIN_LEN = 32
DEGREE_CAP = 100_000


def trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def add(p, q):
    r = [0] * max(len(p), len(q))
    for i, c in enumerate(p):
        r[i] += c
    for i, c in enumerate(q):
        r[i] += c
    return trim(r)


def sub(p, q):
    r = [0] * max(len(p), len(q))
    for i, c in enumerate(p):
        r[i] += c
    for i, c in enumerate(q):
        r[i] -= c
    return trim(r)


def neg(p):
    return [-c for c in p]


def scale(p, c):
    if c == 0:
        return []
    return [c * x for x in p]


def mul(p, q):
    if not p or not q:
        return []
    if len(p) + len(q) - 1 > DEGREE_CAP:
        from .errors import DegreeCapExceeded

        raise DegreeCapExceeded(
            f"product degree {len(p) + len(q) - 2} exceeds cap {DEGREE_CAP}"
        )
    if min(len(p), len(q)) >= KRONECKER_MIN_LEN:
        return _mul_kronecker(p, q)
    r = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                r[i + j] += a * b
    return trim(r)


def _mul_kronecker(p, q):
    # bits per digit: every convolution coefficient plus sign headroom
    mp = max(abs(c) for c in p)
    mq = max(abs(c) for c in q)
    bound = mp * mq * min(len(p), len(q)) * 2 + 1
    B = bound.bit_length() + 1
    P = 0
    for c in reversed(p):
        P = (P << B) + c
    Q = 0
    for c in reversed(q):
        Q = (Q << B) + c
    R = P * Q
    out = []
    half = 1 << (B - 1)
    mask = (1 << B) - 1
    carry = 0
    for _ in range(len(p) + len(q) - 1):
        d = (R & mask) + carry
        R >>= B
        # digits at or past the half range are borrows from a negative coeff;
        # d can land exactly on 1<<B when a borrow rolls a zero digit over
        if d >= half:
            d -= 1 << B
            carry = 1
        else:
            carry = 0
        out.append(d)
    return trim(out)


def deriv(p):
    return [i * c for i, c in enumerate(p)][1:]


def div_exact(p, q):
    """Exact quotient p/q over the integers; raises NotDivisible otherwise."""
    from .errors import NotDivisible

    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    if not p:
        return []
    if len(p) < len(q):
        raise NotDivisible("degree of dividend below divisor")
    r = list(p)
    qd = len(q) - 1
    qlc = q[-1]
    out = [0] * (len(p) - qd)
    for i in range(len(p) - 1, qd - 1, -1):
        c = r[i]
        if c == 0:
            continue
        if c % qlc != 0:
            raise NotDivisible(f"leading reduction not integral at degree {i}")
        f = c // qlc
        out[i - qd] = f
        for j in range(qd + 1):
            r[i - qd + j] -= f * q[j]
    if any(r):
        raise NotDivisible("nonzero remainder")
    return trim(out)


def content(p):
    g = 0
    for c in p:
        g = math.gcd(g, c)
        if g == 1:
            return 1
    return g


def primitive(p):
    """Primitive part with positive leading coefficient; returns (pp, unit*content)."""
    if not p:
        return [], 0
    g = content(p)
    if p[-1] < 0:
        g = -g
    return [c // g for c in p], g


def eval_int(p, x: int) -> int:
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def eval_fraction(p, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def sign_at(p, x) -> int:
    """Sign of p at a rational point (integer arithmetic, no Fraction churn)."""
    if not p:
        return 0
    if isinstance(x, int):
        v = eval_int(p, x)
    else:
        num, den = x.numerator, x.denominator
        v = 0
        # sum c_k num^k den^(d-k)
        d = len(p) - 1
        pw_num = 1
        pows = [1]
        for _ in range(d):
            pw_num *= num
            pows.append(pw_num)
        pw_den = 1
        for k in range(d, -1, -1):
            v += p[k] * pows[k] * pw_den
            pw_den *= den
    return (v > 0) - (v < 0)


def sign_at_inf(p, positive: bool) -> int:
    if not p:
        return 0
    lc = p[-1]
    s = (lc > 0) - (lc < 0)
    if not positive and (len(p) - 1) % 2 == 1:
        s = -s
    return s


def gcd(p, q):
    """Integer polynomial gcd (primitive, positive leading coefficient)."""
    a = primitive(list(p))[0] if p else []
    b = primitive(list(q))[0] if q else []
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem_even(a, b)
        if r:
            r = primitive(r)[0]
        a, b = b, r
    return a


def _prem_even(p, q):
    """Pseudo-remainder of p by q, scaled by a positive factor only.

    Each elimination multiplies the remainder by lc(q); when that happened an
    odd number of times and lc(q) < 0, one extra multiplication makes the
    total factor an even power, so signs are preserved (needed for Sturm).
    """
    dq = len(q) - 1
    lc = q[-1]
    r = list(p)
    mult = 0
    while r and len(r) - 1 >= dq:
        dr = len(r) - 1
        top = r[-1]
        new = [lc * c for c in r[:-1]]
        sh = dr - dq
        for j in range(dq):
            new[sh + j] -= top * q[j]
        r = trim(new)
        mult += 1
    if mult % 2 == 1 and lc < 0:
        r = [lc * c for c in r]
    return r


def squarefree_part(p):
    """p / gcd(p, p'), primitive."""
    g = gcd(p, deriv(p))
    if len(g) <= 1:
        return primitive(list(p))[0]
    q = div_exact_rational(p, g)
    return primitive(q)[0]


def div_exact_rational(p, q):
    """Quotient of p by q when q | p over Q; result scaled to integers."""
    if len(p) < len(q):
        from .errors import NotDivisible

        raise NotDivisible("degree of dividend below divisor")
    # do the division over Fractions then clear denominators
    fp = [Fraction(c) for c in p]
    fq = [Fraction(c) for c in q]
    out = [Fraction(0)] * (len(p) - len(q) + 1)
    r = fp
    qd = len(q) - 1
    for i in range(len(p) - 1, qd - 1, -1):
        c = r[i]
        if c == 0:
            continue
        f = c / fq[-1]
        out[i - qd] = f
        for j in range(qd + 1):
            r[i - qd + j] -= f * fq[j]
    if any(r):
        from .errors import NotDivisible

        raise NotDivisible("nonzero remainder in rational division")
    den = 1
    for c in out:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return trim([int(c * den) for c in out])


# ---------------------------------------------------------------------------
# Sturm machinery
# ---------------------------------------------------------------------------

def sturm_sequence(p):
    """Integer Sturm sequence of p (primitive-reduced, sign-faithful)."""
    s0, _ = primitive(list(p))
    seq = [s0]
    d = deriv(s0)
    if d:
        d, _ = primitive(d)
        seq.append(d)
    while len(seq[-1]) > 1:
        r = _prem_even(seq[-2], seq[-1])
        if not r:
            break
        r = neg(r)
        r, _ = _positive_primitive(r)
        seq.append(r)
    return seq


def _positive_primitive(p):
    """Divide by positive content only (keeps the sign of every coefficient)."""
    g = content(p)
    if g in (0, 1):
        return list(p), 1
    return [c // g for c in p], g


def sign_variations(signs) -> int:
    v = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev != 0 and s != prev:
            v += 1
        prev = s
    return v


def sturm_count(seq, lo, hi) -> int:
    """Number of distinct real roots in (lo, hi]; lo/hi may be +-math.inf."""
    def vs(x):
        if x == math.inf:
            return sign_variations([sign_at_inf(s, True) for s in seq])
        if x == -math.inf:
            return sign_variations([sign_at_inf(s, False) for s in seq])
        return sign_variations([sign_at(s, x) for s in seq])

    return vs(lo) - vs(hi)


def root_bound(p) -> int:
    """Cauchy bound: every real root lies in (-B, B)."""
    lc = abs(p[-1])
    m = max(abs(c) for c in p[:-1]) if len(p) > 1 else 0
    return 1 + (m + lc - 1) // lc + 1


def isolate_real_roots(p, lo=None, hi=None, seq=None, hints=None):
    """Disjoint rational intervals (a, b], one per distinct real root in (lo, hi].

    `hints` may carry approximate root locations (floats) used to propose
    cut points; every interval is still certified by exact Sturm counts.
    """
    if seq is None:
        seq = sturm_sequence(p)
    B = root_bound(p)
    lo = Fraction(-B) if lo is None else Fraction(lo)
    hi = Fraction(B) if hi is None else Fraction(hi)
    total = sturm_count(seq, lo, hi)
    if total == 0:
        return []
    cuts = [lo, hi]
    if hints is not None:
        hs = sorted(float(h) for h in hints if lo < h <= hi)
        for a, b in zip(hs, hs[1:]):
            m = _simple_rational_between(a, b)
            if m is not None and lo < m < hi:
                cuts.append(m)
    cuts = sorted(set(cuts))
    stack = [(cuts[i], cuts[i + 1]) for i in range(len(cuts) - 1)]
    out = []
    while stack:
        a, b = stack.pop()
        c = sturm_count(seq, a, b)
        if c == 0:
            continue
        if c == 1:
            out.append((a, b))
            continue
        m = (a + b) / 2
        stack.append((a, m))
        stack.append((m, b))
    out.sort()
    return out


def _simple_rational_between(a: float, b: float):
    """A rational with small denominator strictly between floats a < b."""
    if not a < b:
        return None
    # integer first
    ia = math.floor(a) + 1
    if a < ia < b:
        return Fraction(ia)
    den = 1
    while den <= 1 << 60:
        den *= 2
        k = math.floor(a * den) + 1
        if a * den < k < b * den:
            return Fraction(k, den)
    return None


def refine_interval(p, a: Fraction, b: Fraction, seq=None, bits=60):
    """Shrink an isolating interval (a,b] of p by bisection to ~2^-bits width."""
    if seq is None:
        seq = sturm_sequence(p)
    target = (b - a) / (1 << bits)
    while b - a > target:
        m = (a + b) / 2
        if sturm_count(seq, a, m) == 1:
            b = m
        else:
            a = m
    return a, b


# ---------------------------------------------------------------------------
# Sylvester resultant (fraction-free)
# ---------------------------------------------------------------------------

def sylvester_resultant(p, q):
    """det of the Sylvester matrix of p, q (p's coefficients in the top rows).

    Fraction-free Bareiss elimination over the integers; the exact
    determinant, including its sign.
    """
    dp, dq = len(p) - 1, len(q) - 1
    if dp < 0 or dq < 0:
        return 0
    if dp == 0:
        return p[0] ** dq if dq >= 0 else 1
    if dq == 0:
        return q[0] ** dp
    n = dp + dq
    M = [[0] * n for _ in range(n)]
    prow = list(reversed(p))
    qrow = list(reversed(q))
    for i in range(dq):
        for j, c in enumerate(prow):
            M[i][i + j] = c
    for i in range(dp):
        for j, c in enumerate(qrow):
            M[dq + i][i + j] = c
    return _bareiss_det(M)


def _bareiss_det(M):
    n = len(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k] != 0:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = M[k][k]
        for i in range(k + 1, n):
            row_i = M[i]
            row_k = M[k]
            mik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pk - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pk
    return sign * M[n - 1][n - 1]
