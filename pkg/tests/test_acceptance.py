"""Acceptance gate: one test per documented criterion, at its stated
tolerance, printing one PASS/FAIL line each.

Criterion 7's scaled-modulus band is implemented exactly as stated and is
expected to fail: the measured max|zeros|/n^(2/3) at n=40 is 2.2479 against
the asymptotic constant 2.7257 (17.5% low, outside the 10% band), confirmed
by two independent exact methods; the corner regions of the zero triangle
fill at rate ~n^(-1/3), so the band is unattainable at n=40.  See the test
message for the measured numbers.

Environment knobs:
  QESQ_ACCEPT_N40=1   extend the branching-suite degree checks to n=40
                      (tens of minutes cold, cached afterwards)
"""

import os

from qesquartic import verify, yv


def _report(rec):
    status = "PASS" if rec["passed"] else "FAIL"
    line = f"[{status}] {rec['name']}: {rec['detail']} ({rec['seconds']}s)"
    print(line)
    return rec["passed"], line


def test_criterion_01_exact_structure():
    ok, line = _report(verify.criterion_exact_structure(n_max=60))
    assert ok, line


def test_criterion_02_oracle_equivalence():
    ok, line = _report(verify.criterion_oracle_equivalence(n_max=12, trials=20))
    assert ok, line


def test_criterion_03_scaling_limit():
    ok, line = _report(verify.criterion_scaling_limit((50, 100, 200)))
    assert ok, line


def test_criterion_04_cauchy_consistency():
    ok, line = _report(verify.criterion_cauchy_consistency(n=200, n_points=10,
                                                           radius=2.0, tol=1e-2))
    assert ok, line


def test_criterion_05_branch_endpoint_algebra():
    ok, line = _report(verify.criterion_branch_endpoint_algebra())
    assert ok, line


def test_criterion_06_real_interval():
    ok, line = _report(verify.criterion_real_interval((1.9, 2.5, 3.0),
                                                      tau_samples=1000,
                                                      tol=1e-6))
    assert ok, line


def test_criterion_07_yv_exact_parts():
    """Divisibility, degrees, fixed members, Painleve residual (attainable)."""
    seq = yv.yv_generate(40)
    for n in range(41):
        assert seq[n].degree == n * (n + 1) // 2
    assert [int(c) for c in seq[2].coeffs] == [4, 0, 0, 1]
    assert [int(c) for c in seq[3].coeffs] == [-80, 0, 0, 20, 0, 0, 1]
    worst = 0.0
    for n in range(1, 11):
        worst = max(worst, yv.painleve_residual(n, 0.8 + 0.07 * n))
    print(f"[PASS] yv-exact-parts: divisibility+degrees n<=40, "
          f"worst ODE residual {worst:.2e}")
    assert worst < 1e-6


def test_criterion_07_yv_scaling_band():
    """The 10% band at n=40, asserted exactly as stated.

    KNOWN RED: the exact value is ~17.5% below the asymptotic constant
    (verified independently by staged-Aberth roots and by exact Newton power
    sums, agreeing to 5 digits); the required band is unattainable at n=40.
    """
    ratio = yv.scaled_zeros(40).max_modulus()
    status = "PASS" if abs(ratio - 1.0) < 0.10 else "FAIL"
    print(f"[{status}] yv-scaling-band: max|zeros_40|/(9/2)^(2/3)/40^(2/3) "
          f"= {ratio:.4f}, required within 0.10 of 1")
    assert abs(ratio - 1.0) < 0.10, (
        f"measured {ratio:.4f} (i.e. {abs(ratio - 1) * 100:.1f}% off); "
        "exact computation (Aberth roots and Newton power sums agree to five "
        "digits) shows the zero-triangle corners fill at ~n^(-1/3), so the "
        "10% band cannot hold at n=40; it would first hold near n ~ 190"
    )


def test_criterion_08_branching_suite():
    ns = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 16, 20]
    if os.environ.get("QESQ_ACCEPT_N40") == "1":
        ns.append(40)
    ok, line = _report(verify.criterion_sigma(tuple(ns)))
    assert ok, line


def test_criterion_09_triangle_comparison():
    ok, line = _report(verify.criterion_fig2_trend((10, 20)))
    assert ok, line


def test_criterion_10_monodromy_suite():
    ok, line = _report(verify.criterion_monodromy(n_paths_max=6))
    assert ok, line


def test_criterion_11_topology():
    ok, line = _report(verify.criterion_topology(n_probe=200))
    assert ok, line


def test_criterion_12_determinism(tmp_path):
    ok, line = _report(verify.criterion_determinism(str(tmp_path)))
    assert ok, line
