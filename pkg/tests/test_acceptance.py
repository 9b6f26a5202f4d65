"""Acceptance gate: one test per verification criterion, each printing a
pass/fail line with its headline measurements."""

import pytest

from switchlab import verify

CRITERIA = [
    ("1 exact fugal constants", "fugal.constants_exact"),
    ("2 quadratic sandwich", "fugal.quadratic_sandwich"),
    ("3 closed-form operator", "fugal.operator_closed_form"),
    ("4 high-d lower bound", "bounds.highd_lower"),
    ("5 one-d lower bound", "bounds.onedim_lower"),
    ("6 upper bounds", "bounds.upper_minibatch_halfsplit"),
    ("7 oracle sandwich", "oracle.sandwich"),
    ("8 unequal blocks", "fugal.unequal_blocks"),
    ("9 closed-form R(K)", "oracle.unconstrained_closed_form"),
    ("10 Linf decomposition", "bounds.linf_decomposition"),
    ("module invariants", "core.invariants"),
]


@pytest.mark.parametrize("label,check_name", CRITERIA, ids=[c[1] for c in CRITERIA])
def test_acceptance(label, check_name):
    result = verify.run_check(check_name)
    status = "PASS" if result.status == "pass" else "FAIL"
    print(f"[acceptance {label}] {status} in {result.elapsed_s:.1f}s "
          f"measured={result.measured}")
    assert result.status == "pass", "\n".join(result.failures)
