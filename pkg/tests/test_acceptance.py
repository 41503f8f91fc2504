"""Acceptance gate: every top-level criterion at its pinned tolerance.

Each test prints one PASS/FAIL line per checked value (run pytest with -s
to see them).  The criteria live in zetaquant.acceptance so the CLI
`verify-all` command runs exactly the same checks.
"""

import pytest

from zetaquant import acceptance


def _assert_report(report):
    lines = []
    ok = True
    for row in report.values:
        status = "PASS" if row.passed else "FAIL"
        ok = ok and row.passed
        disc = f" disc={row.disc:.3g}" if row.disc is not None else ""
        tol = f" tol={row.tol:g}" if row.tol is not None else ""
        line = f"[{status}] {report.command}: {row.label}{disc}{tol}"
        lines.append(line)
        print(line)
    assert ok, "failed checks:\n" + "\n".join(l for l in lines if l.startswith("[FAIL]"))


def test_criterion_1_determinant_identities():
    _assert_report(acceptance.criterion_determinant_identities(seed=0))


def test_criterion_2_bergman_suite():
    _assert_report(acceptance.criterion_bergman())


def test_criterion_3_gamma_reconstruction():
    _assert_report(acceptance.criterion_gamma())


def test_criterion_4_euler_product():
    _assert_report(acceptance.criterion_euler())


def test_criterion_5_xi_reconstruction(zeros_path):
    _assert_report(acceptance.criterion_xi(zeros_path))


def test_criterion_5b_xi_relaxed_thousand(zeros_path):
    _assert_report(acceptance.criterion_xi(zeros_path, n_zeros=10**3))


def test_criterion_6_zeta_three_determinants(zeros_path):
    _assert_report(acceptance.criterion_zeta(zeros_path))


def test_criterion_7_quantized_hadamard():
    _assert_report(acceptance.criterion_hadamard())


def test_criterion_8_curves():
    _assert_report(acceptance.criterion_curves(seed=0))


def test_criterion_9_classification():
    _assert_report(acceptance.criterion_classification())


def test_criterion_10_rh_predicate(zeros_path):
    _assert_report(acceptance.criterion_rh_predicate(zeros_path))
