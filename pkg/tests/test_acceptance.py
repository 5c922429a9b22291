"""Acceptance gate: every criterion at its stated tolerance.

Run with ``pytest -s tests/test_acceptance.py`` to see one PASS/FAIL line
per criterion (the CLI ``qmanin verify`` prints the same lines).
"""

import pytest

from qmanin.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number,name",
                         [(num, name) for num, name, _ in CRITERIA],
                         ids=[f"{num:02d}-{name}" for num, name, _ in CRITERIA])
def test_criterion(number, name):
    result = run_criterion(number)
    print(result.line())
    assert result.passed, result.detail
