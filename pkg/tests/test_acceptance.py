"""Acceptance gate: one PASS/FAIL line per criterion.

Run directly (``python3 tests/test_acceptance.py``) for just the lines, or
through pytest, where each criterion is its own test and the line is
printed to the terminal regardless of output capture.
"""

import json
import sys

import pytest

from critlib import suite


@pytest.mark.parametrize("number", sorted(suite.CHECKS))
def test_criterion(number, capsys):
    result = suite.run_check(number)
    with capsys.disabled():
        print(f"\n{result.line()}")
    assert result.passed, json.dumps(result.detail, indent=1, sort_keys=True)


def test_report_is_deterministic():
    a = suite.run_check(2).to_json()
    b = suite.run_check(2).to_json()
    assert a == b and "seconds" not in a


if __name__ == "__main__":
    results = suite.run_all()
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
