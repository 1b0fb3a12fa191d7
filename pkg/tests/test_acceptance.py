"""Acceptance gate: every criterion runs at its pinned tolerance and prints
one PASS/FAIL line."""

import pytest

from cylbuck import acceptance


@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA))
def test_criterion(number, capsys):
    result = acceptance.run_all([number])[0]
    with capsys.disabled():
        print(result.line())
    assert result.passed, result.details
