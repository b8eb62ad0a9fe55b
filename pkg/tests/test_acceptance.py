"""Runs every acceptance criterion once and prints one PASS/FAIL line each."""

from __future__ import annotations

import pytest

from orlicz_toeplitz.acceptance import CRITERIA

_results = {}


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda fn: f"c{fn.number:02d}_{fn.__name__}")
def test_criterion(criterion, capsys):
    res = criterion()
    _results[res.number] = res
    with capsys.disabled():
        print(f"\n{res.line()}")
    assert res.passed, res.detail


def test_summary(capsys):
    with capsys.disabled():
        print("\nacceptance summary")
        for number in sorted(_results):
            print(_results[number].line())
    assert all(r.passed for r in _results.values())
