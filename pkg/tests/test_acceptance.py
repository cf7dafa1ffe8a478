"""Acceptance suite: one test per criterion, each printing a single status line."""

import pytest

from artifact.verify import ALL_N, CRITERIA, Context


@pytest.fixture(scope="module")
def ctx():
    return Context(ALL_N)


@pytest.mark.parametrize("criterion", CRITERIA, ids=[c.key for c in CRITERIA])
def test_criterion(ctx, criterion, capsys):
    result = criterion(ctx)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, f"{result.key} failed: {result.detail} {result.failures[:5]}"
