"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import pytest

from relext import verify


@pytest.mark.parametrize("k", list(range(1, 12)))
def test_criterion(k, capsys):
    out = verify.criterion(k, seed=0)
    with capsys.disabled():
        print()
        print(out.summary())
    assert out.passed, "\n".join(out.lines)
