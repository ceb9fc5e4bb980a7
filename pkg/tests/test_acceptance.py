"""Every exit criterion at its stated tolerance, one reported line each."""

import pytest

from spacetimelab import acceptance


@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA), ids=lambda n: f"criterion_{n:02d}")
def test_criterion(number):
    res = acceptance.CRITERIA[number]()
    print()
    print(res.summary())
    for c in res.checks:
        print(f"    {'ok  ' if c.passed else 'FAIL'} {c.name}: {c.value:.10g} ({c.threshold})")
    assert res.passed, res.summary()
