"""The ten acceptance checks at their stated tolerances; one PASS/FAIL line each.

Checks 5 and 6 are expected to fail (see the README); they are reported,
not relaxed.
"""

import time

import pytest

from penrose_lab import acceptance

EXPECTED_FAILURES = {5, 6}
_START = time.perf_counter()


@pytest.fixture(scope="module", autouse=True)
def suite_budget():
    t0 = time.perf_counter()
    yield
    print(f"\nacceptance suite wall time {time.perf_counter() - t0:.1f} s")
    assert time.perf_counter() - t0 < 300.0


@pytest.mark.parametrize("check", acceptance.CHECKS, ids=lambda c: c.__name__)
def test_criterion(check, capsys):
    res = check()
    with capsys.disabled():
        print("\n" + res.line())
    if res.number in EXPECTED_FAILURES and not res.passed:
        pytest.xfail(res.summary)
    assert res.passed, res.summary
