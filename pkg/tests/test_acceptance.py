"""One check per acceptance criterion, each backed by a verification suite.

Every suite prints a single PASS/FAIL line with its check counts.
"""

import pytest

from qloop.verify import SUITES, run_suite

SEED = 0

# wall-clock limits in seconds where a criterion states one
TIME_LIMITS = {"gauss": 30, "hall": 300, "generators": 300, "stab": 600}

ORDER = sorted(SUITES, key=lambda name: SUITES[name][0])


@pytest.mark.parametrize("name", ORDER)
def test_criterion(name, capsys):
    result = run_suite(name, seed=SEED)
    with capsys.disabled():
        print("\n" + result.line())
        for failure in result.failures[:5]:
            print(f"    {failure}")
    assert result.passed, result.failures[:5]
    assert not any(k.endswith("_failed") for k in result.counts)
    assert result.counts, "suite ran no checks"
    if name in TIME_LIMITS:
        assert result.seconds < TIME_LIMITS[name]
