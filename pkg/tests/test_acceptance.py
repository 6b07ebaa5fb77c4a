"""The acceptance criteria at their stated scale, tolerance and runtime."""

import pytest

from clonelab.verify import CRITERIA, VerifyConfig, run_criterion

RESULTS = []


@pytest.mark.parametrize(
    "number", [c[0] for c in CRITERIA], ids=[f"{c[0]:02d}-{c[1]}" for c in CRITERIA]
)
def test_criterion(number):
    result = run_criterion(number, VerifyConfig(seed=0))
    RESULTS.append(result)
    print(result.line())
    assert result.ok, result.detail
    assert result.seconds < result.limit, f"took {result.seconds:.2f}s, limit {result.limit}s"
