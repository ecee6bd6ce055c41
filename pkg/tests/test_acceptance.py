"""The ten acceptance criteria, one test each, at their stated tolerances."""

from __future__ import annotations

import pytest

from supergeom import acceptance, cli

TIME_LIMITS = {1: 10.0, 6: 60.0}


@pytest.mark.parametrize("check", acceptance.CHECKS, ids=lambda fn: fn.__name__)
def test_criterion(check, capsys):
    result = acceptance.run_check(check)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
    limit = TIME_LIMITS.get(result.number)
    if limit is not None:
        assert result.seconds < limit


def test_selftest_envelope_matches_schema():
    res = cli.run("selftest", {"seed": 1})
    cli.validate("selftest", res.to_json(), "output")
    assert res.payload["all_passed"] and len(res.payload["criteria"]) == 10
