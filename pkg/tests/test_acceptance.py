"""Acceptance run: the thirteen verification criteria at full scale.

Each criterion prints its own PASS/FAIL line (visible even under pytest
capture) and is asserted individually.
"""

import pytest

from groupoid_growth.verify import run_checks

NAMES = [
    "01-sturmian-complexity",
    "02-delta-consistency",
    "03-main-inequality",
    "04-sturmian-sandwich",
    "05-oracle-equivalence",
    "06-module-bound",
    "07-adding-machine-matrices",
    "08-grig-witness",
    "09-grig-structure",
    "10-homomorphism",
    "11-thinned-growth",
    "12-contraction",
    "13-determinism",
]


@pytest.fixture(scope="module")
def results():
    return {r.name: r for r in run_checks("full", seed=0)}


@pytest.mark.parametrize("name", NAMES)
def test_criterion(results, name, capsys):
    res = results[name]
    with capsys.disabled():
        print(f"{'PASS' if res.ok else 'FAIL'} {res.name}: {res.detail}")
    assert res.ok, f"{res.name}: {res.detail}"
