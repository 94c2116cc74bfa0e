#!/usr/bin/env python3
"""
Tests for the seeded randomized cross-check suites and the golden battery.
"""

import pytest

from edcert.errors import InvalidInput
from edcert.models.finite_group import FiniteAbelianGroup
from edcert.models.int_matrix import IntMatrix
from edcert.services.oracle import SUITES, OracleConfig, invariant_factors_from_divisors, run_oracle
from edcert.services.golden_fixtures import FIXTURES, Fixture, run_fixtures


def test_divisor_oracle():
    matrix = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert invariant_factors_from_divisors(matrix) == FiniteAbelianGroup((2, 6, 12))
    assert invariant_factors_from_divisors(IntMatrix.from_rows([[0, 0]])) == FiniteAbelianGroup()


@pytest.mark.parametrize("suite", sorted(SUITES))
def test_suite_passes(suite):
    result = SUITES[suite](OracleConfig(trials=30))
    assert result.cases > 0
    assert result.failures == []


def test_default_snf_suite_size():
    result = SUITES["snf"](OracleConfig())
    assert result.cases == 200
    assert result.passed


def test_coprime_suite_at_full_size():
    result = SUITES["coprime"](OracleConfig())
    assert result.cases == 100
    assert result.passed


def test_oracle_is_deterministic():
    first = run_oracle(OracleConfig(trials=12, seed=7))
    second = run_oracle(OracleConfig(trials=12, seed=7))
    assert first == second


@pytest.mark.parametrize("kwargs", [{"trials": 0}, {"max_dim": 1}, {"max_entry": 0}])
def test_oracle_config_validation(kwargs):
    with pytest.raises(InvalidInput):
        OracleConfig(**kwargs)


def test_all_fixtures_pass():
    results = run_fixtures()
    assert len(results) == len(FIXTURES)
    assert [r.name for r in results if not r.passed] == []


def test_failing_fixture_is_reported():
    broken = Fixture("broken", "always wrong", lambda: (False, "mismatch"))
    (result,) = run_fixtures((broken,))
    assert not result.passed
    assert result.detail == "mismatch"


def test_battery_covers_kernel_and_witness_examples():
    names = {fixture.name for fixture in FIXTURES}
    assert {
        "multiplication-kernels", "two-adic-valuation", "simple-enumeration", "incompressible-flag",
        "surface-witness-table", "abelian-cover-cap", "local-ring-index",
    } <= names
    assert len(names) == len(FIXTURES)
