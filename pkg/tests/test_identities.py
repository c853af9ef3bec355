"""Tests for the bundled identity verification suites."""

from __future__ import annotations

import pytest

from gaussgold.identities import SuiteResult, run_identity_suite

EXPECTED_NAMES = [
    "box-and-reduced-sizes",
    "character-orthogonality",
    "tau-three-routes-and-specials",
    "cohen-shift-identity",
    "dft-round-trip",
    "parseval",
]


@pytest.fixture(scope="module")
def suite(table_small):
    return run_identity_suite(table_small, norm_hi=60, vectors_per_q=40, seed=0)


class TestRunIdentitySuite:
    def test_families_and_order(self, suite):
        assert [s.name for s in suite] == EXPECTED_NAMES

    def test_every_family_passes(self, suite):
        for s in suite:
            assert s.passed, f"{s.name}: {s.failures[:3]}"

    def test_every_family_exercised(self, suite):
        for s in suite:
            assert s.cases > 0, s.name
        # one orthogonality case per sampled vector per modulus
        by_name = {s.name: s for s in suite}
        assert by_name["character-orthogonality"].cases >= 40
        assert by_name["dft-round-trip"].cases == by_name["parseval"].cases

    def test_deterministic(self, table_small):
        a = run_identity_suite(table_small, norm_hi=30, vectors_per_q=10, seed=5)
        b = run_identity_suite(table_small, norm_hi=30, vectors_per_q=10, seed=5)
        assert [(s.name, s.cases, s.failures) for s in a] == [
            (s.name, s.cases, s.failures) for s in b
        ]


class TestSuiteResult:
    def test_passes_when_no_failures(self):
        r = SuiteResult("demo")
        assert r.passed
        r.fail("broke")
        assert not r.passed
        assert r.failures == ["broke"]

    def test_failure_recording_is_capped(self):
        r = SuiteResult("demo")
        for i in range(100):
            r.fail(f"case {i}")
        assert len(r.failures) <= 21
        assert r.failures[-1] == "... more failures suppressed"
