"""Acceptance battery: one test per criterion, exact (tolerance-zero) checks.

Each test prints its criterion's pass/fail line; `mfcat corpus-run` replays
the same battery from the command line.
"""

import random

import pytest

from mfcat.corpus import CRITERIA, build_corpus, criterion_1


@pytest.fixture(scope="module")
def corpus():
    return build_corpus()


def _report(result):
    status = "PASS" if result.passed else "FAIL"
    print(f"criterion {result.index:2d} [{status}] {result.title}")
    for line in result.details:
        print(f"    {line}")
    assert result.passed, f"criterion {result.index} failed: {result.details}"


def test_criterion_01_factorization_soundness(corpus):
    _report(criterion_1(corpus, random.Random(20240801)))


@pytest.mark.parametrize(
    "fn", [c for c in CRITERIA if c is not criterion_1], ids=lambda f: f.__name__
)
def test_criteria(fn, corpus):
    _report(fn(corpus, random.Random(20240801)))


def test_injected_wrong_value_is_reported(corpus):
    from mfcat.corpus import Known, criterion_5

    broken = [
        type(e)(e.name, e.ring_names, e.text, e.isolated, dict(e.known)) for e in corpus
    ]
    for e in broken:
        if e.name == "D4-plane":
            e.known["milnor"] = Known(5, "derived-oracle", "monomial-reduction")
    result = criterion_5(broken, random.Random(0))
    assert not result.passed
    assert any("D4-plane" in line for line in result.details)
