from collections import Counter
from itertools import combinations, combinations_with_replacement

import pytest


def subsets_of_range(lo, hi, sizes):
    universe = range(lo, hi + 1)
    for k in sizes:
        yield from combinations(universe, k)


@pytest.fixture(scope="session")
def small_corpus():
    """Every nonempty subset of [0, 10]."""
    return list(subsets_of_range(0, 10, range(1, 12)))


def representation_counts(A, h):
    """Number of multiset representations of each element of hA, by direct enumeration."""
    return Counter(sum(combo) for combo in combinations_with_replacement(A, h))


def has_unique_representations(A, h):
    return all(n == 1 for n in representation_counts(A, h).values())


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
