"""Bounded exhaustive search for achievable h-fold sumset sizes.

Results are always "achieved within the searched space". For k >= 4 and
h >= 3 no search bound is known to be sufficient, so sizes listed in
``missing_in_interval`` were not found, which is not a proof that they do
not occur.
"""
from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, islice
from typing import Iterator, Optional

from .construction import popular_targets
from .core import (
    DomainError,
    GuardExceededError,
    InconsistencyError,
    IntSet,
    SizeBounds,
    binomial,
    h_fold_sumset_size,
    size_bounds,
)

DEFAULT_GUARD = 10**7

CANONICAL_ALL = "canonical-all"
UNIT_SECOND = "unit-second"
PROBLEM1 = "problem1"
SHAPES = (CANONICAL_ALL, UNIT_SECOND, PROBLEM1)


@dataclass(frozen=True)
class SearchSpace:
    """A finite family of k-sets, iterated in lexicographic order of the element tuple.

    canonical-all
        Sets with min 0, max <= max_element, gcd 1 that are lexicographically
        no larger than their reflection: one representative per orbit.
    unit-second
        {0, 1, a, b} with 2 <= a <= h and a+1 <= b <= h*a + 1.
    problem1
        {0, 1, h+1, h^2+h+1-p} for p in [0, h^2-1].
    """

    shape: str
    k: int
    max_element: int
    h: Optional[int] = None

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise DomainError(f"unknown search space shape {self.shape!r}")
        if self.k < 2:
            raise DomainError(f"search spaces need k >= 2, got {self.k}")
        if self.max_element < 1:
            raise DomainError(f"max_element must be positive, got {self.max_element}")

    @classmethod
    def canonical_all(cls, k: int, max_element: int) -> "SearchSpace":
        return cls(CANONICAL_ALL, k, max_element)

    @classmethod
    def unit_second(cls, h: int) -> "SearchSpace":
        if h < 2:
            raise DomainError(f"the {{0,1,a,b}} box needs h >= 2, got {h}")
        return cls(UNIT_SECOND, 4, h * h + 1, h)

    @classmethod
    def problem1(cls, h: int) -> "SearchSpace":
        if h < 1:
            raise DomainError(f"h must be positive, got {h}")
        return cls(PROBLEM1, 4, h * h + h + 1, h)

    def estimate(self) -> int:
        """Number of candidates visited; an upper bound on the number of sets yielded.

        Exact for the two box shapes. For canonical-all it counts every
        k-set with min 0 and max <= max_element before the gcd and
        reflection filters.
        """
        if self.shape == CANONICAL_ALL:
            return math.comb(self.max_element, self.k - 1)
        h = self.h
        if self.shape == UNIT_SECOND:
            return sum(h * a + 1 - a for a in range(2, h + 1))
        return h * h

    def candidates(self) -> Iterator[tuple[int, ...]]:
        """Raw candidates in lexicographic order, before filtering."""
        if self.shape == CANONICAL_ALL:
            for rest in combinations(range(1, self.max_element + 1), self.k - 1):
                yield (0,) + rest
        elif self.shape == UNIT_SECOND:
            h = self.h
            for a in range(2, h + 1):
                for b in range(a + 1, h * a + 2):
                    yield (0, 1, a, b)
        else:
            h = self.h
            # ascending c is ascending tuple order, i.e. p descending
            for p in range(h * h - 1, -1, -1):
                yield (0, 1, h + 1, h * h + h + 1 - p)

    def accepts(self, candidate: tuple[int, ...]) -> bool:
        if self.shape != CANONICAL_ALL:
            return len(set(candidate)) == len(candidate)
        if math.gcd(*candidate) != 1:
            return False
        top = candidate[-1]
        return candidate <= tuple(top - a for a in reversed(candidate))

    def __iter__(self) -> Iterator[IntSet]:
        return (c for c in self.candidates() if self.accepts(c))

    def describe(self) -> dict:
        d = {"shape": self.shape, "k": self.k, "max_element": self.max_element}
        if self.h is not None:
            d["h"] = self.h
        return d


@dataclass(frozen=True)
class RangeReport:
    h: int
    k: int
    space: SearchSpace
    frequencies: dict[int, int]
    witnesses: dict[int, IntSet]
    bounds: SizeBounds
    cardinality: int
    achieved: tuple[int, ...] = field(init=False)
    missing_in_interval: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        achieved = tuple(sorted(self.frequencies))
        object.__setattr__(self, "achieved", achieved)
        object.__setattr__(
            self,
            "missing_in_interval",
            tuple(n for n in self.bounds.interval() if n not in self.frequencies),
        )
        if sum(self.frequencies.values()) != self.cardinality:
            raise InconsistencyError("frequencies do not sum to the space cardinality")
        for size in achieved:
            if size not in self.bounds:
                raise InconsistencyError(f"size {size} lies outside {self.bounds}")
            if h_fold_sumset_size(self.witnesses[size], self.h) != size:
                raise InconsistencyError(f"witness {self.witnesses[size]} does not attain {size}")

    def to_dict(self) -> dict:
        return {
            "h": self.h,
            "k": self.k,
            "space": self.space.describe(),
            "note": f"sizes achieved within the searched space (max element {self.space.max_element}); "
            "missing sizes were not found, which does not prove they are impossible",
            "bounds": {"lower": self.bounds.lower, "upper": self.bounds.upper},
            "cardinality": self.cardinality,
            "achieved": list(self.achieved),
            "missing_in_interval": list(self.missing_in_interval),
            "sizes": [
                {"size": s, "count": self.frequencies[s], "witness": list(self.witnesses[s])}
                for s in self.achieved
            ],
        }


def _scan_block(h: int, space: SearchSpace, start: int, stop: int):
    counts: Counter = Counter()
    witnesses: dict[int, IntSet] = {}
    for cand in islice(space.candidates(), start, stop):
        if not space.accepts(cand):
            continue
        size = h_fold_sumset_size(cand, h)
        counts[size] += 1
        if size not in witnesses:
            witnesses[size] = cand
    return counts, witnesses


def _blocks(total: int, parts: int) -> list[tuple[int, int]]:
    step = -(-total // parts) if total else 1
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def _count_sizes(h: int, space: SearchSpace, guard: int, jobs: int):
    estimate = space.estimate()
    if estimate > guard:
        raise GuardExceededError(
            f"search space has about {estimate} candidate sets, above the guard {guard}",
            estimate,
            guard,
        )
    if jobs < 1:
        raise DomainError(f"jobs must be >= 1, got {jobs}")
    blocks = _blocks(estimate, max(1, min(jobs, estimate)))
    if jobs == 1 or len(blocks) == 1:
        parts = [_scan_block(h, space, lo, hi) for lo, hi in blocks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(
                pool.map(_scan_block, *zip(*[(h, space, lo, hi) for lo, hi in blocks]))
            )
    counts: Counter = Counter()
    witnesses: dict[int, IntSet] = {}
    for part_counts, part_witnesses in parts:
        counts.update(part_counts)
        for size, w in part_witnesses.items():
            if size not in witnesses or w < witnesses[size]:
                witnesses[size] = w
    frequencies = {s: counts[s] for s in sorted(counts)}
    return frequencies, {s: witnesses[s] for s in frequencies}


def enumerate_sizes(
    h: int, space: SearchSpace, guard: int = DEFAULT_GUARD, jobs: int = 1
) -> RangeReport:
    """Compute |hA| for every set in ``space`` and collect sizes, counts and witnesses.

    The witness for a size is the lexicographically first set attaining it.
    With ``jobs > 1`` the candidate index range is split into static blocks
    scanned in worker processes; the merged report does not depend on the
    number of workers.
    """
    if h < 1:
        raise DomainError(f"h must be positive, got {h}")
    frequencies, witnesses = _count_sizes(h, space, guard, jobs)
    return RangeReport(
        h=h,
        k=space.k,
        space=space,
        frequencies=frequencies,
        witnesses=witnesses,
        bounds=size_bounds(h, space.k),
        cardinality=sum(frequencies.values()),
    )


@dataclass(frozen=True)
class Histogram:
    h: int
    entries: tuple[tuple[int, int], ...]
    target_ranks: dict[int, Optional[int]]
    report: RangeReport

    def to_dict(self) -> dict:
        return {
            "h": self.h,
            "space": self.report.space.describe(),
            "cardinality": self.report.cardinality,
            "entries": [
                {"rank": r, "size": s, "count": c} for r, (s, c) in enumerate(self.entries, 1)
            ],
            "popular_targets": [
                {"size": s, "rank": self.target_ranks[s]} for s in sorted(self.target_ranks)
            ],
        }


def popularity_histogram(
    h: int, space: SearchSpace, guard: int = DEFAULT_GUARD, jobs: int = 1
) -> Histogram:
    """Sizes ordered by descending count (ties by ascending size) and the
    1-based rank of each popular target; rank None means it was not attained."""
    report = enumerate_sizes(h, space, guard=guard, jobs=jobs)
    entries = tuple(sorted(report.frequencies.items(), key=lambda sc: (-sc[1], sc[0])))
    rank = {size: r for r, (size, _) in enumerate(entries, 1)}
    targets = {s: rank.get(s) for s in popular_targets(h)}
    return Histogram(h, entries, targets, report)


def closed_form_range(h: int, k: int) -> Optional[list[int]]:
    """Known exact R_Z(h, k) when k <= 3 or h <= 2; None where it is open."""
    if h < 1 or k < 1:
        raise DomainError(f"h and k must be positive, got ({h}, {k})")
    if k == 1:
        return [1]
    if h == 1:
        return [k]
    if k == 2:
        return [h + 1]
    if h == 2:
        return list(range(2 * k - 1, binomial(k + 1, 2) + 1))
    if k == 3:
        return sorted({binomial(h + 2, 2) - binomial(i0, 2) for i0 in range(1, h + 1)})
    return None


@dataclass(frozen=True)
class ScanEntry:
    p: int
    elements: IntSet
    size: Optional[int]

    @property
    def degenerate(self) -> bool:
        return self.size is None


def problem1_scan(h: int) -> dict[int, ScanEntry]:
    """|hA| for A = {0, 1, h+1, h^2+h+1-p} and each p in [0, h^2-1].

    Parameters where the elements collide are kept with size None.
    """
    if h < 1:
        raise DomainError(f"h must be positive, got {h}")
    out = {}
    for p in range(h * h):
        elements = (0, 1, h + 1, h * h + h + 1 - p)
        if len(set(elements)) < 4:
            out[p] = ScanEntry(p, elements, None)
        else:
            out[p] = ScanEntry(p, tuple(sorted(elements)), h_fold_sumset_size(elements, h))
    return out


def problem2_scan(h: int, guard: int = DEFAULT_GUARD, jobs: int = 1) -> RangeReport:
    """Sizes of hA over the box {0, 1, a, b}, 2 <= a <= h, a+1 <= b <= h*a+1."""
    return enumerate_sizes(h, SearchSpace.unit_second(h), guard=guard, jobs=jobs)
