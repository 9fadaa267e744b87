"""The 4-element sets {0, 1, h+1, c} with c = (h+1-i0)(h+1), and their layer structure.

For B = {0, 1, h+1} the sumset hA splits into layers L_i = (h-i)B + i*c,
i = 0..h. Each layer is a disjoint union of runs q(h+1) + [0, j], which is
what makes the size of hA countable in closed form:

    |hA| = C(h+3, 3) - C(i0+2, 3)

The functions here expose the family, the runs, and the closed-form counts
so each can be compared with brute force.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    DomainError,
    GuardExceededError,
    InconsistencyError,
    IntSet,
    binomial,
    check_int64,
    h_fold_sumset_size,
    tetrahedral,
)

DEFAULT_VERIFY_CAP = 200


def _check_h(h: int) -> None:
    if not isinstance(h, int) or isinstance(h, bool) or h < 1:
        raise DomainError(f"h must be a positive integer, got {h!r}")


def _check_i0(h: int, i0: int) -> None:
    _check_h(h)
    if not isinstance(i0, int) or not 0 <= i0 <= h - 1:
        raise DomainError(f"i0 must lie in [0, {h - 1}] for h={h}, got {i0!r}")


@dataclass(frozen=True)
class PopularFamily:
    h: int
    i0: int
    p: int
    c: int
    elements: IntSet

    def __post_init__(self):
        h = self.h
        if self.c != h * h + h + 1 - self.p:
            raise InconsistencyError(f"c={self.c} disagrees with h^2+h+1-p for p={self.p}")
        if self.c <= h + 1:
            raise InconsistencyError(f"c={self.c} must exceed h+1={h + 1}")
        if len(set(self.elements)) != 4:
            raise InconsistencyError(f"{self.elements} does not have 4 elements")

    @property
    def base(self) -> IntSet:
        return (0, 1, self.h + 1)


def popular_set(h: int, i0: int) -> PopularFamily:
    _check_i0(h, i0)
    p = 1 + (i0 - 1) * (h + 1)
    c = check_int64((h + 1 - i0) * (h + 1), "c")
    return PopularFamily(h=h, i0=i0, p=p, c=c, elements=(0, 1, h + 1, c))


def predicted_popular_size(h: int, i0: int) -> int:
    _check_i0(h, i0)
    return tetrahedral(h + 1) - tetrahedral(i0)


def popular_targets(h: int) -> IntSet:
    """The h sizes C(h+3,3) - C(i0+2,3), i0 in [0, h-1], ascending."""
    _check_h(h)
    return tuple(sorted(predicted_popular_size(h, i0) for i0 in range(h)))


@dataclass(frozen=True, order=True)
class IntervalRun:
    """The integer interval q(h+1) + [0, j]."""

    h: int
    q: int
    j: int

    def __post_init__(self):
        if self.q < 0:
            raise DomainError(f"run multiplier q must be >= 0, got {self.q}")
        if not 0 <= self.j <= self.h:
            raise DomainError(f"run length index j must lie in [0, {self.h}], got {self.j}")

    @property
    def start(self) -> int:
        return self.q * (self.h + 1)

    @property
    def stop(self) -> int:
        """Last element (inclusive)."""
        return self.start + self.j

    def __len__(self) -> int:
        return self.j + 1

    def __contains__(self, n: int) -> bool:
        return self.start <= n <= self.stop

    def elements(self) -> range:
        return range(self.start, self.stop + 1)


@dataclass(frozen=True)
class LayerDecomposition:
    family: PopularFamily
    i: int
    runs: tuple[IntervalRun, ...] = field(default_factory=tuple)

    def elements(self) -> IntSet:
        return tuple(sorted(n for run in self.runs for n in run.elements()))

    @property
    def size(self) -> int:
        return sum(len(run) for run in self.runs)


def _check_layer(h: int, i: int) -> None:
    if not isinstance(i, int) or not 0 <= i <= h:
        raise DomainError(f"layer index i must lie in [0, {h}], got {i!r}")


def layer_intervals(family: PopularFamily, i: int) -> LayerDecomposition:
    """Runs M_{i,j} = (h + (h-i0)i - j)(h+1) + [0, j] for j = 0..h-i."""
    h, i0 = family.h, family.i0
    _check_layer(h, i)
    runs = tuple(IntervalRun(h, h + (h - i0) * i - j, j) for j in range(h - i + 1))
    return LayerDecomposition(family, i, runs)


def layer_size_formula(h: int, i: int) -> int:
    _check_h(h)
    _check_layer(h, i)
    return binomial(h - i + 2, 2)


def layer_intersection_size(family: PopularFamily, i: int, t: int) -> int:
    """Closed form for |L_i ∩ L_{i+t}|; a negative top index counts as zero."""
    h, i0 = family.h, family.i0
    if not (isinstance(i, int) and isinstance(t, int) and i >= 0 and t >= 1 and i + t <= h):
        raise DomainError(f"need 0 <= i, 1 <= t, i + t <= {h}; got i={i}, t={t}")
    top = h - i - t - (h - i0) * t + 2
    return binomial(top, 2) if top >= 0 else 0


def disjointness_threshold(family: PopularFamily) -> int:
    """Smallest i with max(L_i) < min(L_{i+1}), recomputed from c; must equal i0."""
    h, c = family.h, family.c
    # 1 + floor(h - c/(h+1)) in exact integer arithmetic
    threshold = 1 + h + (-c) // (h + 1)
    if threshold != family.i0:
        raise InconsistencyError(
            f"threshold {threshold} recomputed from c={c} differs from i0={family.i0}"
        )
    return threshold


@dataclass(frozen=True)
class VerificationRow:
    i0: int
    elements: IntSet
    computed_size: int
    predicted_size: int

    @property
    def passed(self) -> bool:
        return self.computed_size == self.predicted_size


@dataclass(frozen=True)
class VerificationReport:
    h: int
    rows: tuple[VerificationRow, ...]

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    @property
    def failures(self) -> list[VerificationRow]:
        return [row for row in self.rows if not row.passed]


def verify_theorem(h: int, cap: int = DEFAULT_VERIFY_CAP) -> VerificationReport:
    """Compute |hA| for every member of the family at this h and compare with the formula."""
    _check_h(h)
    if h > cap:
        raise GuardExceededError(f"h={h} exceeds the verification cap {cap}", h, cap)
    rows = []
    for i0 in range(h):
        family = popular_set(h, i0)
        rows.append(
            VerificationRow(
                i0=i0,
                elements=family.elements,
                computed_size=h_fold_sumset_size(family.elements, h),
                predicted_size=predicted_popular_size(h, i0),
            )
        )
    return VerificationReport(h, tuple(rows))
