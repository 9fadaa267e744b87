"""Exact integer-set algebra: h-fold sumsets, affine canonical forms, bounds.

Sets are represented as sorted tuples of Python ints (``IntSet``). Every
public operation validates its input and keeps all values inside the signed
64-bit range, raising :class:`ArithmeticOverflowError` instead of producing
numbers a fixed-width implementation could not represent.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import reduce
from itertools import combinations_with_replacement
from typing import Iterable, Tuple

IntSet = Tuple[int, ...]

INT64_MAX = 2**63 - 1
INT64_MIN = -(2**63)

NAIVE_GUARD = 10**7

# Largest bitset (in bits) the fast engine will build before falling back
# to the sorted-merge route.
_BITSET_LIMIT = 1 << 26


class SumsetError(Exception):
    """Base class for errors raised by this package."""


class ArithmeticOverflowError(SumsetError, OverflowError):
    """A value left the signed 64-bit range."""


class DomainError(SumsetError, ValueError):
    """An argument violates an operation's precondition."""


class GuardExceededError(SumsetError):
    """A computation was refused because its size exceeds a configured guard."""

    def __init__(self, message: str, estimate: int, guard: int):
        super().__init__(message)
        self.estimate = estimate
        self.guard = guard


class InconsistencyError(SumsetError):
    """Two independent computations of the same quantity disagree."""


def check_int64(value: int, what: str = "value") -> int:
    if not INT64_MIN <= value <= INT64_MAX:
        raise ArithmeticOverflowError(f"{what} {value} does not fit in a signed 64-bit integer")
    return value


def _check_positive(name: str, value: int) -> None:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise DomainError(f"{name} must be a positive integer, got {value!r}")


def as_intset(values: Iterable[int]) -> IntSet:
    """Validate ``values`` and return them as a sorted tuple.

    Duplicates are rejected rather than silently merged, since merging would
    change the size of the set.
    """
    items = list(values)
    if not items:
        raise DomainError("an IntSet needs at least one element")
    for x in items:
        if not isinstance(x, int) or isinstance(x, bool):
            raise DomainError(f"IntSet elements must be integers, got {x!r}")
        check_int64(x, "element")
    result = tuple(sorted(items))
    if len(set(result)) != len(result):
        raise DomainError(f"duplicate elements in {sorted(items)}")
    return result


def binomial(n: int, r: int) -> int:
    """C(n, r), zero when r > n. Raises on results beyond 64 bits."""
    if n < 0 or r < 0:
        raise DomainError(f"binomial needs n, r >= 0, got ({n}, {r})")
    return check_int64(math.comb(n, r), f"C({n},{r})")


def tetrahedral(j: int) -> int:
    """The j-th tetrahedral number C(j+2, 3), i.e. the sum of the first j triangular numbers."""
    if j < 0:
        raise DomainError(f"tetrahedral needs j >= 0, got {j}")
    return binomial(j + 2, 3)


@dataclass(frozen=True)
class AffineMap:
    """The map x -> scale * x + shift on integers."""

    scale: int
    shift: int = 0

    def __post_init__(self):
        if self.scale == 0:
            raise DomainError("affine scale must be nonzero")

    def __call__(self, values: Iterable[int]) -> IntSet:
        return as_intset(check_int64(self.scale * x + self.shift, "image") for x in values)


@dataclass(frozen=True)
class SizeBounds:
    h: int
    k: int
    lower: int
    upper: int

    def __contains__(self, size: int) -> bool:
        return self.lower <= size <= self.upper

    def interval(self) -> range:
        return range(self.lower, self.upper + 1)


def size_bounds(h: int, k: int) -> SizeBounds:
    """Lower and upper bounds on |hA| for a k-element set A."""
    _check_positive("h", h)
    _check_positive("k", k)
    lower = check_int64(h * (k - 1) + 1, "lower bound")
    return SizeBounds(h, k, lower, binomial(h + k - 1, k - 1))


def normalize(A: Iterable[int]) -> tuple[IntSet, AffineMap]:
    """Return ``(B, m)`` with min B = 0, gcd(B) = 1 and ``m(B) == A``.

    The map goes from the normalized set back to the input, so it always
    has an integer scale (the gcd of the differences) and shift (min A).
    """
    A = as_intset(A)
    lo = A[0]
    g = reduce(math.gcd, (a - lo for a in A), 0)
    if g == 0:
        return (0,), AffineMap(1, lo)
    return tuple((a - lo) // g for a in A), AffineMap(g, lo)


def reflect(A: Iterable[int]) -> IntSet:
    A = as_intset(A)
    top = A[-1]
    return tuple(top - a for a in reversed(A))


def canonical_form(A: Iterable[int]) -> IntSet:
    """Normalized representative of A, lexicographically minimized over reflection."""
    B, _ = normalize(A)
    return min(B, reflect(B))


def is_canonical(A: Iterable[int]) -> bool:
    A = as_intset(A)
    return canonical_form(A) == A


def _check_sumset_args(A: IntSet, h: int) -> None:
    _check_positive("h", h)
    check_int64(h * max(abs(A[0]), abs(A[-1])), "h * max|element|")


def _bits_to_tuple(bits: int, offset: int) -> IntSet:
    s = bin(bits)[:1:-1]
    out = []
    pos = s.find("1")
    while pos != -1:
        out.append(pos + offset)
        pos = s.find("1", pos + 1)
    return tuple(out)


def _bitset_power(shifts: IntSet, h: int) -> int:
    acc = 1
    for _ in range(h):
        nxt = 0
        for s in shifts:
            nxt |= acc << s
        acc = nxt
    return acc


def _merge_sumset(X: IntSet, Y: IntSet) -> IntSet:
    # Each row x + Y is already sorted, so a k-way merge gives the sorted sumset.
    rows = [[x + y for y in Y] for x in X]
    out = []
    last = None
    for v in heapq.merge(*rows):
        if v != last:
            out.append(v)
            last = v
    return tuple(out)


def sumset(X: Iterable[int], Y: Iterable[int]) -> IntSet:
    """The sumset X + Y = {x + y}."""
    X, Y = as_intset(X), as_intset(Y)
    check_int64(X[0] + Y[0], "sum")
    check_int64(X[-1] + Y[-1], "sum")
    return _merge_sumset(X, Y)


def h_fold_sumset(A: Iterable[int], h: int) -> IntSet:
    """All sums of h not necessarily distinct elements of A, sorted.

    Uses a Python-int bitset when the sumset's span is small enough and
    iterated sorted-merge otherwise; both routes are exact.
    """
    A = as_intset(A)
    _check_sumset_args(A, h)
    lo = A[0]
    span = A[-1] - lo
    if h * span <= _BITSET_LIMIT:
        bits = _bitset_power(tuple(a - lo for a in A), h)
        return _bits_to_tuple(bits, h * lo)
    acc = A
    for _ in range(h - 1):
        acc = _merge_sumset(acc, A)
    return acc


def h_fold_sumset_size(A: Iterable[int], h: int) -> int:
    """|hA|, without materializing hA when the bitset route applies."""
    A = as_intset(A)
    _check_sumset_args(A, h)
    lo = A[0]
    if h * (A[-1] - lo) <= _BITSET_LIMIT:
        return _bitset_power(tuple(a - lo for a in A), h).bit_count()
    return len(h_fold_sumset(A, h))


def h_fold_sumset_naive(A: Iterable[int], h: int, guard: int = NAIVE_GUARD) -> IntSet:
    """Reference hA: enumerate every multiset of h elements and collect the sums.

    Refuses when the number of multisets C(h+k-1, k-1) exceeds ``guard``.
    """
    A = as_intset(A)
    _check_sumset_args(A, h)
    count = math.comb(h + len(A) - 1, len(A) - 1)
    if count > guard:
        raise GuardExceededError(
            f"naive sumset would enumerate {count} multisets (guard {guard})", count, guard
        )
    return tuple(sorted({sum(combo) for combo in combinations_with_replacement(A, h)}))


def is_arithmetic_progression(A: Iterable[int]) -> bool:
    A = as_intset(A)
    return len({b - a for a, b in zip(A, A[1:])}) <= 1


def is_b_h_set(A: Iterable[int], h: int) -> bool:
    """True when every element of hA has exactly one representation.

    Decided by the size criterion |hA| == C(h+k-1, k-1), which is equivalent.
    """
    A = as_intset(A)
    return h_fold_sumset_size(A, h) == size_bounds(h, len(A)).upper
