"""Exit criteria. Each test prints one PASS/FAIL line, also collected in the
terminal summary. Tolerances are fixed here and never relaxed."""
import contextlib
import json
import math
import random
import statistics
import time

import pytest

from sumsets.cli import main
from sumsets.construction import (
    layer_intersection_size,
    layer_intervals,
    layer_size_formula,
    popular_set,
    predicted_popular_size,
    verify_theorem,
)
from sumsets.core import (
    h_fold_sumset,
    h_fold_sumset_naive,
    h_fold_sumset_size,
    is_arithmetic_progression,
    is_b_h_set,
    size_bounds,
)
from sumsets.explorer import SearchSpace, enumerate_sizes, problem1_scan

from conftest import ACCEPTANCE_LINES, has_unique_representations, subsets_of_range

pytestmark = pytest.mark.acceptance


@contextlib.contextmanager
def criterion(number, title):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        line = f"[FAIL] {number}. {title} ({time.perf_counter() - start:.2f}s): {exc}"
        print(line)
        ACCEPTANCE_LINES.append(line)
        raise
    line = f"[PASS] {number}. {title} ({time.perf_counter() - start:.2f}s)"
    print(line)
    ACCEPTANCE_LINES.append(line)


def median_seconds(fn, repeats=5):
    times = []
    for _ in range(repeats):
        t = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t)
    return statistics.median(times), result


def test_01_worked_examples():
    with criterion(1, "worked examples |3{0,1,2}|=7, |3{0,1,3}|=9, |3{0,1,4}|=10, <1 ms each"):
        for A, size in [((0, 1, 2), 7), ((0, 1, 3), 9), ((0, 1, 4), 10)]:
            elapsed, S = median_seconds(lambda: h_fold_sumset(A, 3))
            assert len(S) == size, (A, len(S))
            assert elapsed < 1e-3, f"{A}: {elapsed * 1e3:.3f} ms"


def test_02_r33_reproduction():
    with criterion(2, "R_Z(3,3) = {7,9,10} with 8 missing, canonical k=3 N=30, <1 s"):
        t = time.perf_counter()
        report = enumerate_sizes(3, SearchSpace.canonical_all(3, 30))
        elapsed = time.perf_counter() - t
        assert report.achieved == (7, 9, 10)
        assert 8 in report.missing_in_interval
        assert report.missing_in_interval == (8,)
        assert elapsed < 1.0, f"{elapsed:.3f} s"


def test_03_theorem_sweep():
    with criterion(3, "family sizes match formula for h in [1,60], 1830 cases, <60 s"):
        t = time.perf_counter()
        cases = 0
        for h in range(1, 61):
            report = verify_theorem(h)
            assert len(report.rows) == h
            assert report.passed, report.failures
            cases += len(report.rows)
        elapsed = time.perf_counter() - t
        assert cases == 1830
        assert elapsed < 60.0, f"{elapsed:.1f} s"


def test_04_oracle_equivalence():
    with criterion(4, "fast engine == naive oracle, A in [0,10], |A| in {2,3,4}, h in [1,5], <120 s"):
        t = time.perf_counter()
        mismatches = []
        for A in subsets_of_range(0, 10, (2, 3, 4)):
            for h in range(1, 6):
                if h_fold_sumset(A, h) != h_fold_sumset_naive(A, h):
                    mismatches.append((A, h))
        elapsed = time.perf_counter() - t
        assert not mismatches, mismatches[:5]
        assert elapsed < 120.0, f"{elapsed:.1f} s"


def _brute_layers(h, i0):
    fam = popular_set(h, i0)
    base = (0, 1, h + 1)
    return [
        {x + i * fam.c for x in (h_fold_sumset_naive(base, h - i) if i < h else (0,))}
        for i in range(h + 1)
    ]


def test_05_proof_identities():
    with criterion(5, "layer, intersection, disjointness, bottom-half and union identities, h in [2,12]"):
        violations = []
        for h in range(2, 13):
            for i0 in range(h):
                fam = popular_set(h, i0)
                layers = _brute_layers(h, i0)
                for i in range(h + 1):
                    if len(layers[i]) != math.comb(h - i + 2, 2) or len(layers[i]) != layer_size_formula(h, i):
                        violations.append(("size", h, i0, i))
                    if set(layer_intervals(fam, i).elements()) != layers[i]:
                        violations.append(("runs", h, i0, i))
                    for t in range(1, h - i + 1):
                        top = h - i - t - (h - i0) * t + 2
                        expected = math.comb(top, 2) if top >= 0 else 0
                        got = len(layers[i] & layers[i + t])
                        if got != expected or got != layer_intersection_size(fam, i, t):
                            violations.append(("intersection", h, i0, i, t))
                for i in range(i0, h + 1):
                    for j in range(i + 1, h + 1):
                        if layers[i] & layers[j]:
                            violations.append(("disjoint", h, i0, i, j))
                bottom = len(set().union(*layers[: i0 + 1]))
                formula = sum(math.comb(h - i + 2, 2) for i in range(i0 + 1)) - sum(
                    math.comb(i0 + 1 - i, 2) for i in range(i0 + 1)
                )
                if bottom != formula:
                    violations.append(("bottom-half", h, i0))
                if set().union(*layers) != set(h_fold_sumset(fam.elements, h)):
                    violations.append(("union", h, i0))
        assert not violations, violations[:5]


def test_06_closed_form_consistency():
    with criterion(6, "enumeration == closed forms: k=3 h in [2,6]; h=2 k in [3,6]"):
        for h in range(2, 7):
            report = enumerate_sizes(h, SearchSpace.canonical_all(3, (h + 1) ** 2))
            expected = {math.comb(h + 2, 2) - math.comb(i0, 2) for i0 in range(1, h + 1)}
            assert set(report.achieved) == expected, (h, report.achieved)
        for k in range(3, 7):
            report = enumerate_sizes(2, SearchSpace.canonical_all(k, k * k))
            expected = set(range(2 * k - 1, math.comb(k + 1, 2) + 1))
            assert set(report.achieved) == expected, (k, report.achieved)


def test_07_popular_target_coverage():
    with criterion(7, "problem-1 scan attains every popular size, h in [2,10]"):
        for h in range(2, 11):
            scan = problem1_scan(h)
            for i0 in range(1, h):
                p = 1 + (i0 - 1) * (h + 1)
                assert scan[p].size == predicted_popular_size(h, i0), (h, i0)
            assert is_b_h_set((0, 1, h + 1, (h + 1) ** 2), h), h


def test_08_bound_invariant_random():
    with criterion(8, "10,000 random sets satisfy the bounds; equality cases match AP / B_h"):
        rng = random.Random(20251015)
        violations = []
        for _ in range(10_000):
            k = rng.randint(1, 6)
            A = tuple(sorted(rng.sample(range(0, 101), k)))
            h = rng.randint(1, 8)
            size = h_fold_sumset_size(A, h)
            b = size_bounds(h, k)
            if not b.lower <= size <= b.upper:
                violations.append(("bounds", A, h))
            if h >= 2 and (size == b.lower) != is_arithmetic_progression(A):
                violations.append(("ap", A, h))
            bh = is_b_h_set(A, h)
            if bh != (size == b.upper) or bh != has_unique_representations(A, h):
                violations.append(("b_h", A, h))
        assert not violations, violations[:5]


def test_09_determinism_across_jobs(capsys):
    with criterion(9, "range results identical for --jobs 1 and --jobs 8, three runs each"):
        argv = ["range", "--k", "4", "--h", "4", "--max-element", "30"]
        outputs = set()
        for jobs in ("1", "8"):
            for _ in range(3):
                assert main(argv + ["--jobs", jobs]) == 0
                doc = json.loads(capsys.readouterr().out)
                outputs.add(json.dumps(doc["results"], sort_keys=True))
        assert len(outputs) == 1
