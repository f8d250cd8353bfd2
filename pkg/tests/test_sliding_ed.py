import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from swstat.meter import Meter
from swstat.oracle import OracleSpec, brute_window_stats
from swstat.sliding_ed import (
    BASE_WINDOW,
    Concat,
    ExactBackend,
    InputError,
    NoisyBackend,
    RandomizedBackend,
    default_repetitions,
    ed_window_all,
    ed_window_average,
    find_group_bounds,
    noisy_query,
    reduce_group,
)


def oracle(x, n):
    return tuple(brute_window_stats(x, OracleSpec("ED", n)))


@pytest.mark.parametrize("fn", [
    lambda x, n: ed_window_all(x, n, ExactBackend()),
    lambda x, n: ed_window_average(x, n, debug=True),
])
def test_examples(fn):
    assert fn((1, 2, 3, 2, 1), 3).bits == (1, 0, 1)
    assert fn((7, 7, 7, 7, 7), 3).bits == (0, 0, 0)
    assert fn(tuple(range(1, 8)), 4).bits == (1, 1, 1, 1)


def test_length_mismatch():
    with pytest.raises(InputError):
        ed_window_all([1, 2, 3], 3)
    with pytest.raises(InputError):
        ed_window_average([1, 2, 3], 3)


def test_reduce_group_example():
    seg = Concat([5, 5, 1, 2, 3, 9])
    be = ExactBackend()
    b = find_group_bounds(seg, 4, 3, be)
    assert (b.i_L, b.i_R) == (1, 3)
    assert reduce_group(seg, 4, 3, be) == [0, 1, 1]


def test_reduce_group_duplicated_middle_short_circuits():
    be = ExactBackend()
    assert reduce_group(Concat([1, 4, 4, 2, 3]), 4, 2, be) == [0, 0]
    assert be.calls == 1


def test_reduce_group_all_distinct():
    be = ExactBackend()
    seg = Concat(list(range(1, 11)))
    b = find_group_bounds(seg, 6, 5, be)
    assert (b.i_L, b.i_R) == (0, 5)
    assert reduce_group(seg, 6, 5, be) == [1] * 5


def test_concat_view():
    base = list(range(10, 20))
    v = Concat(base).slice(2, 5).concat(Concat(base).slice(7, 9))
    assert v.tolist() == [12, 13, 14, 17, 18]
    assert [v[i] for i in range(len(v))] == v.tolist()
    assert v.slice(1, 4).tolist() == [13, 14, 17]


def test_noisy_query_passthrough():
    be = ExactBackend()
    assert noisy_query(be, [1, 2], 1) is True and be.calls == 1
    assert noisy_query(be, [1, 1], 7) is False
    with pytest.raises(ValueError):
        noisy_query(be, [1], 4)


def test_noisy_majority_error_rate():
    rng = random.Random(4)
    noisy = NoisyBackend(ExactBackend(), 0.25, rng)
    wrong = sum(noisy_query(noisy, [1, 2, 3], 41) is not True for _ in range(10_000))
    assert wrong / 10_000 < 0.01


def test_default_repetitions_odd():
    for n in (2, 3, 64, 1000, 4096):
        c = default_repetitions(n)
        assert c % 2 == 1 and c >= math.log2(n)


def test_exhaustive_small():
    for n in range(1, 6):
        for x in itertools.product((1, 2, 3), repeat=2 * n - 1):
            want = oracle(x, n)
            assert ed_window_all(x, n, ExactBackend()).bits == want
            assert ed_window_average(x, n, debug=True).bits == want


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 80).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.integers(1, st_alpha(n)), min_size=2 * n - 1, max_size=2 * n - 1))))
def test_property_matches_oracle(args):
    n, x = args
    want = oracle(x, n)
    meter = Meter()
    assert ed_window_all(x, n, ExactBackend(), meter=meter).bits == want
    assert meter.cells == 0
    assert ed_window_average(x, n, debug=True).bits == want


def st_alpha(n):
    return 3 * n


def test_cells_logarithmic():
    for n in (16, 256, 2048):
        meter = Meter()
        ed_window_all(list(range(1, 2 * n)), n, ExactBackend(), meter=meter)
        assert meter.peak_cells <= 8 * (math.ceil(math.log2(n)) + 1)


# frozen by scripts/calibrate.py (all-distinct inputs force the full recursion)
WORK_C = 2.5


def test_backend_cost_calibrated():
    for n in (64, 256, 1024, 2048):
        be = ExactBackend()
        ed_window_all(list(range(1, 2 * n)), n, be)
        log_n = math.ceil(math.log2(n))
        groups = 2 * n // BASE_WINDOW
        assert be.calls <= groups * (2 * log_n + 1)
        assert be.work <= WORK_C * n * log_n ** 2


def test_randomized_mode_one_sided():
    rng = random.Random(8)
    for t in range(4):
        n = 70
        x = [rng.randint(1, 6 * n) for _ in range(2 * n - 1)]
        want = oracle(x, n)
        got = ed_window_all(x, n, RandomizedBackend(space_budget=128, epsilon=0.25, seed=t),
                            mode="randomized").bits
        # a randomized backend can only miss duplicates, so a 0 output is always right
        assert all(w == 0 for g, w in zip(got, want) if g == 0)
        assert got == want


def test_average_case_first_window_stops_early():
    meter = Meter()
    ed_window_average((4, 4, 4, 4, 4), 3, meter)
    assert meter.comparisons == 2
