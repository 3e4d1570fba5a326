import itertools
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from weylmod import parking as pk
from weylmod.partitions import compositions, cycles_of, partitions, permutation_of


def brute_pf(m):
    """PF(m) straight from the prefix-count definition, values drawn from 1..N+1."""
    n_lots, size = len(m), sum(m)
    out = []
    for f in itertools.product(range(1, n_lots + 2), repeat=size):
        if all(sum(v <= s for v in f) >= sum(m[:s]) for s in range(1, n_lots + 1)):
            out.append(f)
    return out


@pytest.mark.parametrize("f,m,expected", [
    ((1, 2), (1, 1), True),
    ((2, 2), (1, 1), False),
    ((1, 1, 3), (1, 1, 1), True),
])
def test_is_parking_examples(f, m, expected):
    assert pk.is_parking(f, m) is expected
    assert pk.is_parking(f, m, method="simulate") is expected


def test_simulation_overflow():
    assert pk.simulate_parking((1, 1, 3), (1, 1, 1)) == [1, 2, 3]


def test_is_parking_length_mismatch():
    with pytest.raises(ValueError):
        pk.is_parking((1,), (1, 1))


@pytest.mark.parametrize("m,expected", [((1, 1), 3), ((1, 1, 1), 16), ((2,), 1)])
def test_enumerate_pf_examples(m, expected):
    assert pk.enumerate_pf(m) == expected


def test_members_never_exceed_n_lots():
    for m in [(1, 1, 1), (2, 0, 1), (0, 2, 1), (1, 2)]:
        members = brute_pf(m)
        assert all(max(f) <= len(m) for f in members)
        assert list(pk.iter_pf(m)) == sorted(members)


def test_enumerate_parallel_matches_serial():
    m = (1, 1, 1, 1, 1)
    assert pk.enumerate_pf(m, jobs=3) == pk.enumerate_pf(m, jobs=1) == 6**4


def test_budget_guard():
    with pytest.raises(pk.BudgetExceeded):
        pk.enumerate_pf((1,) * 10, budget=1000)


def test_count_pf_matches_brute_force():
    for size in range(6):
        for n_lots in range(1, 4):
            for m in compositions(size, n_lots):
                assert pk.count_pf(m) == len(brute_pf(m))


def test_unit_capacities_give_cayley_counts():
    for n in range(1, 7):
        assert pk.count_pf((1,) * n) == (n + 1) ** (n - 1)


@pytest.mark.parametrize("f,m,expected", [
    ((1, 2), (1, 1), {1}),
    ((1, 1), (1, 1), set()),
    ((1, 2, 2), (1, 1, 1), {1}),
])
def test_boundary_points(f, m, expected):
    assert pk.boundary_points(f, m) == expected


def test_boundary_points_requires_parking():
    with pytest.raises(ValueError):
        pk.boundary_points((2, 2), (1, 1))


def test_truncated_counts():
    m = (1, 1, 1)
    assert pk.enumerate_pf(m, l=1) == 6
    members = brute_pf(m)
    no_boundary = [f for f in members if not pk.boundary_points(f, m)]
    assert pk.enumerate_pf(m, l=2) == len(members) - len(no_boundary) == 12
    assert pk.enumerate_pf(m, l=3) == 16


@pytest.mark.parametrize("m,r,k,expected", [((1, 1), 2, (1, 1), 3), ((1, 1), 2, (2, 0), 1), ((2,), 2, (1, 1), 1)])
def test_enumerate_subsets_examples(m, r, k, expected):
    assert pk.enumerate_subsets(m, r, k) == expected
    assert pk.enumerate_subsets(m, r, k, method="brute") == expected


def test_enumerate_subsets_content_mismatch():
    with pytest.raises(ValueError):
        pk.enumerate_subsets((1, 1), 2, (1, 0))


def test_subset_dp_matches_brute_force():
    for m in [(1, 1, 1), (2, 1), (1, 0, 2), (3, 1, 1), (2, 2)]:
        for r in (1, 2, 3):
            assert pk.subset_table(m, r) == pk.subset_table_brute(m, r)
            for l in (1, 2):
                assert pk.subset_table(m, r, l) == pk.subset_table_brute(m, r, l)


def test_subset_totals_are_fuss_catalan():
    for n in range(1, 6):
        for r in range(1, 5):
            assert pk.subset_table((1,) * n, r).total == comb(r * (n + 1), n) // (n + 1)


@pytest.mark.parametrize("f,k", [((1,), 1), ((2,), 2), ((3, 3), 2)])
def test_cycle_shift_examples(f, k):
    assert pk.cycle_shift_index(f) == k


def test_cycle_lemma_exhaustive_small():
    for n in range(1, 5):
        for f in itertools.product(range(1, n + 2), repeat=n):
            good = [k for k in range(1, n + 2) if pk.is_parking(pk.cyclic_shift(f, k), (1,) * n)]
            assert good == [pk.cycle_shift_index(f)]


def brute_trace(m, cycle_type, sign=False, l=None):
    perm = permutation_of(cycle_type)
    fixed = 0
    for f in brute_pf(m):
        if l is not None and not pk.is_truncated_pf(f, m, l):
            continue
        if all(f[perm[i]] == f[i] for i in range(len(f))):
            fixed += 1
    parity = sum(len(c) - 1 for c in cycles_of(cycle_type)) % 2
    return -fixed if sign and parity else fixed


@pytest.mark.parametrize("cycle_type,sign,expected", [((1, 1), False, 3), ((2,), False, 1), ((2,), True, -1)])
def test_perm_trace_examples(cycle_type, sign, expected):
    assert pk.perm_trace((1, 1), cycle_type, sign_twist=sign) == expected


def test_perm_trace_matches_brute_force():
    for m in [(1, 1, 1), (2, 1), (1, 1, 1, 1), (2, 0, 2), (1, 2, 1)]:
        for lam in partitions(sum(m)):
            for l in (None, 1, 2):
                assert pk.perm_trace(m, lam, l=l) == brute_trace(m, lam, l=l)
            assert pk.perm_trace(m, lam, sign_twist=True) == brute_trace(m, lam, sign=True)


def test_perm_trace_identity_is_count():
    for m in [(1, 1, 1, 1, 1), (2, 2, 1), (3, 0, 2)]:
        assert pk.perm_trace(m, (1,) * sum(m)) == pk.enumerate_pf(m)


def test_perm_trace_bad_cycle_type():
    with pytest.raises(ValueError):
        pk.perm_trace((1, 1), (3,))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=3).filter(lambda m: sum(m) <= 5), st.data())
def test_simulation_agrees_with_inequality(m, data):
    size = sum(m)
    f = tuple(data.draw(st.lists(st.integers(1, len(m) + 1), min_size=size, max_size=size)))
    assert pk.is_parking(f, m) == pk.is_parking(f, m, method="simulate")
