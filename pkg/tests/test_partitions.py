import itertools

import pytest
from hypothesis import given, strategies as st

from weylmod.partitions import (
    RankMismatch,
    WeightTable,
    convolve,
    normalize,
    pad,
    partitions,
    partitions_up_to,
    prime_surgery,
    split_at,
    subtract_root,
    transpose,
    young_class_weights,
    z_lambda,
)


def test_transpose_examples():
    assert transpose((3, 1)) == (2, 1, 1)
    assert transpose((5,)) == (1,) * 5
    assert transpose(()) == ()


def test_transpose_is_involution():
    for xi in partitions_up_to(12):
        assert transpose(transpose(xi)) == xi


def test_partition_counts():
    assert [len(list(partitions(n))) for n in range(11)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


@pytest.mark.parametrize("xi,i,expected", [
    ((3, 1), 1, ((2, 0), (1, 1))),
    ((3, 1), 0, ((3, 1), ())),
    ((4, 4, 2), 3, ((1, 1, 0), (3, 3, 2))),
])
def test_split_at_examples(xi, i, expected):
    assert split_at(xi, i) == expected


def test_split_at_reassembles():
    for xi in partitions_up_to(12):
        for i in range((xi[0] if xi else 0) + 1):
            upper, lower = split_at(xi, i)
            assert tuple(a + b for a, b in zip(pad(lower, len(xi)), upper)) == xi


def test_split_at_out_of_range():
    with pytest.raises(ValueError):
        split_at((3, 1), 4)


def test_prime_surgery():
    assert prime_surgery((1,)) == (1,)
    assert prime_surgery((1, 1)) == (1, 1)
    # columns (2,1,1) -> (3,1,0)
    assert prime_surgery((3, 1)) == (2, 1, 1)
    assert prime_surgery((2, 2)) == (2, 1, 1)
    for xi in partitions_up_to(9):
        if xi:
            assert sum(prime_surgery(xi)) == sum(xi)


def test_subtract_root():
    assert subtract_root((3, 1), 1) == (2, 2)
    assert subtract_root((4, 2, 0), 2, 3) == (4, 1, 1)


def test_normalize_rejects_non_partitions():
    assert normalize((2, 1, 0, 0)) == (2, 1)
    with pytest.raises(ValueError):
        normalize((1, 2))


def test_z_lambda_class_equation():
    for n in range(1, 8):
        from math import factorial
        assert sum(factorial(n) // z_lambda(lam) for lam in partitions(n)) == factorial(n)


def test_young_class_weights_sum_to_one():
    for content in [(2, 1), (3, 0, 1), (2, 2)]:
        assert sum(young_class_weights(content).values()) == 1


def test_convolve_examples():
    v = WeightTable.vector(2)
    assert (v * v).entries == {(2, 0): 1, (1, 1): 2, (0, 2): 1}
    assert v * WeightTable.unit(2) == v
    assert (WeightTable.exterior(3, 2) * WeightTable.vector(3)).total == 9


def test_convolve_rank_mismatch():
    with pytest.raises(RankMismatch):
        convolve(WeightTable.vector(2), WeightTable.vector(3))


def test_weight_table_validation_and_json():
    with pytest.raises(ValueError):
        WeightTable(2, {(1, 0): -1})
    table = WeightTable(2, {(1, 1): 3, (2, 0): 1, (0, 2): 1, (3, -3): 0})
    data = table.to_json()
    assert data == {"r": 2, "entries": [{"k": [2, 0], "dim": "1"}, {"k": [1, 1], "dim": "3"},
                                         {"k": [0, 2], "dim": "1"}], "total": "5"}
    assert WeightTable.from_json(data) == table
    assert table.is_weyl_symmetric()
    assert not WeightTable(2, {(1, 0): 1}).is_weyl_symmetric()


tables = st.dictionaries(
    st.tuples(st.integers(-2, 2), st.integers(-2, 2)), st.integers(0, 5), max_size=4
).map(lambda d: WeightTable(2, d))


@given(tables, tables, tables)
def test_convolution_laws(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert (a * b).total == a.total * b.total


def test_power_matches_repeated_product():
    v = WeightTable.vector(3)
    acc = WeightTable.unit(3)
    for e in range(5):
        assert v.power(e) == acc
        acc = acc * v


def test_exterior_powers():
    for r in range(1, 5):
        for i in range(r + 1):
            table = WeightTable.exterior(r, i)
            assert table.total == len(list(itertools.combinations(range(r), i)))
