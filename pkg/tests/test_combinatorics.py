import itertools
import math
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rootseries.combinatorics import (
    Composition,
    MultisetPartition,
    OrderedMultiset,
    SetPartition,
    compositions,
    count_equivalent,
    falling_factorial,
    gen_binomial,
    multiset_partitions,
    set_partitions,
    stirling2,
)


@pytest.mark.parametrize("x,k,want", [(7, 0, 1), (Fraction(3, 4), 0, 1), (5, 3, 60), (Fraction(1, 2), 2, Fraction(-1, 4))])
def test_falling_factorial(x, k, want):
    assert falling_factorial(x, k) == want


@pytest.mark.parametrize("x,m,want", [(9, 0, 1), (4, -2, 0), (Fraction(1, 2), -1, 0), (Fraction(1, 2), 2, Fraction(-1, 8)), (6, 2, 15)])
def test_gen_binomial(x, m, want):
    assert gen_binomial(x, m) == want


def test_compositions_small():
    assert [c.mu for c in compositions(0, 3)] == [()]
    assert [c.mu for c in compositions(1, 0)] == [(1,)]
    got = sorted(c.mu for c in compositions(2, 2))
    assert got == sorted([(2,), (1, 1), (1, 0, 1), (0, 2)])


@pytest.mark.parametrize("r", range(0, 6))
@pytest.mark.parametrize("w", range(0, 5))
def test_compositions_brute_force(r, w):
    got = {c.mu for c in compositions(r, w)}
    want = set()
    for mu in itertools.product(range(r + 1), repeat=w + 1):
        if sum(mu) == r and sum(i * m for i, m in enumerate(mu)) <= w:
            want.add(Composition(mu).mu)
    assert got == want
    for c in compositions(r, w):
        assert c.total == r and c.weight <= w


def test_composition_access():
    c = Composition((1, 0, 2, 0))
    assert c.mu == (1, 0, 2)
    assert c[1] == 1 and c[3] == 2 and c[7] == 0
    assert c.weight == 4 and c.tail == 2
    with pytest.raises(IndexError):
        c[0]
    with pytest.raises(ValueError):
        Composition((1, -1))


@pytest.mark.parametrize("N,k,want", [(5, 1, 1), (3, 2, 3), (4, 2, 7), (3, 4, 0)])
def test_set_partition_counts(N, k, want):
    assert len(set_partitions(N, k)) == want


@pytest.mark.parametrize("N", range(1, 9))
def test_set_partitions_are_distinct_and_sum_to_bell(N):
    total = 0
    for k in range(1, N + 1):
        parts = set_partitions(N, k)
        assert len(parts) == stirling2(N, k)
        assert len({p.parts for p in parts}) == len(parts)
        assert all(len(p) == k and p.size == N for p in parts)
        total += len(parts)
    bell = [1, 1, 2, 5, 15, 52, 203, 877, 4140]
    assert total == bell[N]


def test_set_partition_errors():
    with pytest.raises(ValueError):
        set_partitions(0, 1)
    with pytest.raises(ValueError):
        set_partitions(3, 0)
    with pytest.raises(ValueError):
        SetPartition(((2,), (1,)))
    with pytest.raises(ValueError):
        SetPartition(((1,), (3,)))


def test_multiset_partitions_examples():
    one = multiset_partitions(OrderedMultiset((1, 1), 1), 2)
    assert [[p.entries for p in J.parts] for J in one] == [[(1,), (1,)]]
    whole = multiset_partitions(OrderedMultiset((1, 2), 2), 1)
    assert [[p.entries for p in J.parts] for J in whole] == [[(1, 2)]]
    assert len(multiset_partitions(OrderedMultiset((1, 1, 2), 2), 2)) == 3
    assert multiset_partitions(OrderedMultiset((1, 2), 2), 3) == []


def _brute_equivalent(I, J):
    k = len(J)
    return sum(1 for K in multiset_partitions(I, k) if K.signature() == J.signature())


def _J(*parts, d):
    return MultisetPartition(tuple(OrderedMultiset(p, d) for p in parts))


def test_count_equivalent_examples():
    assert count_equivalent(_J((1,), (1,), d=1)) == 1
    assert count_equivalent(_J((1,), (2,), d=2)) == 1
    assert count_equivalent(_J((1,), (1, 2), d=2)) == 2


@pytest.mark.parametrize("entries", [(1, 1, 2), (1, 1, 1, 2), (1, 2, 2, 3), (1, 1, 2, 2, 3), (1, 1, 1, 1, 2, 2)])
def test_count_equivalent_matches_scan(entries):
    d = max(entries)
    I = OrderedMultiset(entries, d)
    for k in range(1, len(I) + 1):
        classes = Counter(J.signature() for J in multiset_partitions(I, k))
        for J in multiset_partitions(I, k):
            assert count_equivalent(J) == classes[J.signature()] == _brute_equivalent(I, J)


def test_ordered_multiset():
    I = OrderedMultiset.from_multiplicities((2, 0, 1))
    assert I.entries == (1, 1, 3) and I.d == 3
    assert I.multiplicities() == (2, 0, 1)
    assert I.remove(0).entries == (1, 3)
    assert OrderedMultiset((3, 1), 3).sorted().entries == (1, 3)
    with pytest.raises(ValueError):
        OrderedMultiset((4,), 3)


@given(st.integers(0, 7), st.integers(1, 7))
def test_stirling_recurrence_against_surjections(n, k):
    # k! S(n, k) counts surjections [n] -> [k]
    surj = sum((-1) ** j * math.comb(k, j) * (k - j) ** n for j in range(k + 1))
    assert math.factorial(k) * stirling2(n, k) == surj


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@settings(max_examples=60)
@given(rationals, rationals, st.integers(0, 7))
def test_falling_factorial_vandermonde(a, b, n):
    lhs = falling_factorial(a + b, n)
    rhs = sum(math.comb(n, k) * falling_factorial(a, k) * falling_factorial(b, n - k) for k in range(n + 1))
    assert lhs == rhs
