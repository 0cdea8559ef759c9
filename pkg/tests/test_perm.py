from itertools import permutations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from diagbase.perm import (GroupOverflowError, Permutation, centralizer, class_product_coverage,
                           compose, conjugacy_classes, enumerate_group, is_invariable_pair,
                           perm_orders, subgroup_order)


def perms(n):
    return st.permutations(list(range(n))).map(lambda xs: Permutation(tuple(xs)))


A5_GENS = [Permutation.from_cycles([(0, 1, 2)], 5), Permutation.from_cycles([(0, 1, 2, 3, 4)], 5)]


@pytest.fixture(scope="module")
def a5_table():
    return enumerate_group(A5_GENS)


@given(perms(7), perms(7), perms(7))
def test_compose_associative(p, q, r):
    assert compose(compose(p, q), r) == compose(p, compose(q, r))


@given(perms(7))
def test_inverse_and_order(p):
    e = Permutation.identity(7)
    assert p * p.inverse() == e
    power = e
    for _ in range(p.order()):
        power = power * p
    assert power == e


@given(perms(6), perms(6))
def test_sign_is_multiplicative(p, q):
    assert (p * q).sign() == p.sign() * q.sign()


def test_compose_applies_left_first():
    p = Permutation((1, 0, 2))
    q = Permutation((0, 2, 1))
    assert (p * q)(0) == q(p(0)) == 2


def test_rejects_non_permutation():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))


@given(st.lists(perms(6), min_size=1, max_size=8))
def test_perm_orders_matches_scalar(ps):
    stack = np.array([p.images for p in ps])
    assert perm_orders(stack).tolist() == [p.order() for p in ps]


def test_symmetric_group_orders():
    s4 = enumerate_group([Permutation.from_cycles([(0, 1)], 4), Permutation.from_cycles([(0, 1, 2, 3)], 4)])
    assert len(s4) == 24
    assert sorted(s4.elements, key=lambda p: p.images) == sorted(
        (Permutation(x) for x in permutations(range(4))), key=lambda p: p.images)


def test_trivial_group_needs_degree():
    g = enumerate_group([], degree=3)
    assert len(g) == 1 and g.element(0) == Permutation.identity(3)


def test_cap_is_enforced():
    with pytest.raises(GroupOverflowError):
        enumerate_group(A5_GENS, cap=59)


def test_table_arithmetic(a5_table):
    g = a5_table
    assert len(g) == 60 and g.element(0) == Permutation.identity(5)
    for i in range(0, 60, 7):
        for j in range(0, 60, 11):
            assert g.element(g.mul(i, j)) == g.element(i) * g.element(j)
        assert g.mul(i, int(g.inv[i])) == 0
        assert g.left_row(i)[j] == g.right_row(j)[i]
    assert sorted(np.bincount(g.orders).tolist()) == sorted([0, 1, 15, 20, 0, 24])


def test_a5_classes(a5_table):
    cls = conjugacy_classes(a5_table)
    assert sorted(cls.class_sizes) == [1, 12, 12, 15, 20]
    for members in cls.members:
        x = members[0]
        assert len(centralizer(a5_table, x)) * len(members) == 60


def test_class_products_cover_identity(a5_table):
    cls = conjugacy_classes(a5_table)
    c = cls.class_of[a5_table.index_of(Permutation.from_cycles([(0, 1), (2, 3)], 5))]
    assert int(cls.class_of[0]) in class_product_coverage(a5_table, c, c, cls)


def test_invariable_pair(a5_table):
    five = a5_table.index_of(Permutation.from_cycles([(0, 1, 2, 3, 4)], 5))
    three = a5_table.index_of(Permutation.from_cycles([(0, 1, 2)], 5))
    inv = a5_table.index_of(Permutation.from_cycles([(0, 1), (2, 3)], 5))
    # no class of A5 sits in every maximal subgroup, yet (5, 3) pairs do
    # always generate: orders 5 and 3 force a subgroup of order >= 15
    assert is_invariable_pair(a5_table, five, three)
    # (2, 3) pairs can lie together in A4
    assert not is_invariable_pair(a5_table, inv, three)
    assert subgroup_order(a5_table, [inv]) == 2
