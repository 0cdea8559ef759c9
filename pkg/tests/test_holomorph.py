from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from diagbase.holomorph import (HolElement, Refusal, SearchFailure, SubsetWitness,
                                aut_setwise_stabilizer, certify_trivial, count_regular_orbits,
                                distinct_orbit_pair, exhaustive_witness, find_regular_subset,
                                hol_apply, hol_compose, hol_inverse, hol_perm, orbits_certified_distinct,
                                setwise_stabilizer, stabilizer_is_trivial, verify_witness)
from diagbase.perm import perm_orders


@pytest.fixture(scope="module")
def hol5(a5):
    """Every element of Hol(A5) as a permutation of T, with its (g, alpha) label."""
    labels = [(g, al) for al in range(a5.aut_order) for g in range(a5.order)]
    perms = np.stack([hol_perm(a5, HolElement(g, al)) for g, al in labels])
    return labels, perms


def subsets_of(n, max_size=8):
    return st.sets(st.integers(0, n - 1), min_size=1, max_size=max_size).map(sorted)


def hol_elements(a):
    return st.builds(HolElement, st.integers(0, a.order - 1), st.integers(0, a.aut_order - 1))


def test_hol_perms_form_the_holomorph(a5, hol5):
    _, perms = hol5
    assert len({p.tobytes() for p in perms}) == 7200
    # the identity element and the defining action
    assert (hol_perm(a5, HolElement(0, 0)) == np.arange(60)).all()
    g, al, t = 7, 33, 41
    expect = a5.A[al][a5.t_table.mul(int(a5.t_inv[g]), t)]
    assert hol_apply(a5, HolElement(g, al), t) == expect


@given(st.data())
def test_compose_and_inverse(a5, data):
    e1 = data.draw(hol_elements(a5))
    e2 = data.draw(hol_elements(a5))
    p1, p2 = hol_perm(a5, e1), hol_perm(a5, e2)
    assert (hol_perm(a5, hol_compose(a5, e1, e2)) == p2[p1]).all()
    assert (hol_perm(a5, hol_compose(a5, e1, hol_inverse(a5, e1))) == np.arange(60)).all()


@given(subsets_of(60, 10))
def test_setwise_stabilizer_matches_brute(a5, hol5, s):
    labels, perms = hol5
    mask = np.zeros(60, dtype=bool)
    mask[s] = True
    brute = {labels[i] for i in np.flatnonzero(mask[perms[:, s]].all(axis=1))}
    fast = {(e.g, e.alpha) for e in setwise_stabilizer(a5, s)}
    assert fast == brute
    assert stabilizer_is_trivial(a5, s) == (len(brute) == 1)
    comp = [x for x in range(60) if x not in s]
    assert len(setwise_stabilizer(a5, comp)) == len(brute)


@given(subsets_of(60, 6))
def test_restricted_stabilizer_is_the_intersection(a5, s):
    inner = a5.k_mask((0,))
    full = {(e.g, e.alpha) for e in setwise_stabilizer(a5, s)}
    restricted = {(e.g, e.alpha) for e in setwise_stabilizer(a5, s, inner)}
    assert restricted == {x for x in full if inner[x[1]]}


def test_known_stabilizer_orders(a5):
    assert len(setwise_stabilizer(a5, range(60))) == 7200
    assert len(setwise_stabilizer(a5, [0])) == 120
    assert aut_setwise_stabilizer(a5, list(range(1, 60))).size == 120
    with pytest.raises(ValueError):
        aut_setwise_stabilizer(a5, [0, 1])


def _burnside_total(perms, k, n=60):
    subsets = np.array(list(combinations(range(n), k)))
    bit = np.left_shift(np.int64(1), np.arange(n, dtype=np.int64))
    masks = np.bitwise_or.reduce(bit[subsets], axis=1)
    fixed = sum(int((np.bitwise_or.reduce(bit[p[subsets]], axis=1) == masks).sum()) for p in perms)
    assert fixed % len(perms) == 0
    return fixed // len(perms)


def _regular_by_cycle_unions(perms, k, n=60):
    """Subsets fixed by some prime-order element are unions of its cycles."""
    from diagbase.perm import Permutation
    bad = set()
    for p, o in zip(perms, perm_orders(perms)):
        if o == 1 or any(o % q == 0 and o != q for q in (2, 3, 5)):
            continue
        cyc = Permutation(tuple(int(x) for x in p)).cycles()
        for r in range(1, k + 1):
            for pick in combinations(cyc, r):
                if sum(len(c) for c in pick) == k:
                    bad.add(sum(1 << x for c in pick for x in c))
    free = comb(n, k) - len(bad)
    assert free % len(perms) == 0
    return free // len(perms)


@pytest.mark.parametrize("k, regular, total", [(1, 0, 1), (2, 0, 3), (3, 1, 13), (4, 46, 104)])
def test_orbit_census_small_k(a5, hol5, k, regular, total):
    _, perms = hol5
    oc = count_regular_orbits(a5, k)
    assert (oc.regular_count, oc.total_orbit_count) == (regular, total)
    assert sum(oc.orbit_sizes) == comb(60, k)
    assert oc.regular_count == _regular_by_cycle_unions(perms, k)
    if k <= 3:
        assert oc.total_orbit_count == _burnside_total(perms, k)


def test_orbit_census_is_symmetric_under_complement(a5):
    assert count_regular_orbits(a5, 57).regular_count == 1
    assert count_regular_orbits(a5, 58).regular_count == 0


def test_regular_subset_search_and_certificates(a5):
    for m in (3, 10, 30, 57):
        w = find_regular_subset(a5, m, seed=m)
        assert isinstance(w, SubsetWitness) and w.k == m
        assert verify_witness(a5, w)
    w57 = find_regular_subset(a5, 57, seed=1)
    assert w57.detail["via_complement"] and len(w57.detail["certified_subset"]) == 3


def test_search_failure_is_reported(a5):
    res = find_regular_subset(a5, 2, seed=0, budget=50)
    assert isinstance(res, SearchFailure) and res.attempts == 50
    assert "not a proof" in res.note


def test_certify_trivial_routes(a5):
    kinds = set()
    for seed in range(6):
        w = find_regular_subset(a5, 12, seed=seed)
        kinds.add(w.certificate_kind)
        assert verify_witness(a5, w)
    # the cheap certificate fires for most regular 12-subsets
    assert kinds & {"order_multiset", "subgroup_closure"}
    assert isinstance(certify_trivial(a5, [1, 2, 3]), Refusal)
    assert isinstance(certify_trivial(a5, [0]), Refusal)


@given(subsets_of(60, 12))
def test_certificates_never_lie(a5, s):
    s = sorted(set(s) | {0})
    cert = certify_trivial(a5, s)
    if isinstance(cert, SubsetWitness):
        assert stabilizer_is_trivial(a5, s)


def test_tampered_witness_fails(a5):
    w = find_regular_subset(a5, 3, seed=0)
    assert verify_witness(a5, w)
    bad = exhaustive_witness(a5, [0, 1, 2])
    bad.stabilizer_order = 1
    assert not verify_witness(a5, bad)


def test_distinct_orbit_pairs(a5, l27):
    assert isinstance(distinct_orbit_pair(a5, 3, budget=300), SearchFailure)
    pair = distinct_orbit_pair(a5, 4)
    assert not isinstance(pair, SearchFailure)
    s1, s2 = (w.subset for w in pair)
    assert orbits_certified_distinct(a5, s1, s2)
    assert all(verify_witness(a5, w) for w in pair)
    assert not isinstance(distinct_orbit_pair(l27, 3), SearchFailure)
