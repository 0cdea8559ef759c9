import numpy as np
import pytest

from diagbase.bounds import base_size_formula
from diagbase.constructions import (TAG_K_EQUALS_T, TAG_SQUARE_MINUS_TWO, TAG_SYMMETRIC_TOP_EDGE,
                                    BaseCandidate, build_base_edge, build_base_main, build_partition,
                                    check_partition, find_aut_free_pair, find_triple,
                                    giant_top_group_check, k2_base, k2_find_pair, verify_all_selectors,
                                    verify_candidate)
from diagbase.holomorph import Refusal, SearchFailure, stabilizer_is_trivial


@pytest.mark.parametrize("k, regime", [(61, "low"), (175, "low"), (1000, "middle"), (3597, "high")])
def test_partition_regimes(a5, k, regime):
    part = build_partition(a5, 2, k, seed=1)
    assert part.regime == regime
    assert sum(part.size(t) for t in range(60)) == k
    check_partition(a5, part)


def test_partition_range_is_enforced(a5):
    for k in (60, 3598):
        with pytest.raises(ValueError):
            build_partition(a5, 2, k)


@pytest.mark.parametrize("k", [61, 62, 175, 240, 1000, 3000, 3597])
def test_main_construction_is_a_base(a5, k):
    cand = build_base_main(a5, build_partition(a5, 2, k, seed=k))
    assert len(cand.rows) == 2 and all(len(r) == k for r in cand.rows)
    orders = verify_all_selectors(a5, cand)
    assert set(orders.values()) == {1}
    for (pt, sub) in orders:
        full = pt == "S" and len(sub) == a5.out_order
        assert base_size_formula(60, k, True, pt == "S", g_full=full) == len(cand.rows) + 1


def test_main_construction_a6(a6):
    cand = build_base_main(a6, build_partition(a6, 2, 500, seed=2))
    ok, _ = verify_candidate(a6, cand, "S", None)
    assert ok


def test_candidates_are_not_trusted(a5):
    cand = build_base_main(a5, build_partition(a5, 2, 61, seed=0))
    broken = BaseCandidate(cand.group, cand.k, cand.ell, [[0] * 61, cand.rows[1]], "tampered")
    ok, desc = verify_candidate(a5, broken)
    assert not ok and broken.verdict == "not_base" and desc.order > 1


def test_k2_pairs(a5, l27):
    assert isinstance(k2_find_pair(a5, None), SearchFailure)
    s, t = k2_find_pair(a5, (0,))
    for a, sub in ((a5, (0,)), (l27, None)):
        cand = k2_base(a, sub)
        ok, _ = verify_candidate(a, cand, "S", sub)
        assert ok


def test_witness_helpers(a5):
    x, y = find_aut_free_pair(a5)
    assert x != y and 0 not in (x, y)
    x, y, z = find_triple(a5)
    assert len({x, y, z}) == 3


@pytest.mark.parametrize("k, p_type, out, tag", [
    (60, "A", None, TAG_K_EQUALS_T), (60, "S", None, TAG_K_EQUALS_T),
    (58, "S", None, TAG_SYMMETRIC_TOP_EDGE), (59, "S", (0,), TAG_SYMMETRIC_TOP_EDGE),
    (3600, "S", None, TAG_SYMMETRIC_TOP_EDGE), (3599, "S", None, TAG_SYMMETRIC_TOP_EDGE),
    (3598, "S", None, TAG_SQUARE_MINUS_TWO)])
def test_edge_refusals(a5, k, p_type, out, tag):
    ell = 1 if k <= 60 else 2
    res = build_base_edge(a5, ell, k, p_type, out)
    assert isinstance(res, Refusal) and res.tag == tag
    full = p_type == "S" and out is None
    assert base_size_formula(60, k, True, p_type == "S", g_full=full) == ell + 2


@pytest.mark.parametrize("ell, k, p_type, out", [
    (1, 58, "A", None), (1, 59, "A", None), (2, 3598, "A", None), (2, 3599, "A", None),
    (2, 3600, "A", None), (2, 3598, "S", (0,))])
def test_edge_bases(a5, ell, k, p_type, out):
    cand = build_base_edge(a5, ell, k, p_type, out)
    assert isinstance(cand, BaseCandidate)
    ok, _ = verify_candidate(a5, cand, p_type, out)
    assert ok and len(cand.rows) == ell
    assert base_size_formula(60, k, True, p_type == "S") == ell + 1


def test_giant_top_group_condition(a5):
    assert giant_top_group_check(a5, 3)
    assert not giant_top_group_check(a5, 2)
