import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from diagbase.diagonal import (D_point, DiagonalPoint, WElement, act, brute_base, brute_base_size,
                               brute_pointwise_stabilizer, count_regular_suborbits,
                               distinguishing_partition_check, expand_records, is_base, normalize,
                               pointwise_stabilizer, w_mul)
from diagbase.holomorph import stabilizer_is_trivial
from diagbase.perm import Permutation


def w_elements(a, k):
    return st.builds(lambda u, al, pi: WElement(tuple(u), al, Permutation(tuple(pi))),
                     st.lists(st.integers(0, a.order - 1), min_size=k, max_size=k),
                     st.integers(0, a.aut_order - 1),
                     st.permutations(list(range(k))))


def raw_tuples(a, k):
    return st.lists(st.integers(0, a.order - 1), min_size=k, max_size=k)


@given(st.data())
def test_action_is_a_right_action(a5, data):
    k = data.draw(st.integers(2, 4))
    w1, w2 = data.draw(w_elements(a5, k)), data.draw(w_elements(a5, k))
    p = normalize(a5, data.draw(raw_tuples(a5, k)))
    assert act(a5, w_mul(a5, w1, w2), p) == act(a5, w2, act(a5, w1, p))


@given(st.data())
def test_points_are_cosets(a5, data):
    raw = data.draw(raw_tuples(a5, 3))
    c = data.draw(st.integers(0, 59))
    shifted = [a5.t_table.mul(c, t) for t in raw]
    assert normalize(a5, raw) == normalize(a5, shifted)
    assert normalize(a5, raw).coords[-1] == 0


def test_stabilizer_of_D_is_diagonal(a5):
    d = D_point(3)
    for al in (0, 17, 99):
        w = WElement((0, 0, 0), al, Permutation((2, 0, 1)))
        assert act(a5, w, d) == d
    assert not act(a5, WElement((1, 0, 0), 0, Permutation.identity(3)), d).is_D()


@pytest.mark.parametrize("p_type", ["S", "A"])
@given(data=st.data())
def test_pointwise_stabilizer_matches_brute(a5, p_type, data):
    k = data.draw(st.integers(2, 3))
    n_pts = data.draw(st.integers(1, 2))
    pts = [D_point(k)] + [normalize(a5, data.draw(raw_tuples(a5, k))) for _ in range(n_pts)]
    sub = data.draw(st.sampled_from([None, (0,)]))
    mask = a5.k_mask(sub)
    desc = pointwise_stabilizer(a5, pts, p_type, mask)
    brute = brute_pointwise_stabilizer(a5, pts, p_type, mask)
    assert desc.order == len(brute)
    assert expand_records(desc, k) == brute


def test_trivial_top_group_at_k2(a5):
    pts = [D_point(2), normalize(a5, [5, 0])]
    desc = pointwise_stabilizer(a5, pts, "1")
    assert desc.order == len(brute_pointwise_stabilizer(a5, pts, "1"))


def test_points_must_include_D(a5):
    with pytest.raises(ValueError):
        pointwise_stabilizer(a5, [normalize(a5, [1, 2, 0])])


def test_bridge_to_holomorph(a5):
    rng = np.random.default_rng(11)
    for k in (3, 4):
        for _ in range(30):
            raw = list(rng.integers(0, 60, k - 1)) + [0]
            ok, _ = is_base(a5, [D_point(k), normalize(a5, raw)])
            distinct = len(set(raw)) == k
            assert ok == (distinct and stabilizer_is_trivial(a5, raw))


@pytest.mark.parametrize("p_type, out, expected", [
    ("S", "full", 4), ("S", "1", 3), ("1", "full", 3), ("1", "1", 3)])
def test_brute_base_k2(a5, p_type, out, expected):
    size, pts = brute_base(a5, 2, p_type, a5.parse_out(out))
    assert size == expected
    ok, _ = is_base(a5, pts, p_type, a5.parse_out(out))
    assert ok


def test_brute_base_k3(a5):
    assert brute_base_size(a5, 3, "S") == 2
    assert brute_base_size(a5, 3, "A", (0,)) == 2


def test_brute_base_a6_k2(a6):
    assert brute_base_size(a6, 2, "S") == 4
    assert brute_base_size(a6, 2, "S", (0,)) == 3


@pytest.mark.parametrize("p_type, out, expected", [("S", None, 1), ("S", (0,), 4), ("A", None, 8),
                                                   ("A", (0,), 17)])
def test_regular_suborbits_k3(a5, p_type, out, expected):
    assert count_regular_suborbits(a5, 3, p_type, out, method="direct") == expected
    if p_type == "S":
        assert count_regular_suborbits(a5, 3, p_type, out, method="hol") == expected


def test_distinguishing_partitions():
    rot = Permutation.from_cycles([range(6)], 6)
    assert distinguishing_partition_check([rot], [[0], [1, 2], [3, 4, 5]])
    flip = Permutation.from_cycles([(1, 2)], 6)
    assert not distinguishing_partition_check([rot, flip], [[0], [1, 2], [3, 4, 5]])
    with pytest.raises(ValueError):
        distinguishing_partition_check([rot], [[0, 1], [2, 3], [4, 5]])
