"""Explicit bases for diagonal-type groups with a giant top group.

Every construction returns a BaseCandidate holding raw rows a_0, ...,
a_{l-1} of T indices (D is implicit).  Nothing here is trusted: callers
verify candidates with ``verify_candidate``, which recomputes the
pointwise stabilizer from the rows alone.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .catalog import AutAction
from .diagonal import D_point, is_base, normalize
from .holomorph import (Refusal, SearchFailure, SubsetWitness, find_regular_subset,
                        stabilizer_is_trivial)
from .perm import conjugacy_classes

# machine-readable reasons attached to refusals
TAG_K_EQUALS_T = "k_equals_T"               # k = |T|, so b = l+2 for every giant top group
TAG_SYMMETRIC_TOP_EDGE = "edge_with_Sk"      # k in {|T|-2, |T|^l-1, |T|^l} and S_k <= G
TAG_SQUARE_MINUS_TWO = "square_minus_two_no_pair"  # k = |T|^2-2, S_k <= G, no (x, y) pair in K


@dataclass
class TPartition:
    parts: dict[int, list[int]]
    k: int
    ell: int
    regime: str = ""
    S: list[int] = field(default_factory=list)
    x: int | None = None

    def size(self, t: int) -> int:
        return len(self.parts.get(t, []))


@dataclass
class BaseCandidate:
    group: str
    k: int
    ell: int
    rows: list[list[int]]
    provenance: str
    p_type: str = "S"
    out: tuple[int, ...] | None = None
    verdict: str | None = None
    stabilizer_order: int | None = None
    witnesses: dict = field(default_factory=dict)

    def points(self, a: AutAction):
        return [D_point(self.k)] + [normalize(a, r) for r in self.rows]


def verify_candidate(a: AutAction, cand: BaseCandidate, p_type: str | None = None,
                     out_subgroup=None, record: bool = True):
    p_type = p_type or cand.p_type
    out_subgroup = out_subgroup if out_subgroup is not None else cand.out
    ok, desc = is_base(a, cand.points(a), p_type, out_subgroup)
    if record:
        cand.p_type, cand.out = p_type, out_subgroup
        cand.verdict = "base" if ok else "not_base"
        cand.stabilizer_order = desc.order
    return ok, desc


def verify_all_selectors(a: AutAction, cand: BaseCandidate, p_types=("A", "S")) -> dict:
    out = {}
    for pt in p_types:
        for sub in a.out_subgroups:
            ok, desc = verify_candidate(a, cand, pt, sub, record=False)
            out[(pt, sub)] = desc.order
    return out


# ------------------------------------------------------------ witness searches

def _class_reps(a: AutAction) -> list[int]:
    return [r for r in conjugacy_classes(a.t_table).class_reps if r != 0]


def _y_order(a: AutAction, seed: int | None) -> np.ndarray:
    ys = np.arange(1, a.order)
    if seed is not None:
        ys = np.random.default_rng(seed).permutation(ys)
    return ys


def pair_good_mask(a: AutAction, xs, kmask) -> np.ndarray:
    """For fixed elements xs, the t in T such that xs + [t] has no common
    non-identity centralizing automorphism in K and no common inverter."""
    aut_k = a.A[kmask]
    ident = np.arange(a.order)
    cent = np.ones(aut_k.shape[0], dtype=bool)
    inv = np.ones(aut_k.shape[0], dtype=bool)
    for x in xs:
        cent &= aut_k[:, x] == x
        inv &= aut_k[:, x] == a.t_inv[x]
    cent_rows = aut_k[cent]
    fixed_count = (cent_rows == ident).sum(axis=0)  # identity always contributes
    inverted = (aut_k[inv] == a.t_inv[None, :]).any(axis=0)
    return (fixed_count == 1) & ~inverted


def k2_find_pair(a: AutAction, out_subgroup=None, seed: int | None = 0, budget: int | None = None):
    """(s, t) with trivial common centralizer in K and no common inverter in K.

    s runs over class representatives of T (enough, since the conditions
    are invariant under conjugating both by T), t over all of T in a seeded
    order.  Without a budget the scan is exhaustive, so failure is a proof.
    """
    kmask = a.k_mask(out_subgroup)
    tested = 0
    for s in _class_reps(a):
        good = pair_good_mask(a, [s], kmask)
        for t in _y_order(a, seed):
            tested += 1
            if budget is not None and tested > budget:
                return SearchFailure("budget exhausted", tested - 1, seed or 0)
            if good[t]:
                return int(s), int(t)
    return SearchFailure("exhaustive scan: no pair exists", tested, seed or 0,
                         note="scan covered every class representative and every element")


def find_triple(a: AutAction, seed: int | None = 0):
    """(x, y, z) with trivial common centralizer in Aut(T) and no common inverter."""
    kmask = a.k_mask(None)
    for x in _class_reps(a):
        for y in _y_order(a, seed):
            good = pair_good_mask(a, [x, int(y)], kmask)
            good[0] = False
            hits = np.flatnonzero(good)
            if hits.size:
                return int(x), int(y), int(hits[0])
    return SearchFailure("exhaustive scan: no triple exists", 0, seed or 0)


def find_aut_free_pair(a: AutAction):
    """x, y in T# whose set {x, y} is fixed by no non-identity automorphism."""
    ident = np.arange(a.order)
    for x in _class_reps(a):
        cx = a.A[a.A[:, x] == x]
        fixed_count = (cx == ident).sum(axis=0)
        swap_bad = np.zeros(a.order, dtype=bool)
        ys = a.A[:, x]
        swap_bad[ys[a.A[np.arange(a.aut_order), ys] == x]] = True
        ok = (fixed_count == 1) & ~swap_bad
        ok[[0, x]] = False
        hits = np.flatnonzero(ok)
        if hits.size:
            return int(x), int(hits[0])
    return SearchFailure("no pair with trivial automorphism stabilizer", 0, 0)


def regular_subset_with_identity(a: AutAction, m: int, seed: int, budget: int) -> list[int]:
    w = find_regular_subset(a, m, seed=seed, budget=budget)
    if not isinstance(w, SubsetWitness):
        raise RuntimeError(f"no regular {m}-subset found: {w.reason}")
    s = w.subset
    if 0 not in s:
        # translating by an element of s keeps the stabilizer trivial
        row = a.t_table.left_row(int(a.t_inv[s[0]]))
        s = sorted(int(row[x]) for x in s)
    return s


# ------------------------------------------------------------ partitions

def _fill(sizes: dict[int, int], k: int) -> dict[int, list[int]]:
    parts, pos = {}, 0
    for t in sorted(sizes):
        if sizes[t]:
            parts[t] = list(range(pos, pos + sizes[t]))
            pos += sizes[t]
    if pos != k:
        raise AssertionError("block sizes do not add up to k")
    return parts


def _split_avoiding_one(total: int, cap: int, pieces: int) -> list[int]:
    """Write total as pieces parts in {0} u [2, cap]."""
    out = []
    for i in range(pieces):
        left = pieces - i - 1
        take = min(cap, total)
        if total - take == 1:
            take -= 1
        if take == 1:
            take = 0
        out.append(take)
        total -= take
        if total == 0:
            out += [0] * left
            break
    if total:
        raise ValueError("cannot split remainder")
    return out


def build_partition(a: AutAction, ell: int, k: int, seed: int = 0, budget: int = 10000) -> TPartition:
    n = a.order
    N = n ** (ell - 1)
    if ell < 2 or not N < k <= n**ell - 3:
        raise ValueError(f"need l >= 2 and {N} < k <= {n**ell - 3}")
    sizes: dict[int, int] = {}
    if k > n**ell - 2 * N:
        S = regular_subset_with_identity(a, n - 3, seed, budget)
        x1, x2, x3 = [t for t in range(n) if t not in S]
        for t in S:
            sizes[t] = N
        rest = k - (n - 2) * N + 1
        sizes[x1] = N - 1
        sizes[x2] = min(N - 1, rest - 1)
        sizes[x3] = rest - sizes[x2]
        regime, x = "high", x1
    elif k > 3 * N:
        m = (k - 1) // N
        S = regular_subset_with_identity(a, m, seed, budget)
        x1, x2 = [t for t in range(n) if t not in S][:2]
        for t in S:
            sizes[t] = N
        sizes[x1] = 1
        sizes[x2] = k - m * N - 1
        regime, x = "middle", x1
    else:
        S = regular_subset_with_identity(a, 3, seed, budget)
        others = [t for t in range(n) if t not in S][:3]
        for t in S:
            sizes[t] = 1
        for t, sz in zip(others, _split_avoiding_one(k - 3, N, 3)):
            sizes[t] = sz
        regime, x = "low", next(t for t in S if t != 0)
    part = TPartition(_fill(sizes, k), k, ell, regime, S, x)
    check_partition(a, part)
    return part


def check_partition(a: AutAction, part: TPartition) -> None:
    """Raise unless the blocks cover [k] and satisfy the three size conditions."""
    n, N = a.order, a.order ** (part.ell - 1)
    flat = sorted(j for b in part.parts.values() for j in b)
    if flat != list(range(part.k)):
        raise AssertionError("blocks do not partition [k]")
    if any(len(b) > N for b in part.parts.values()):
        raise AssertionError("a block exceeds |T|^(l-1)")
    s1 = part.size(0)
    if s1 == 0:
        raise AssertionError("identity block is empty")
    S = [t for t in range(n) if part.size(t) == s1]
    if not stabilizer_is_trivial(a, S):
        raise AssertionError("blocks of identity size do not form a regular subset")
    if not any(part.size(t) in (1, N - 1) for t in range(1, n)):
        raise AssertionError("no non-identity block of size 1 or |T|^(l-1)-1")


# ------------------------------------------------------------ bases

def _vectors(n: int, ell: int) -> np.ndarray:
    """T^(l-1) in mixed-radix order; row h is b_h."""
    N = n ** (ell - 1)
    h = np.arange(N)
    return np.stack([(h // n**i) % n for i in range(ell - 1)], axis=1) if ell > 1 else np.zeros((1, 0), int)


def _swap_to(b: np.ndarray, vec, pos: int) -> np.ndarray:
    n_coords = b.shape[1]
    idx = int(np.flatnonzero((b == np.asarray(vec)[None, :n_coords]).all(axis=1))[0])
    b = b.copy()
    b[[idx, pos]] = b[[pos, idx]]
    return b


def build_base_main(a: AutAction, part: TPartition) -> BaseCandidate:
    n, ell, k = a.order, part.ell, part.k
    N = n ** (ell - 1)
    x = part.x if part.x is not None else next(
        t for t in range(1, n) if part.size(t) in (1, N - 1))
    b = _vectors(n, ell)
    if part.size(x) == N - 1 and part.size(x) != 1:
        b = _swap_to(b, [0] * (ell - 1), N - 1)
    rows = np.zeros((ell, k), dtype=np.int64)
    for t, block in part.parts.items():
        rows[0, block] = t
        rows[1:, block] = b[: len(block)].T
    return BaseCandidate(a.name, k, ell, rows.tolist(), "partition_rows",
                         witnesses={"regime": part.regime, "S": part.S, "x": x,
                                    "block_sizes": {str(t): len(v) for t, v in part.parts.items()}})


def _rows_from_sizes(a: AutAction, ell: int, k: int, sizes: dict[int, int], b: np.ndarray,
                     identity_block_rule: str) -> np.ndarray:
    parts = _fill(sizes, k)
    rows = np.zeros((ell, k), dtype=np.int64)
    for t, block in parts.items():
        rows[0, block] = t
        if t == 0 and identity_block_rule == "last_gets_one":
            rows[1:, block[:-1]] = b[: len(block) - 1].T
            rows[1:, block[-1]] = 0
        elif t == 0 and identity_block_rule == "shift":
            rows[1:, block] = b[1: len(block) + 1].T
        else:
            rows[1:, block] = b[: len(block)].T
    return rows


def build_base_edge(a: AutAction, ell: int, k: int, p_type: str = "S", out_subgroup=None,
                    seed: int = 0, budget: int = 10000):
    """Base of size l+1 at k in {|T|^l - 2, |T|^l - 1, |T|^l}, or a refusal
    when no base of that size exists for the selected group."""
    n = a.order
    N = n ** (ell - 1)
    m = n**ell - k
    if m not in (0, 1, 2):
        raise ValueError(f"k must be one of {n**ell - 2}, {n**ell - 1}, {n**ell}")
    if p_type not in ("A", "S"):
        raise ValueError("edge constructions need a giant top group")
    sym = p_type == "S"
    if ell == 1:
        if m == 0:
            return Refusal("k = |T|: every giant top group needs l+2 points", TAG_K_EQUALS_T)
        if sym:
            return Refusal("S_k <= G at k = |T|-2 or |T|-1: pairs never form a base", TAG_SYMMETRIC_TOP_EDGE)
        return _edge_ell1(a, k, m)
    if sym and m in (0, 1):
        return Refusal("S_k <= G at k = |T|^l-1 or |T|^l: a transposition survives any l+1 points",
                       TAG_SYMMETRIC_TOP_EDGE)
    if not sym:
        pair = find_aut_free_pair(a)
        if isinstance(pair, SearchFailure):
            raise RuntimeError(pair.reason)
        x, y = pair
        sizes = {t: N for t in range(n)}
        sizes[0], sizes[x], sizes[y] = N + 1, N - 1, N - m
        b = _swap_to(_vectors(n, ell), [y] * (ell - 1), N - 1)
        rows = _rows_from_sizes(a, ell, k, sizes, b, "last_gets_one")
        return BaseCandidate(a.name, k, ell, rows.tolist(), "aut_free_pair", p_type, out_subgroup,
                             witnesses={"x": x, "y": y})
    # S_k <= G and k = |T|^l - 2
    if ell == 2:
        pair = k2_find_pair(a, out_subgroup, seed=None)
        if isinstance(pair, SearchFailure):
            return Refusal("k = |T|^2-2 with S_k <= G and no (x, y) pair in K: b = 4",
                           TAG_SQUARE_MINUS_TWO)
        x, y = pair
        sizes = {t: n for t in range(n)}
        sizes[0] = sizes[x] = n - 1
        labels = [0] + [t for t in range(1, n) if t != y] + [y]
        b = np.array(labels)[:, None]
        rows = _rows_from_sizes(a, ell, k, sizes, b, "shift")
        return BaseCandidate(a.name, k, ell, rows.tolist(), "centralizer_pair", p_type, out_subgroup,
                             witnesses={"x": x, "y": y})
    triple = find_triple(a, seed=None)
    if isinstance(triple, SearchFailure):
        raise RuntimeError(triple.reason)
    x, y, z = triple
    sizes = {t: N for t in range(n)}
    sizes[0] = sizes[x] = N - 1
    b = _swap_to(_vectors(n, ell), [y] + [z] * (ell - 2), N - 1)
    rows = _rows_from_sizes(a, ell, k, sizes, b, "shift")
    return BaseCandidate(a.name, k, ell, rows.tolist(), "centralizer_triple", p_type, out_subgroup,
                         witnesses={"x": x, "y": y, "z": z})


def _edge_ell1(a: AutAction, k: int, m: int) -> BaseCandidate:
    """Pair base for A_k-type tops at k = |T|-1 or |T|-2."""
    from itertools import combinations
    from .holomorph import aut_setwise_stabilizer
    size = m + 1
    for S in combinations(range(1, a.order), size):
        if aut_setwise_stabilizer(a, S).size == 1:
            rest = [t for t in range(1, a.order) if t not in S]
            row = rest + [0, 0]
            return BaseCandidate(a.name, k, 1, [row], "aut_regular_complement", "A", None,
                                 witnesses={"S": list(S)})
    raise RuntimeError("no subset with trivial automorphism stabilizer")


def k2_base(a: AutAction, out_subgroup=None, seed: int | None = 0):
    pair = k2_find_pair(a, out_subgroup, seed)
    if isinstance(pair, SearchFailure):
        return pair
    s, t = pair
    return BaseCandidate(a.name, 2, 1, [[0, s], [0, t]], "k2_pair", "S", out_subgroup,
                         witnesses={"s": s, "t": t})


# ------------------------------------------------------------ top groups

def giant_top_group_check(a: AutAction, k: int) -> bool:
    """True iff some odd s in [3, k] is coprime to every element order of Out(T)."""
    orders = a.out_element_orders
    return any(all(gcd(s, o) == 1 for o in orders) for s in range(3, k + 1, 2))
