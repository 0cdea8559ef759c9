"""The holomorph Hol(T) = T:Aut(T) acting on T by t -> (g^-1 t)^alpha.

Elements are pairs (g, alpha) of a T index and an Aut index.  Applying
(g, a) and then (h, b) is the single element (g * h^(a^-1), a*b).

Most routines accept an optional boolean mask over Aut(T) selecting a
subgroup K containing Inn(T); they then work in T:K instead.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .catalog import AutAction
from .perm import GroupOverflowError, subgroup_order

NEGATIVE_SEARCH_NOTE = ("random search is seeded and bounded; a failure is evidence, "
                        "not a proof that no such subset exists")


@dataclass(frozen=True)
class HolElement:
    g: int
    alpha: int


@dataclass
class SubsetWitness:
    group: str
    subset: list[int]
    stabilizer_order: int
    certificate_kind: str  # exhaustive | order_multiset | subgroup_closure
    seed: int | None = None
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        self.subset = sorted(int(x) for x in self.subset)
        if len(set(self.subset)) != len(self.subset):
            raise ValueError("subset entries must be distinct")
        if self.certificate_kind not in ("exhaustive", "order_multiset", "subgroup_closure"):
            raise ValueError(self.certificate_kind)
        if self.certificate_kind != "exhaustive" and self.stabilizer_order != 1:
            raise ValueError("certificates only certify trivial stabilizers")

    @property
    def k(self) -> int:
        return len(self.subset)


@dataclass
class Refusal:
    reason: str
    tag: str = ""


@dataclass
class SearchFailure:
    reason: str
    attempts: int
    seed: int
    note: str = NEGATIVE_SEARCH_NOTE


# ------------------------------------------------------------ arithmetic

def hol_apply(a: AutAction, e: HolElement, t: int) -> int:
    return int(a.A[e.alpha][a.t_table.mul(int(a.t_inv[e.g]), t)])


def hol_perm(a: AutAction, e: HolElement) -> np.ndarray:
    return a.A[e.alpha][a.t_table.left_row(int(a.t_inv[e.g]))]


def hol_compose(a: AutAction, e1: HolElement, e2: HolElement) -> HolElement:
    """The element acting as e1 followed by e2."""
    h_twisted = int(a.A[int(a.aut_inv[e1.alpha])][e2.g])
    return HolElement(a.t_table.mul(e1.g, h_twisted), a.aut_mul(e1.alpha, e2.alpha))


def hol_inverse(a: AutAction, e: HolElement) -> HolElement:
    ainv = int(a.aut_inv[e.alpha])
    return HolElement(int(a.A[e.alpha][a.t_inv[e.g]]), ainv)


# ------------------------------------------------------------ stabilizers

def _as_mask(a: AutAction, k_mask) -> np.ndarray:
    return np.ones(a.aut_order, dtype=bool) if k_mask is None else np.asarray(k_mask, dtype=bool)


def _small_side(a: AutAction, s) -> np.ndarray:
    s = np.unique(np.asarray(list(s), dtype=np.int64))
    if s.size and (s.min() < 0 or s.max() >= a.order):
        raise ValueError("subset index out of range")
    if 2 * s.size > a.order:
        keep = np.ones(a.order, dtype=bool)
        keep[s] = False
        s = np.flatnonzero(keep)
    return s


def _stab_containing_one(a: AutAction, s: np.ndarray, kmask: np.ndarray, stop_nontrivial: bool):
    """Pairs (g, alpha) stabilizing s, where 0 lies in s.

    Such a g must lie in s itself, and alpha must carry g^-1 s onto s, so
    each candidate g is screened by element-order multisets first.
    """
    n = a.order
    in_s = np.zeros(n, dtype=bool)
    in_s[s] = True
    ords = a.t_orders
    target = np.sort(ords[s])
    base = np.flatnonzero(kmask)
    found = []
    for g in s:
        x = a.t_table.left_row(int(a.t_inv[g]))[s]
        if not np.array_equal(np.sort(ords[x]), target):
            continue
        cand = base
        for col in x:
            cand = cand[in_s[a.A[cand, col]]]
            if cand.size == 0:
                break
        for alpha in cand:
            found.append(HolElement(int(g), int(alpha)))
            if stop_nontrivial and (g != 0 or alpha != 0):
                return found
    return found


def setwise_stabilizer(a: AutAction, s, k_mask=None) -> list[HolElement]:
    """All (g, alpha) in T:K mapping the subset s onto itself."""
    kmask = _as_mask(a, k_mask)
    s = _small_side(a, s)
    if s.size == 0:
        return [HolElement(g, int(al)) for al in np.flatnonzero(kmask) for g in range(a.order)]
    s0 = int(s[0])
    shifted = np.sort(a.t_table.left_row(int(a.t_inv[s0]))[s])
    inner = _stab_containing_one(a, shifted, kmask, stop_nontrivial=False)
    tau, tau_inv = HolElement(s0, 0), HolElement(int(a.t_inv[s0]), 0)
    return [hol_compose(a, hol_compose(a, tau, e), tau_inv) for e in inner]


def stabilizer_is_trivial(a: AutAction, s, k_mask=None) -> bool:
    kmask = _as_mask(a, k_mask)
    s = _small_side(a, s)
    if s.size == 0:
        return a.order * int(kmask.sum()) == 1
    s0 = int(s[0])
    shifted = np.sort(a.t_table.left_row(int(a.t_inv[s0]))[s])
    found = _stab_containing_one(a, shifted, kmask, stop_nontrivial=True)
    return len(found) == 1


def aut_setwise_stabilizer(a: AutAction, s, k_mask=None) -> np.ndarray:
    """Automorphism indices (within K) fixing the subset s of T#."""
    s = np.asarray(sorted(set(int(x) for x in s)), dtype=np.int64)
    if (s == 0).any():
        raise ValueError("subset must avoid the identity")
    in_s = np.zeros(a.order, dtype=bool)
    in_s[s] = True
    cand = np.flatnonzero(_as_mask(a, k_mask))
    for col in s:
        cand = cand[in_s[a.A[cand, col]]]
    return cand


# ------------------------------------------------------------ certificates

def certify_trivial(a: AutAction, s) -> SubsetWitness | Refusal:
    """Certificate that Hol(T, s) = 1 for a subset s containing the identity.

    Two checks suffice.  First, no non-identity automorphism fixes
    s minus {1}; this holds outright when the orders in s are pairwise
    distinct and s generates T, and is otherwise settled by a scan of
    Aut(T).  Second, for each t in s other than 1, the order multiset of
    t^-1 s differs from that of s, so no (t, alpha) maps s to itself.
    """
    s = sorted(set(int(x) for x in s))
    if 0 not in s:
        return Refusal("subset must contain the identity")
    ords = a.t_orders
    orders_s = sorted(int(ords[x]) for x in s)
    rest = [x for x in s if x != 0]
    distinct = len(set(orders_s)) == len(s)
    generates = distinct and subgroup_order(a.t_table, rest) == a.order
    if generates:
        aut_route = "distinct_orders_generate"
    else:
        if aut_setwise_stabilizer(a, rest).size != 1:
            return Refusal("a non-identity automorphism fixes the subset")
        aut_route = "aut_scan"
    shifted = {}
    for t in rest:
        row = a.t_table.left_row(int(a.t_inv[t]))
        ms = sorted(int(ords[row[x]]) for x in s)
        if ms == orders_s:
            return Refusal(f"translate by element {t} has the same order multiset")
        shifted[str(t)] = ms
    kind = "subgroup_closure" if generates else "order_multiset"
    return SubsetWitness(a.name, s, 1, kind, detail={
        "aut_condition": aut_route, "orders": orders_s, "translate_orders": shifted})


def exhaustive_witness(a: AutAction, s, seed: int | None = None, **detail) -> SubsetWitness:
    order = len(setwise_stabilizer(a, s))
    return SubsetWitness(a.name, list(s), order, "exhaustive", seed, dict(detail))


def verify_witness(a: AutAction, w: SubsetWitness) -> bool:
    """Recompute the stabilizer from scratch; stored orders are not trusted."""
    if any(x < 0 or x >= a.order for x in w.subset):
        return False
    return len(setwise_stabilizer(a, w.subset)) == w.stabilizer_order == 1


# ------------------------------------------------------------ searches

def _random_subset_with_one(rng: np.random.Generator, n: int, size: int) -> list[int]:
    rest = rng.choice(np.arange(1, n), size=size - 1, replace=False)
    return sorted([0] + rest.tolist())


def _complement(n: int, s) -> list[int]:
    inside = set(s)
    return [x for x in range(n) if x not in inside]


def find_regular_subset(a: AutAction, m: int, seed: int = 0, budget: int = 10000,
                        k_mask=None) -> SubsetWitness | SearchFailure:
    """Seeded search for an m-subset with trivial stabilizer in T:K.

    Searches uniform subsets of size min(m, |T|-m) containing 1 and
    complements at the end when m is past the midpoint.
    """
    n = a.order
    if not 1 <= m <= n - 1:
        raise ValueError(f"m must lie in [1, {n - 1}]")
    size = min(m, n - m)
    rng = np.random.default_rng(seed)
    for attempt in range(1, budget + 1):
        s = _random_subset_with_one(rng, n, size)
        if not stabilizer_is_trivial(a, s, k_mask):
            continue
        via_complement = size != m
        cert = certify_trivial(a, s) if k_mask is None else Refusal("restricted K")
        if isinstance(cert, SubsetWitness):
            w = cert
            w.seed = seed
        else:
            w = exhaustive_witness(a, s, seed)
        w.detail.update({"attempts": attempt, "budget": budget, "searched_size": size})
        if via_complement:
            w.detail["certified_subset"] = list(w.subset)
            w.subset = _complement(n, s)
            w.detail["via_complement"] = True
        return w
    return SearchFailure(f"no {m}-subset with trivial stabilizer in {budget} attempts", budget, seed)


def order_profile(a: AutAction, s, x: int) -> list[int]:
    """Sorted orders of x^-1 t over t in s."""
    row = a.t_table.left_row(int(a.t_inv[x]))
    return sorted(int(o) for o in a.t_orders[row[np.asarray(s)]])


def orbits_certified_distinct(a: AutAction, s1, s2) -> bool:
    """Sufficient test that two subsets containing 1 lie in different orbits."""
    target = sorted(int(o) for o in a.t_orders[np.asarray(s2)])
    return all(order_profile(a, s1, int(x)) != target for x in s1)


def distinct_orbit_pair(a: AutAction, k: int, seed: int = 0, budget: int = 2000):
    """Two k-subsets with trivial stabilizers certified to lie in different orbits."""
    n = a.order
    size = min(k, n - k)
    rng = np.random.default_rng(seed)
    found: list[list[int]] = []
    for attempt in range(1, budget + 1):
        s = _random_subset_with_one(rng, n, size)
        if not stabilizer_is_trivial(a, s):
            continue
        for prev in found:
            if orbits_certified_distinct(a, prev, s) and orbits_certified_distinct(a, s, prev):
                pair = []
                for sub in (prev, s):
                    w = exhaustive_witness(a, sub, seed, attempts=attempt, searched_size=size)
                    if size != k:
                        w.detail["certified_subset"] = list(sub)
                        w.detail["via_complement"] = True
                        w.subset = _complement(n, sub)
                    pair.append(w)
                return tuple(pair)
        found.append(s)
    return SearchFailure(f"no certified pair of distinct regular orbits at k={k} in {budget} attempts",
                         budget, seed)


# ------------------------------------------------------------ orbit counting

@dataclass
class OrbitCount:
    k: int
    regular_count: int
    total_orbit_count: int
    orbit_sizes: list[int]
    regular_reps: list[list[int]]
    group_order: int


def _colex_rank(subsets: np.ndarray, binom: np.ndarray) -> np.ndarray:
    k = subsets.shape[1]
    return binom[subsets, np.arange(1, k + 1)].sum(axis=1)


def _colex_unrank(r: int, n: int, k: int) -> list[int]:
    out = []
    for i in range(k, 0, -1):
        c = i - 1
        while comb(c + 1, i) <= r:
            c += 1
        out.append(c)
        r -= comb(c, i)
    return out[::-1]


def count_regular_orbits(a: AutAction, k: int, k_mask=None, cap: int = 10**6) -> OrbitCount:
    """Exact orbit census of T:K on k-subsets of T.

    Subsets are visited in colex order; the first unvisited subset is the
    colex-least member of a new orbit, whose full image set is then marked.
    Counts at k and |T|-k agree, so the smaller side is enumerated.
    """
    n = a.order
    if not 0 <= k <= n:
        raise ValueError("k out of range")
    kmask = _as_mask(a, k_mask)
    group_order = n * int(kmask.sum())
    kk = min(k, n - k)
    total = comb(n, kk)
    if total > cap:
        raise GroupOverflowError(f"C({n},{kk}) = {total} subsets exceeds cap {cap}")
    if kk == 0:
        regular = 1 if group_order == 1 else 0
        return OrbitCount(k, regular, 1, [1], [[]] if regular else [], group_order)
    binom = np.array([[comb(x, j) for j in range(kk + 1)] for x in range(n)], dtype=np.int64)
    left_inv = np.stack([a.t_table.left_row(int(a.t_inv[g])) for g in range(n)])
    aut_k = a.A[kmask]
    seen = np.zeros(total, dtype=bool)
    sizes, reps = [], []
    ptr = 0
    while True:
        rest = seen[ptr:]
        off = int(np.argmin(rest))
        if rest[off]:
            break
        ptr += off
        s = _colex_unrank(ptr, n, kk)
        imgs = aut_k[:, left_inv[:, s]].reshape(-1, kk)
        imgs.sort(axis=1)
        orbit = np.unique(_colex_rank(imgs.astype(np.int64), binom))
        seen[orbit] = True
        sizes.append(int(orbit.size))
        if orbit.size == group_order:
            reps.append(s)
    if sum(sizes) != total:
        raise AssertionError("orbit sizes do not sum to the number of subsets")
    if kk != k:
        reps = [_complement(n, r) for r in reps]
    return OrbitCount(k, len(reps), len(sizes), sizes, reps, group_order)
