"""Diagonal-type groups G = T^k.(O x P) acting on cosets of the diagonal D.

A point D(phi_t1, ..., phi_tk) depends only on the tuple (t_1..t_k) up to
a common left factor, so points are stored with the last coordinate
moved to the identity.  A W element (phi_u1 a, ..., phi_uk a) pi sends
the tuple t to v with

    v_i = (t_j * u_j)^a,   j = pi^-1(i),

followed by renormalization.  The stabilizer of D is the set of
(a, ..., a) pi, and such an element fixes D(t) exactly when a constant c
satisfies t_j^a = c * t_pi(j) for every position j.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from math import factorial, prod

import numpy as np

from .catalog import AutAction
from .perm import GroupOverflowError, Permutation

P_TYPES = ("1", "A", "S")


@dataclass(frozen=True)
class DiagonalPoint:
    coords: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.coords)

    def is_D(self) -> bool:
        return not any(self.coords)


def normalize(a: AutAction, raw) -> DiagonalPoint:
    raw = np.asarray(raw, dtype=np.int64)
    shift = a.t_table.left_row(int(a.t_inv[raw[-1]]))
    return DiagonalPoint(tuple(int(x) for x in shift[raw]))


def D_point(k: int) -> DiagonalPoint:
    return DiagonalPoint((0,) * k)


@dataclass(frozen=True)
class WElement:
    u: tuple[int, ...]
    alpha: int
    pi: Permutation


def act(a: AutAction, w: WElement, p: DiagonalPoint) -> DiagonalPoint:
    k = p.k
    pinv = w.pi.inverse().images
    mul = a.t_table.mul
    raw = [int(a.A[w.alpha][mul(p.coords[pinv[i]], w.u[pinv[i]])]) for i in range(k)]
    return normalize(a, raw)


def w_mul(a: AutAction, w1: WElement, w2: WElement) -> WElement:
    """The W element acting as w1 followed by w2."""
    ainv = int(a.aut_inv[w1.alpha])
    u = tuple(a.t_table.mul(w1.u[j], int(a.A[ainv][w2.u[w1.pi.images[j]]])) for j in range(len(w1.u)))
    return WElement(u, a.aut_mul(w1.alpha, w2.alpha), w1.pi * w2.pi)


# ------------------------------------------------------------ stabilizers

@dataclass
class StabRecord:
    """All (a,...,a) pi with a fixed alpha and constant vector c.

    Position j may go to any position in ``targets[j]``'s class; the
    classes are the groups of equal columns.  ``pi_rep`` is one choice.
    """
    alpha: int
    c: tuple[int, ...]
    pi_rep: tuple[int, ...]
    classes: list[list[int]]
    n_total: int
    n_even: int


@dataclass
class StabilizerDescription:
    records: list[StabRecord]
    order: int
    p_type: str
    has_odd_pi: bool
    has_transposition: bool
    notes: list[str] = field(default_factory=list)

    @property
    def trivial(self) -> bool:
        return self.order == 1


def _perm_sign(images) -> int:
    return Permutation(tuple(images)).sign()


def _rows_of(points, k: int) -> np.ndarray:
    if not any(p.is_D() for p in points):
        raise ValueError("the point set must contain D")
    rows = [p.coords for p in points if not p.is_D()]
    if any(len(r) != k for r in rows):
        raise ValueError("points have different k")
    return np.array(rows, dtype=np.int64).reshape(len(rows), k)


def _row_constants(a: AutAction, row: np.ndarray, alpha_row: np.ndarray) -> list[int]:
    """All c with {t^alpha : t in row} = c * {t in row} as multisets."""
    n = a.order
    h = np.bincount(row, minlength=n)
    h_alpha = np.zeros(n, dtype=h.dtype)
    h_alpha[alpha_row] = h
    present = np.flatnonzero(h)
    x0 = int(present[np.argmin(h[present])])
    ys = np.flatnonzero(h_alpha == h[x0])
    x0_inv = int(a.t_inv[x0])
    out = []
    for y in ys:
        c = a.t_table.mul(int(y), x0_inv)
        if np.array_equal(h_alpha[a.t_table.left_row(c)], h):
            out.append(c)
    return out


def pointwise_stabilizer(a: AutAction, points, p_type: str = "S", k_mask=None) -> StabilizerDescription:
    """Pointwise stabilizer of a point set containing D inside G_D = {(a,...,a) pi}.

    ``k_mask`` restricts a to K = Inn(T).O; ``p_type`` restricts pi to the
    trivial group, A_k or S_k.
    """
    if p_type not in P_TYPES:
        raise ValueError(f"p_type must be one of {P_TYPES}")
    k = points[0].k
    rows = _rows_of(points, k)
    n_rows = rows.shape[0]
    alphas = np.arange(a.aut_order) if k_mask is None else np.flatnonzero(k_mask)
    records = []
    for alpha in alphas:
        alpha = int(alpha)
        arow = a.A[alpha]
        moved = arow[rows]
        combos = [()]
        for r in range(n_rows):
            cs = _row_constants(a, rows[r], arow)
            combos = [c + (x,) for c in combos for x in cs]
            if not combos:
                break
        for c in combos:
            target = np.stack([a.t_table.left_row(c[r])[rows[r]] for r in range(n_rows)]) if n_rows else rows
            rec = _match_columns(alpha, c, moved, target, k)
            if rec is not None:
                records.append(rec)
    return _describe(records, p_type, k)


def _match_columns(alpha, c, moved, target, k) -> StabRecord | None:
    if target.shape[0] == 0:
        labels_t = np.zeros(k, dtype=np.int64)
        labels_m = labels_t
    else:
        both = np.concatenate([target, moved], axis=1)
        _, inv = np.unique(both, axis=1, return_inverse=True)
        inv = inv.ravel()
        labels_t, labels_m = inv[:k], inv[k:]
    nlab = int(max(labels_t.max(), labels_m.max())) + 1
    cnt_t = np.bincount(labels_t, minlength=nlab)
    if not np.array_equal(cnt_t, np.bincount(labels_m, minlength=nlab)):
        return None
    # position j must go to a target column equal to moved column j
    order_t = np.argsort(labels_t, kind="stable")
    order_m = np.argsort(labels_m, kind="stable")
    pi = np.empty(k, dtype=np.int64)
    pi[order_m] = order_t
    starts = np.concatenate([[0], np.cumsum(cnt_t)])
    classes = [order_t[starts[i]:starts[i + 1]].tolist() for i in range(nlab) if cnt_t[i] > 1]
    n_total = prod(factorial(int(x)) for x in cnt_t)
    if classes:
        n_even = n_total // 2
    else:
        n_even = n_total if _perm_sign(pi.tolist()) == 1 else 0
    return StabRecord(alpha, tuple(int(x) for x in c), tuple(int(x) for x in pi), classes, n_total, n_even)


def _describe(records, p_type, k) -> StabilizerDescription:
    kept, order = [], 0
    for rec in records:
        if p_type == "S":
            cnt = rec.n_total
        elif p_type == "A":
            cnt = rec.n_even
        else:
            # only the identity permutation is allowed
            ok = all(j == p or any(j in cl and p in cl for cl in rec.classes)
                     for j, p in enumerate(rec.pi_rep))
            cnt = 1 if ok else 0
        if cnt:
            kept.append(rec)
            order += cnt
    has_odd = p_type == "S" and any(r.n_total > r.n_even for r in kept)
    has_transp = p_type == "S" and any(r.alpha == 0 and not any(r.c) and r.classes for r in kept)
    return StabilizerDescription(kept, order, p_type, has_odd, has_transp)


def expand_records(desc: StabilizerDescription, k: int) -> set[tuple[int, tuple[int, ...]]]:
    """Explicit (alpha, pi) pairs; small k only."""
    out = set()
    for rec in desc.records:
        for pi in permutations(range(k)):
            ok = all(pi[j] == rec.pi_rep[j] or any(pi[j] in cl and rec.pi_rep[j] in cl for cl in rec.classes)
                     for j in range(k))
            if not ok:
                continue
            sgn = _perm_sign(pi)
            if desc.p_type == "A" and sgn != 1:
                continue
            if desc.p_type == "1" and pi != tuple(range(k)):
                continue
            out.add((rec.alpha, pi))
    return out


def brute_pointwise_stabilizer(a: AutAction, points, p_type: str = "S", k_mask=None):
    """Oracle: filter every (a,...,a) pi by applying it to each point."""
    k = points[0].k
    alphas = np.arange(a.aut_order) if k_mask is None else np.flatnonzero(k_mask)
    out = set()
    for pi in permutations(range(k)):
        perm = Permutation(pi)
        if p_type == "A" and perm.sign() != 1:
            continue
        if p_type == "1" and pi != tuple(range(k)):
            continue
        for alpha in alphas:
            w = WElement((0,) * k, int(alpha), perm)
            if all(act(a, w, p) == p for p in points):
                out.add((int(alpha), pi))
    return out


def is_base(a: AutAction, points, p_type: str = "S", out_subgroup=None):
    desc = pointwise_stabilizer(a, points, p_type, a.k_mask(out_subgroup))
    return desc.order == 1, desc


# ------------------------------------------------------------ brute force on Omega

class PointStabilizerAction:
    """G_D materialized as permutations of the |T|^(k-1) points of Omega."""

    def __init__(self, a: AutAction, k: int, p_type: str, out_subgroup=None, cap: int = 10**4):
        if p_type == "1" and k != 2:
            raise ValueError("trivial top group is only modelled for k = 2")
        n = a.order
        size = n ** (k - 1)
        if size > cap:
            raise GroupOverflowError(f"|Omega| = {size} exceeds cap {cap}")
        self.a, self.k, self.n_points = a, k, size
        coords = np.zeros((size, k), dtype=np.int64)
        idx = np.arange(size)
        for i in range(k - 1):
            coords[:, i] = (idx // n**i) % n
        mt = a.mul_table()
        tinv = a.t_inv
        pis = [pi for pi in permutations(range(k))
               if p_type == "S" or (p_type == "A" and Permutation(pi).sign() == 1)
               or pi == tuple(range(k))]
        kmask = a.k_mask(out_subgroup)
        weights = n ** np.arange(k - 1)
        perms, labels = [], []
        for pi in pis:
            pinv = np.argsort(pi)
            src = coords[:, pinv]
            for alpha in np.flatnonzero(kmask):
                v = a.A[alpha][src]
                v = mt[tinv[v[:, -1]][:, None], v]
                perms.append(v[:, :-1] @ weights)
                labels.append((int(alpha), pi))
        self.perms = np.array(perms)
        self.labels = labels
        self.order = len(labels)

    def point_index(self, p: DiagonalPoint) -> int:
        return int(sum(c * self.a.order**i for i, c in enumerate(p.coords[:-1])))

    def point(self, idx: int) -> DiagonalPoint:
        n = self.a.order
        return DiagonalPoint(tuple((idx // n**i) % n for i in range(self.k - 1)) + (0,))

    def orbits(self, subgroup: np.ndarray) -> list[np.ndarray]:
        seen = np.zeros(self.n_points, dtype=bool)
        out = []
        images = self.perms[subgroup]
        for w in range(self.n_points):
            if not seen[w]:
                orb = np.unique(images[:, w])
                seen[orb] = True
                out.append(orb)
        return out


def _min_base(act: PointStabilizerAction, sub: np.ndarray, depth: int) -> list[int] | None:
    if sub.size == 1:
        return []
    if depth == 0:
        return None
    orbs = sorted((o for o in act.orbits(sub) if o.size > 1), key=lambda o: -o.size)
    if not orbs or orbs[0].size ** depth < sub.size:
        return None
    for orb in orbs:
        w = int(orb[0])
        stab = sub[act.perms[sub, w] == w]
        rest = _min_base(act, stab, depth - 1)
        if rest is not None:
            return [w] + rest
    return None


def brute_base(a: AutAction, k: int, p_type: str = "S", out_subgroup=None, cap: int = 10**4):
    """Minimum base of G by exhaustive search; returns (size, points)."""
    act_ = PointStabilizerAction(a, k, p_type, out_subgroup, cap)
    everything = np.arange(act_.order)
    depth = 1
    while True:
        found = _min_base(act_, everything, depth)
        if found is not None:
            pts = [D_point(k)] + [act_.point(w) for w in found]
            return 1 + len(found), pts
        depth += 1


def brute_base_size(a: AutAction, k: int, p_type: str = "S", out_subgroup=None, cap: int = 10**4) -> int:
    return brute_base(a, k, p_type, out_subgroup, cap)[0]


def count_regular_suborbits(a: AutAction, k: int, p_type: str = "S", out_subgroup=None,
                            method: str = "auto", cap: int = 10**4, subset_cap: int = 10**6) -> int:
    """Number of regular G_D-orbits on Omega.

    With top group S_k, regular suborbits match the regular orbits of
    T:K on k-subsets of T, which are counted on the holomorph side;
    otherwise G_D is materialized on Omega.
    """
    if method == "auto":
        method = "hol" if p_type == "S" else "direct"
    if method == "hol":
        if p_type != "S":
            raise ValueError("the holomorph count needs top group S_k")
        from .holomorph import count_regular_orbits
        return count_regular_orbits(a, k, a.k_mask(out_subgroup), cap=subset_cap).regular_count
    act_ = PointStabilizerAction(a, k, p_type, out_subgroup, cap)
    everything = np.arange(act_.order)
    return sum(1 for o in act_.orbits(everything) if o.size == act_.order)


def distinguishing_partition_check(p_generators, partition, cap: int = 10**6) -> bool:
    """True iff only the identity of P fixes each of the three blocks setwise."""
    from .perm import enumerate_group
    blocks = [sorted(b) for b in partition]
    if len(blocks) != 3 or any(not b for b in blocks):
        raise ValueError("need three non-empty blocks")
    if len({len(b) for b in blocks}) != 3:
        raise ValueError("block sizes must be distinct")
    flat = [x for b in blocks for x in b]
    k = len(flat)
    if sorted(flat) != list(range(k)):
        raise ValueError("blocks must partition {0..k-1}")
    gens = [g for g in p_generators if g.images != tuple(range(k))]
    if not gens:
        return True
    grp = enumerate_group(gens, cap=cap)
    label = np.empty(k, dtype=np.int64)
    for i, b in enumerate(blocks):
        label[b] = i
    keeps = (label[grp.perms] == label[None, :]).all(axis=1)
    return int(keeps.sum()) == 1
