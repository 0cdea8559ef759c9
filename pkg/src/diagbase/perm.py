"""Permutations and explicitly enumerated permutation groups.

Composition convention: ``compose(p, q)`` applies ``p`` first, so
``compose(p, q)[i] == q[p[i]]``.  Group products follow the same rule,
which makes ``x ** g`` style conjugation read ``g^-1 x g``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import lcm
from typing import Iterable, Sequence

import numpy as np


class GroupOverflowError(RuntimeError):
    """Raised when a closure would exceed its element cap."""


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> "Permutation":
        img = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a] = b
        return cls(tuple(img))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * self.degree
        out = []
        for i in range(self.degree):
            if seen[i]:
                continue
            cyc = [i]
            seen[i] = True
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return lcm(*(len(c) for c in self.cycles()))

    def sign(self) -> int:
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1

    def cycle_string(self) -> str:
        parts = ["(" + " ".join(map(str, c)) + ")" for c in self.cycles() if len(c) > 1]
        return "".join(parts) or "()"


def compose(p: Permutation, q: Permutation) -> Permutation:
    if p.degree != q.degree:
        raise ValueError("degree mismatch")
    return Permutation(tuple(q.images[i] for i in p.images))


def perm_orders(perms: np.ndarray) -> np.ndarray:
    """Element orders of a stack of permutations, one per row."""
    perms = np.asarray(perms)
    n_el, deg = perms.shape
    cycle_len = np.zeros((n_el, deg), dtype=np.int64)
    rows = np.arange(n_el)[:, None]
    start = np.broadcast_to(np.arange(deg), (n_el, deg))
    cur = perms.copy()
    step = 1
    while True:
        hit = (cur == start) & (cycle_len == 0)
        cycle_len[hit] = step
        if (cycle_len > 0).all():
            break
        cur = perms[rows, cur]
        step += 1
    return np.lcm.reduce(cycle_len, axis=1)


def _dtype_for(n: int):
    return np.int16 if n < 2**15 else np.int32


class _Index:
    """Row lookup for a stack of distinct permutations."""

    def __init__(self, perms: np.ndarray):
        self.deg = perms.shape[1]
        self.int_codes = self.deg > 0 and self.deg ** self.deg < 2**62
        if self.int_codes:
            self.weights = np.array([self.deg**i for i in range(self.deg)], dtype=np.int64)
            codes = perms.astype(np.int64) @ self.weights
            self.order = np.argsort(codes, kind="stable")
            self.sorted_codes = codes[self.order]
        else:
            self.table = {row.tobytes(): i for i, row in enumerate(perms)}
            self.dtype = perms.dtype

    def find(self, rows: np.ndarray) -> np.ndarray:
        """Indices of ``rows``; -1 where a row is not an element."""
        rows = np.atleast_2d(rows)
        if self.int_codes:
            codes = rows.astype(np.int64) @ self.weights
            pos = np.searchsorted(self.sorted_codes, codes)
            pos = np.minimum(pos, len(self.sorted_codes) - 1)
            ok = self.sorted_codes[pos] == codes
            return np.where(ok, self.order[pos], -1)
        rows = np.ascontiguousarray(rows, dtype=self.dtype)
        return np.array([self.table.get(r.tobytes(), -1) for r in rows], dtype=np.int64)


class GroupTable:
    """An explicitly enumerated permutation group.

    Element 0 is always the identity.  Products are looked up lazily, one
    row at a time, so no |G|^2 table is ever built unless ``dense_table``
    is asked for.
    """

    def __init__(self, perms: np.ndarray, generator_indices: Sequence[int] = ()):
        perms = np.ascontiguousarray(perms, dtype=_dtype_for(perms.shape[1]))
        if not (perms[0] == np.arange(perms.shape[1])).all():
            raise ValueError("element 0 must be the identity")
        self.perms = perms
        self.generator_indices = list(generator_indices)
        self._index = _Index(perms)
        self._left: dict[int, np.ndarray] = {}
        self._right: dict[int, np.ndarray] = {}
        self._dense: np.ndarray | None = None

    def __len__(self) -> int:
        return self.perms.shape[0]

    @property
    def order(self) -> int:
        return len(self)

    @property
    def degree(self) -> int:
        return self.perms.shape[1]

    def element(self, i: int) -> Permutation:
        return Permutation(tuple(int(x) for x in self.perms[i]))

    @cached_property
    def elements(self) -> list[Permutation]:
        return [self.element(i) for i in range(len(self))]

    def index_of(self, p: Permutation | Sequence[int]) -> int:
        img = p.images if isinstance(p, Permutation) else tuple(p)
        idx = int(self._index.find(np.array(img))[0])
        if idx < 0:
            raise KeyError(f"{img} is not in the group")
        return idx

    def find(self, rows: np.ndarray) -> np.ndarray:
        return self._index.find(rows)

    @cached_property
    def inv(self) -> np.ndarray:
        inv_perms = np.argsort(self.perms, axis=1)
        return self._index.find(inv_perms)

    @cached_property
    def orders(self) -> np.ndarray:
        return perm_orders(self.perms)

    def left_row(self, i: int) -> np.ndarray:
        """``[i*j for j in G]``."""
        row = self._left.get(i)
        if row is None:
            if self._dense is not None:
                row = self._dense[i]
            else:
                row = self._index.find(self.perms[:, self.perms[i]])
            self._left[i] = row
        return row

    def right_row(self, j: int) -> np.ndarray:
        """``[i*j for i in G]``."""
        row = self._right.get(j)
        if row is None:
            if self._dense is not None:
                row = self._dense[:, j]
            else:
                row = self._index.find(self.perms[j][self.perms])
            self._right[j] = row
        return row

    def mul(self, i: int, j: int) -> int:
        return int(self.left_row(i)[j])

    def dense_table(self, cap: int = 4000) -> np.ndarray:
        """Full multiplication table, refused above ``cap`` elements."""
        if self._dense is None:
            if len(self) > cap:
                raise GroupOverflowError(f"dense table refused for order {len(self)} > {cap}")
            dt = _dtype_for(len(self))
            self._dense = np.stack([self.left_row(i) for i in range(len(self))]).astype(dt)
        return self._dense

    def conj_map(self, g: int) -> np.ndarray:
        """``x -> g^-1 x g`` on indices."""
        return self.right_row(g)[self.left_row(int(self.inv[g]))]

    def generated_by(self, seeds: Sequence[int]) -> np.ndarray:
        """Sorted indices of the subgroup generated by ``seeds``."""
        rows = [self.right_row(s) for s in seeds]
        member = np.zeros(len(self), dtype=bool)
        member[0] = True
        frontier = np.array([0])
        while frontier.size:
            new = np.unique(np.concatenate([r[frontier] for r in rows])) if rows else np.array([], int)
            new = new[~member[new]]
            member[new] = True
            frontier = new
        return np.flatnonzero(member)


def enumerate_group(generators: Sequence[Permutation], cap: int = 10**6,
                    degree: int | None = None) -> GroupTable:
    """Closure of ``generators`` by breadth-first search.

    Generators are sorted by image tuple first, so the element order is a
    function of the generating set only.  No generators means the trivial
    group, whose degree must then be given.
    """
    if not generators:
        if degree is None:
            raise ValueError("trivial group needs an explicit degree")
        return GroupTable(np.arange(degree)[None, :])
    n = generators[0].degree
    if any(g.degree != n for g in generators):
        raise ValueError("generators have different degrees")
    gens = sorted(set(generators), key=lambda p: p.images)
    dt = _dtype_for(n)
    gen_arr = np.array([g.images for g in gens], dtype=dt)
    ident = np.arange(n, dtype=dt)[None, :]
    int_codes = n ** n < 2**62
    weights = np.array([n**i for i in range(n)], dtype=np.int64) if int_codes else None

    def keys(rows):
        if int_codes:
            return (rows.astype(np.int64) @ weights).tolist()
        return [r.tobytes() for r in np.ascontiguousarray(rows)]

    seen = set(keys(ident))
    chunks = [ident]
    frontier = ident
    total = 1
    while frontier.shape[0]:
        # products element-major, generator-minor: r[i] = g[f[i]]
        prods = gen_arr[:, frontier].transpose(1, 0, 2).reshape(-1, n)
        fresh = []
        for row, key in zip(prods, keys(prods)):
            if key not in seen:
                seen.add(key)
                fresh.append(row)
        if not fresh:
            break
        total += len(fresh)
        if total > cap:
            raise GroupOverflowError(f"group order exceeds cap {cap}")
        frontier = np.array(fresh, dtype=dt)
        chunks.append(frontier)
    perms = np.concatenate(chunks)
    table = GroupTable(perms)
    table.generator_indices = [table.index_of(g) for g in gens]
    return table


def subgroup_order(g: GroupTable, seeds: Sequence[int]) -> int:
    return int(g.generated_by(seeds).size)


@dataclass(frozen=True)
class ConjugacyClassSet:
    members: tuple[tuple[int, ...], ...]
    class_of: np.ndarray

    @property
    def class_reps(self) -> list[int]:
        return [m[0] for m in self.members]

    @property
    def class_sizes(self) -> list[int]:
        return [len(m) for m in self.members]

    def __len__(self) -> int:
        return len(self.members)


def conjugacy_classes(g: GroupTable) -> ConjugacyClassSet:
    """Classes ordered by smallest member; the rep is that member."""
    gens = g.generator_indices or list(range(1, len(g)))
    maps = [g.conj_map(s) for s in gens]
    cls = -np.ones(len(g), dtype=np.int64)
    out = []
    for start in range(len(g)):
        if cls[start] >= 0:
            continue
        member = np.zeros(len(g), dtype=bool)
        member[start] = True
        frontier = np.array([start])
        while frontier.size:
            new = np.unique(np.concatenate([m[frontier] for m in maps]))
            new = new[~member[new]]
            member[new] = True
            frontier = new
        idx = np.flatnonzero(member)
        cls[idx] = len(out)
        out.append(tuple(idx.tolist()))
    return ConjugacyClassSet(tuple(out), cls)


def centralizer(g: GroupTable, x: int) -> np.ndarray:
    return np.flatnonzero(g.left_row(x) == g.right_row(x))


def class_product_coverage(g: GroupTable, c1: int, c2: int,
                           classes: ConjugacyClassSet | None = None) -> set[int]:
    """Ids of the classes met by products ``a*b`` with a in class c1, b in class c2."""
    classes = classes if classes is not None else conjugacy_classes(g)
    second = np.array(classes.members[c2])
    hit: set[int] = set()
    for a in classes.members[c1]:
        hit.update(np.unique(classes.class_of[g.left_row(a)[second]]).tolist())
    return hit


def is_invariable_pair(g: GroupTable, x: int, y: int) -> bool:
    """True iff <x, y^h> = G for every h in G.

    Conjugating both generators by the same element preserves generation,
    so only the class of ``y`` needs to be walked.
    """
    classes = conjugacy_classes(g)
    ycls = classes.members[classes.class_of[y]]
    return all(subgroup_order(g, [x, z]) == len(g) for z in ycls)
