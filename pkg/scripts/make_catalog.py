"""Regenerate the built-in catalog files under src/diagbase/data/.

PSL(2,q) groups act on the projective line; points 0..q-1 are field
elements in the table order below and point q is infinity.  Every entry
is re-checked by enumeration before it is written.
"""
from __future__ import annotations

import sys
from pathlib import Path

from diagbase.catalog import CatalogEntry, emit_entry, validate_entry
from diagbase.perm import Permutation

DATA = Path(__file__).resolve().parents[1] / "src" / "diagbase" / "data"


class Field:
    """GF(p^f) with f <= 2 or (p, f) = (2, 3), elements as coefficient tuples."""

    def __init__(self, p: int, f: int, modulus: tuple[int, ...]):
        self.p, self.f, self.q = p, f, p**f
        self.modulus = modulus  # monic, low degree first, without the leading 1
        self.elems = [self._from_int(i) for i in range(self.q)]
        self.index = {e: i for i, e in enumerate(self.elems)}

    def _from_int(self, i):
        out = []
        for _ in range(self.f):
            out.append(i % self.p)
            i //= self.p
        return tuple(out)

    def add(self, a, b):
        return self.index[tuple((x + y) % self.p for x, y in zip(self.elems[a], self.elems[b]))]

    def neg(self, a):
        return self.index[tuple((-x) % self.p for x in self.elems[a])]

    def mul(self, a, b):
        x, y = self.elems[a], self.elems[b]
        prod = [0] * (2 * self.f - 1)
        for i, u in enumerate(x):
            for j, v in enumerate(y):
                prod[i + j] += u * v
        for d in range(len(prod) - 1, self.f - 1, -1):
            c = prod[d]
            prod[d] = 0
            for i, m in enumerate(self.modulus):
                prod[d - self.f + i] -= c * m
        return self.index[tuple(c % self.p for c in prod[: self.f])]

    def inv(self, a):
        return next(b for b in range(1, self.q) if self.mul(a, b) == 1)

    def power(self, a, e):
        r = 1
        for _ in range(e):
            r = self.mul(r, a)
        return r

    def primitive(self):
        for a in range(1, self.q):
            if len({self.power(a, e) for e in range(1, self.q)}) == self.q - 1:
                return a
        raise ValueError


def mobius(field: Field, fn) -> Permutation:
    inf = field.q
    return Permutation(tuple(fn(x) for x in range(field.q)) + (fn(inf),))


def psl2(field: Field) -> tuple[list[Permutation], list[Permutation]]:
    q, inf = field.q, field.q
    w = field.primitive()
    w2 = field.mul(w, w)
    one = 1
    shift = mobius(field, lambda x: inf if x == inf else field.add(x, one))
    scale = mobius(field, lambda x: inf if x == inf else field.mul(w2, x))
    flip = mobius(field, lambda x: 0 if x == inf else inf if x == 0 else field.neg(field.inv(x)))
    outer = []
    if q % 2 == 1:
        outer.append(mobius(field, lambda x: inf if x == inf else field.mul(w, x)))
    if field.f > 1:
        outer.append(mobius(field, lambda x: inf if x == inf else field.power(x, field.p)))
    return [shift, scale, flip], outer


def cyc(n, *cycles):
    return Permutation.from_cycles(cycles, n)


def build() -> list[CatalogEntry]:
    entries = [
        CatalogEntry("A5", 5, 60, 2, [cyc(5, (0, 1, 2, 3, 4)), cyc(5, (0, 1, 2))], [cyc(5, (0, 1))]),
        CatalogEntry("A7", 7, 2520, 2, [cyc(7, tuple(range(7))), cyc(7, (0, 1, 2))], [cyc(7, (0, 1))]),
        CatalogEntry("M11", 11, 7920, 1, [cyc(11, tuple(range(11))), cyc(11, (2, 6, 10, 7), (3, 9, 4, 5))], []),
    ]
    fields = {
        "A6": (Field(3, 2, (1, 0)), 360, 4),     # PSL(2,9), x^2 + 1
        "L2(7)": (Field(7, 1, (0,)), 168, 2),
        "L2(8)": (Field(2, 3, (1, 1, 0)), 504, 3),  # x^3 + x + 1
        "L2(11)": (Field(11, 1, (0,)), 660, 2),
        "L2(13)": (Field(13, 1, (0,)), 1092, 2),
    }
    for name, (field, order, out) in fields.items():
        gens, outer = psl2(field)
        entries.append(CatalogEntry(name, field.q + 1, order, out, gens, outer))
    return entries


def main() -> int:
    DATA.mkdir(parents=True, exist_ok=True)
    for entry in build():
        validate_entry(entry, check_simple=True)
        path = DATA / f"{entry.name}.txt"
        path.write_text(emit_entry(entry))
        print(f"wrote {path.name}: degree {entry.degree}, order {entry.order}, out {entry.out_order}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
