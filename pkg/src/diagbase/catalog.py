"""Small simple groups with their automorphism groups acting on elements.

A catalog entry lists generators of T in some natural permutation
representation plus permutations of the same points that normalize T and
induce the outer automorphisms.  Since every catalog representation has
trivial centralizer in the symmetric group, the group generated by both
lists is Aut(T), and conjugation turns each of its elements into a
permutation of T's element indices.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import factorial, gcd, prod
from pathlib import Path

import numpy as np

from .perm import GroupTable, Permutation, conjugacy_classes, enumerate_group
from .report import BoundReport, compare_exact

CATALOG_ENV = "DIAGBASE_CATALOG_DIR"
BUILTIN_DIR = Path(__file__).resolve().parent / "data"


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    degree: int
    order: int
    out_order: int
    t_generators: list[Permutation] = field(hash=False)
    aut_outer_reps: list[Permutation] = field(hash=False)


def emit_entry(e: CatalogEntry) -> str:
    lines = [f"name {e.name}", f"degree {e.degree}", f"order {e.order}", f"out {e.out_order}"]
    lines += ["p " + " ".join(map(str, g.images)) for g in e.t_generators]
    lines += ["o " + " ".join(map(str, g.images)) for g in e.aut_outer_reps]
    return "\n".join(lines) + "\n"


def load_spec(text: str, check: bool = True) -> CatalogEntry:
    """Parse one catalog record; ``check`` also validates it by enumeration."""
    entries = load_specs(text, check=check)
    if len(entries) != 1:
        raise CatalogError(f"expected one record, found {len(entries)}")
    return entries[0]


def load_specs(text: str, check: bool = True) -> list[CatalogEntry]:
    records: list[dict] = []
    cur: dict | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        if key == "name":
            cur = {"name": rest.strip(), "p": [], "o": [], "line": lineno}
            records.append(cur)
            continue
        if cur is None:
            raise CatalogError(f"line {lineno}: record must start with 'name'")
        if key in ("degree", "order", "out"):
            try:
                cur[key] = int(rest)
            except ValueError:
                raise CatalogError(f"line {lineno}: bad integer in {line!r}") from None
        elif key in ("p", "o"):
            try:
                imgs = tuple(int(x) for x in rest.split())
                perm = Permutation(imgs)
            except ValueError:
                raise CatalogError(f"line {lineno}: malformed permutation {line!r}") from None
            if "degree" in cur and perm.degree != cur["degree"]:
                raise CatalogError(f"line {lineno}: permutation has degree {perm.degree}, expected {cur['degree']}")
            cur[key].append(perm)
        else:
            raise CatalogError(f"line {lineno}: unknown key {key!r}")
    out = []
    for rec in records:
        missing = [k for k in ("degree", "order", "out") if k not in rec]
        if missing or not rec["p"]:
            raise CatalogError(f"line {rec['line']}: incomplete record {rec['name']!r} (missing {missing or 'generators'})")
        entry = CatalogEntry(rec["name"], rec["degree"], rec["order"], rec["out"], rec["p"], rec["o"])
        if check:
            validate_entry(entry)
        out.append(entry)
    return out


def validate_entry(e: CatalogEntry, check_simple: bool = False) -> GroupTable:
    t = enumerate_group(e.t_generators, cap=e.order)
    if len(t) != e.order:
        raise CatalogError(f"{e.name}: generators give order {len(t)}, declared {e.order}")
    for o in e.aut_outer_reps:
        oi = o.inverse()
        for g in e.t_generators:
            if t.find(np.array((oi * g * o).images))[0] < 0:
                raise CatalogError(f"{e.name}: outer rep {o.images} does not normalize T")
    if check_simple and not is_simple(t):
        raise CatalogError(f"{e.name}: group is not simple")
    return t


def is_simple(t: GroupTable) -> bool:
    """Every non-identity class normally generates the whole group."""
    classes = conjugacy_classes(t)
    for members in classes.members[1:]:
        if len(t.generated_by(list(members[:4]))) == len(t):
            continue
        if len(t.generated_by(list(members))) != len(t):
            return False
    return True


def catalog_dir() -> Path:
    return Path(os.environ.get(CATALOG_ENV, BUILTIN_DIR))


def list_catalog(directory: Path | None = None) -> list[str]:
    d = directory or catalog_dir()
    names = []
    for path in sorted(d.glob("*.txt")):
        names += [e.name for e in load_specs(path.read_text(), check=False)]
    return names


def get_spec(name: str, directory: Path | None = None, check: bool = True) -> CatalogEntry:
    path = Path(name)
    if path.suffix == ".txt" and path.exists():
        return load_spec(path.read_text(), check=check)
    d = directory or catalog_dir()
    for p in sorted(d.glob("*.txt")):
        for e in load_specs(p.read_text(), check=False):
            if e.name == name:
                if check:
                    validate_entry(e)
                return e
    raise CatalogError(f"group {name!r} not found in {d}")


class AutAction:
    """T with Aut(T) realized as permutations of T's element indices.

    ``aut_natural`` and ``aut_table`` share indices: automorphism i acts on
    the natural points as ``aut_natural.element(i)`` and sends element t to
    its conjugate under that permutation.
    """

    def __init__(self, spec: CatalogEntry):
        self.spec = spec
        self.name = spec.name
        self.t_table = enumerate_group(spec.t_generators, cap=spec.order)
        if len(self.t_table) != spec.order:
            raise CatalogError(f"{spec.name}: order mismatch")
        self.aut_natural = enumerate_group(list(spec.t_generators) + list(spec.aut_outer_reps),
                                           cap=spec.order * spec.out_order)
        if len(self.aut_natural) != spec.order * spec.out_order:
            raise CatalogError(f"{spec.name}: automorphism group has order {len(self.aut_natural)}")
        tp = self.t_table.perms
        rows = []
        for a in self.aut_natural.perms:
            ainv = np.argsort(a)
            rows.append(self.t_table.find(a[tp[:, ainv]]))
        aut_perms = np.array(rows)
        if (aut_perms < 0).any():
            raise CatalogError(f"{spec.name}: an outer rep does not normalize T")
        self.aut_table = GroupTable(aut_perms, self.aut_natural.generator_indices)
        self.A = self.aut_table.perms
        self.inn_flags = self.t_table.find(self.aut_natural.perms) >= 0
        # automorphism index of conjugation by t
        self.inner = self.aut_natural.find(tp)
        self.out_order = spec.out_order

    @property
    def order(self) -> int:
        return len(self.t_table)

    @property
    def aut_order(self) -> int:
        return len(self.aut_table)

    @property
    def hol_order(self) -> int:
        return self.order * self.aut_order

    @cached_property
    def t_orders(self) -> np.ndarray:
        return self.t_table.orders

    @cached_property
    def aut_orders(self) -> np.ndarray:
        return self.aut_natural.orders

    @cached_property
    def t_inv(self) -> np.ndarray:
        return self.t_table.inv

    @cached_property
    def aut_inv(self) -> np.ndarray:
        return self.aut_natural.inv

    def aut_mul(self, a: int, b: int) -> int:
        return self.aut_natural.mul(a, b)

    def mul_table(self) -> np.ndarray:
        return self.t_table.dense_table(cap=max(4000, self.order))

    @cached_property
    def out_label(self) -> np.ndarray:
        """Coset id of each automorphism in Aut/Inn, numbered by first member."""
        lab = -np.ones(self.aut_order, dtype=np.int64)
        inn = np.flatnonzero(self.inn_flags)
        nxt = 0
        for a in range(self.aut_order):
            if lab[a] < 0:
                lab[self.aut_natural.left_row(a)[inn]] = nxt
                nxt += 1
        if nxt != self.out_order:
            raise CatalogError(f"{self.name}: found {nxt} Inn-cosets, declared {self.out_order}")
        return lab

    @cached_property
    def out_reps(self) -> list[int]:
        lab = self.out_label
        return [int(np.flatnonzero(lab == c)[0]) for c in range(self.out_order)]

    def out_mul(self, c: int, d: int) -> int:
        return int(self.out_label[self.aut_mul(self.out_reps[c], self.out_reps[d])])

    @cached_property
    def out_element_orders(self) -> list[int]:
        orders = []
        for c in range(self.out_order):
            x, n = c, 1
            while x != 0:
                x, n = self.out_mul(x, c), n + 1
            orders.append(n)
        return orders

    @cached_property
    def out_subgroups(self) -> list[tuple[int, ...]]:
        """All subgroups of Out(T), as sorted tuples of coset ids."""
        def close(seeds):
            got = {0} | set(seeds)
            while True:
                new = {self.out_mul(a, b) for a in got for b in got} - got
                if not new:
                    return tuple(sorted(got))
                got |= new
        subs = {close(())}
        elems = range(1, self.out_order)
        for a in elems:
            subs.add(close((a,)))
            for b in elems:
                subs.add(close((a, b)))
        return sorted(subs, key=lambda s: (len(s), s))

    def k_mask(self, out_subgroup: tuple[int, ...] | None = None) -> np.ndarray:
        """Membership mask of K = Inn(T).O inside Aut(T); None means O = Out(T)."""
        if out_subgroup is None:
            return np.ones(self.aut_order, dtype=bool)
        return np.isin(self.out_label, list(out_subgroup))

    def parse_out(self, selector: str | None) -> tuple[int, ...]:
        """Out-subgroup selector: 'full', '1', or comma-separated coset ids."""
        if selector in (None, "full", "Out", "out"):
            return tuple(range(self.out_order))
        if selector in ("1", "trivial", "none"):
            return (0,)
        ids = tuple(sorted({0} | {int(x) for x in selector.split(",")}))
        if ids not in self.out_subgroups:
            raise CatalogError(f"{selector!r} does not name a subgroup of Out({self.name}); "
                               f"choices: {self.out_subgroups}")
        return ids

    def element_label(self, t: int) -> str:
        return self.t_table.element(int(t)).cycle_string()

    def check_multiplicative(self, pairs: int | None = None, seed: int = 0) -> bool:
        """(st)^a = s^a t^a for every automorphism; all pairs or a random sample."""
        n = self.order
        if pairs is None:
            ss, tt = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
            ss, tt = ss.ravel(), tt.ravel()
        else:
            rng = np.random.default_rng(seed)
            ss, tt = rng.integers(0, n, pairs), rng.integers(0, n, pairs)
        prods = np.array([self.t_table.mul(int(s), int(t)) for s, t in zip(ss, tt)])
        for a in self.A:
            lhs = a[prods]
            rhs = np.array([self.t_table.mul(int(x), int(y)) for x, y in zip(a[ss], a[tt])])
            if not (lhs == rhs).all():
                return False
        return True


@lru_cache(maxsize=None)
def aut_action(name: str) -> AutAction:
    """Cached AutAction for a catalog name or file path."""
    return AutAction(get_spec(name, check=False))


def h_exact(a: AutAction, full_scan: bool = False) -> tuple[int, int]:
    """Largest number of fixed elements of a non-identity automorphism.

    Only prime-order automorphisms are scanned unless ``full_scan``; a
    power of any automorphism of prime order fixes at least as much.
    Returns (value, lowest witness index).
    """
    ords = a.aut_orders
    cand = np.arange(1, a.aut_order)
    if not full_scan:
        cand = cand[[_is_prime(int(o)) for o in ords[cand]]]
    fixed = (a.A[cand] == np.arange(a.order)).sum(axis=1)
    best = int(fixed.max())
    return best, int(cand[np.flatnonzero(fixed == best)[0]])


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % p for p in range(2, int(n**0.5) + 1))


def out_bound_check(a: AutAction) -> BoundReport:
    return compare_exact("out_cubed", a.order, a.out_order**3,
                         parameters={"group": a.name, "T": a.order, "out": a.out_order},
                         citations=["|Out(T)|^3 < |T| for non-abelian simple T"])


# ---------------------------------------------------------------- formulas

SPORADIC_H = {
    "M11": 48, "M12": 240, "M22": 1344, "M23": 2688, "M24": 21504,
    "J1": 120, "J2": 1920, "J3": 2448, "J4": 21799895040,
    "HS": 40320, "McL": 40320, "Suz": 9797760, "He": 161280,
    "HN": 177408000, "Ru": 245760, "Ly": 2694384000,
    "Co1": 1345036492800, "Co2": 743178240, "Co3": 2903040,
    "Th": 92897280, "O'N": 175560, "Fi22": 18393661440,
    "Fi23": 129123503308800, "Fi24'": 4089470473293004800,
    "B": 306129918735099415756800,
    "M": 8309562962452852382355161088000000,
}


def _prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise CatalogError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    f, r = 0, q
    while r % p == 0:
        r //= p
        f += 1
    if r != 1:
        raise CatalogError(f"{q} is not a prime power")
    return p, f


def _isqrt_exact(q: int) -> int:
    r = int(round(q**0.5))
    while r * r > q:
        r -= 1
    while (r + 1) ** 2 <= q:
        r += 1
    if r * r != q:
        raise CatalogError(f"{q} is not a square")
    return r


def gl_order(n: int, q: int, eps: int = 1) -> int:
    """|GL_n(q)| for eps=+1, |GU_n(q)| for eps=-1."""
    return q ** (n * (n - 1) // 2) * prod(q**i - eps**i for i in range(1, n + 1))


def sl_order(n: int, q: int, eps: int = 1) -> int:
    return gl_order(n, q, eps) // (q - eps)


def sp_order(n: int, q: int) -> int:
    m = n // 2
    return q ** (m * m) * prod(q ** (2 * i) - 1 for i in range(1, m + 1))


def so_even_order(m: int, q: int, eps: int) -> int:
    """|SO^eps_{2m}(q)|, the determinant-one subgroup (all of GO when q is even)."""
    return gcd(2, q) * q ** (m * (m - 1)) * (q**m - eps) * prod(q ** (2 * i) - 1 for i in range(1, m))


def omega_odd_order(m: int, q: int) -> int:
    """|Omega_{2m+1}(q)| for odd q."""
    return q ** (m * m) * prod(q ** (2 * i) - 1 for i in range(1, m + 1)) // 2


def pgl2_order(q: int) -> int:
    return q * (q * q - 1)


def e7_simple_order(q: int) -> int:
    return q**63 * prod(q**d - 1 for d in (2, 6, 8, 10, 12, 14, 18)) // gcd(2, q - 1)


def suzuki_order(q: int) -> int:
    return q * q * (q * q + 1) * (q - 1)


def h_formula(family: str, *params: int) -> int:
    """Fixity of Hol(T) on T from its closed form.

    Families: 'A' (n), 'L' (n, q, eps) with eps=-1 for unitary groups,
    'S' (n, q) symplectic, 'O' (n, q, eps) orthogonal (eps ignored for odd n),
    exceptional names 'E8','E7','E6','2E6','F4','G2','3D4','2F4','2G2','2B2'
    (q), '2F4(2)'' and sporadic names.
    """
    if family in SPORADIC_H:
        return SPORADIC_H[family]
    if family == "2F4(2)'":
        return 10240
    if family == "A":
        (n,) = params
        if n < 5:
            raise CatalogError("A_n needs n >= 5")
        return factorial(n - 2)
    if family == "L":
        n, q, *rest = params
        eps = rest[0] if rest else 1
        return _h_linear(n, q, eps)
    if family == "S":
        n, q = params
        _prime_power(q)
        if n % 2 or n < 4 or (n, q) == (4, 2):
            raise CatalogError(f"PSp_{n}({q}) is not a simple group of this row")
        if n == 4 and q % 2:
            return sp_order(2, q * q)
        return q ** (n - 1) * sp_order(n - 2, q)
    if family == "O":
        n, q, *rest = params
        _prime_power(q)
        if n < 7:
            raise CatalogError("orthogonal rows need n >= 7")
        if n % 2:
            if q % 2 == 0:
                raise CatalogError("odd-dimensional orthogonal groups need odd q")
            return so_even_order((n - 1) // 2, q, -1)
        if q % 2 == 0:
            return sp_order(n - 2, q)
        return omega_odd_order((n - 2) // 2, q)
    (q,) = params
    p, f = _prime_power(q)
    if family == "E8":
        return q**57 * e7_simple_order(q) * gcd(2, q - 1)
    if family == "E7":
        return q**33 * so_even_order(6, q, 1) // gcd(2, q)
    if family in ("E6", "2E6"):
        eps = 1 if family == "E6" else -1
        return q**21 * sl_order(6, q, eps) // gcd(3, q - eps)
    if family == "F4":
        return q**15 * sp_order(6, q)
    if family == "G2":
        return q**5 * sl_order(2, q)
    if family == "3D4":
        return q**12 * (q**6 - 1)
    if family == "2F4":
        if p != 2 or f % 2 == 0 or q == 2:
            raise CatalogError("2F4(q) needs q = 2^(2a+1) > 2")
        return q**10 * suzuki_order(q)
    if family == "2G2":
        if p != 3 or f % 2 == 0 or q == 3:
            raise CatalogError("2G2(q) needs q = 3^(2a+1) > 3")
        return q**3
    if family == "2B2":
        if p != 2 or f % 2 == 0 or q == 2:
            raise CatalogError("2B2(q) needs q = 2^(2a+1) > 2")
        return q**2
    raise CatalogError(f"unknown family {family!r}")


def _h_linear(n: int, q: int, eps: int) -> int:
    p, f = _prime_power(q)
    if n == 2:
        if eps != 1:
            raise CatalogError("use eps=+1 for L_2(q)")
        if q < 4:
            raise CatalogError("L_2(q) needs q >= 4")
        if f % 2 == 0:
            return pgl2_order(_isqrt_exact(q))
        return q + 1
    if (n, q, eps) == (3, 2, -1):
        raise CatalogError("U_3(2) is not simple")
    if n == 3 and eps == 1 and f % 2 == 0:
        r = _isqrt_exact(q)
        if (r + 1) % 3 == 0:
            return r**3 * (r * r - 1) * (r**3 - 1)
        return r**3 * (r * r - 1) * (r**3 + 1)
    if n == 4:
        pgsp4 = q**4 * (q * q - 1) * (q**4 - 1)
        return gcd(2, q - eps) * pgsp4 // gcd(4, q - eps)
    if n >= 6 and n % 2 == 0 and eps == -1:
        return gl_order(n - 1, q, -1) // gcd(n, q + 1)
    return q ** (2 * n - 3) * gl_order(n - 2, q, eps) // gcd(n, q - eps)


_NAME_RE = [
    (re.compile(r"^A(\d+)$"), lambda m: ("A", int(m[1]))),
    (re.compile(r"^L(\d+)\((\d+)\)$"), lambda m: ("L", int(m[1]), int(m[2]))),
    (re.compile(r"^U(\d+)\((\d+)\)$"), lambda m: ("L", int(m[1]), int(m[2]), -1)),
    (re.compile(r"^S(\d+)\((\d+)\)$"), lambda m: ("S", int(m[1]), int(m[2]))),
]


def family_of(name: str) -> tuple:
    """Family tuple for h_formula from a catalog name like 'A5' or 'L2(7)'."""
    if name in SPORADIC_H:
        return (name,)
    for rx, conv in _NAME_RE:
        m = rx.match(name)
        if m:
            return conv(m)
    raise CatalogError(f"no formula row known for {name!r}")


def h_for_name(name: str) -> int:
    return h_formula(*family_of(name))
