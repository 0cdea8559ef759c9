"""Counting formulas and inequality checks with sound verdicts.

Binomials and factorials are exact Python integers.  Anything involving e,
pi, logarithms or fractional powers is evaluated as an mpmath interval, and
a verdict is only "holds" or "fails" when the two enclosures are separated.
Ranges written as ``k <= c*log2|T|`` are checked exactly as ``2**k <= |T|**c``,
which for integer k is the same as taking the floor.
"""
from __future__ import annotations

import contextlib
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

import numpy as np
from mpmath import iv
from mpmath.libmp import to_str

from .catalog import AutAction, h_exact
from .perm import conjugacy_classes
from .report import BoundReport, compare_exact

DEFAULT_PREC = 256
INTERVAL_NOTE = "outward-rounded intervals at {prec} bits; verdict needs disjoint enclosures"
A5A6_ORDERS = (60, 360)


class RangeError(ValueError):
    pass


@dataclass(frozen=True)
class CycleShape:
    """m cycles of prime length r plus ``fixed`` fixed points."""
    r: int
    m: int
    fixed: int

    def __post_init__(self):
        if self.r < 2 or self.m < 0 or self.fixed < 0:
            raise ValueError(f"bad cycle shape {self}")

    @property
    def degree(self) -> int:
        return self.r * self.m + self.fixed


def fix_count(shape: CycleShape, k: int) -> int:
    """k-subsets left invariant by a permutation of this shape."""
    return sum(comb(shape.m, u) * comb(shape.fixed, k - shape.r * u)
               for u in range(max(k, 0) // shape.r + 1))


def fix_upper(r: int, n: int, h: int, k: int) -> int:
    """Shape-free upper bound for prime order r on n points with at most h fixed."""
    return sum(comb(n // r, u) * comb(h, k - r * u) for u in range(max(k, 0) // r + 1))


# ---------------------------------------------------------------- intervals

@contextlib.contextmanager
def _precision(prec: int):
    old = iv.prec
    iv.prec = prec
    try:
        yield
    finally:
        iv.prec = old


def _iv_verdict(lhs, rhs) -> str:
    """Verdict for ``lhs > rhs`` from two enclosures."""
    if lhs.a > rhs.b:
        return "holds"
    if lhs.b <= rhs.a:
        return "fails"
    return "inconclusive"


def _show(x) -> str:
    # display only; verdicts use the full enclosures
    lo, hi = x._mpi_
    return f"[{to_str(lo, 20)}, {to_str(hi, 20)}]"


def _iv_report(name, lhs, rhs, prec, parameters, citations, extra_note="") -> BoundReport:
    note = INTERVAL_NOTE.format(prec=prec) + extra_note
    return BoundReport(name, _show(lhs), _show(rhs), _iv_verdict(lhs, rhs), note,
                       parameters, citations)


def in_log_range(order: int, k: int, c: int = 4, low: int = 5) -> bool:
    """low <= k <= c*log2|T|."""
    return low <= k and 2**k <= order**c


def log_range_max(order: int, c: int = 4) -> int:
    """Largest k with k <= c*log2|T|."""
    return (order**c).bit_length() - 1


def _require_log_range(order: int, k: int):
    if not in_log_range(order, k):
        raise RangeError(f"k={k} outside 5 <= k <= 4*log2|T| = {log_range_max(order)} "
                         f"(floor taken) for |T|={order}")


# ---------------------------------------------------------------- census

@dataclass
class HolCensus:
    """Prime-order elements of Hol(T) grouped by (prime, fixed points on T)."""
    group: str
    order: int
    shapes: dict[tuple[int, int], int]
    method: str

    @property
    def element_count(self) -> int:
        return sum(self.shapes.values())

    def cycle_shapes(self) -> list[tuple[CycleShape, int]]:
        return [(CycleShape(r, (self.order - f) // r, f), c) for (r, f), c in sorted(self.shapes.items())]

    def fix_sum(self, k: int) -> int:
        """Sum over prime-order sigma of the number of k-subsets fixed by sigma."""
        return sum(c * fix_count(s, k) for s, c in self.cycle_shapes())


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % p for p in range(2, int(n**0.5) + 1))


def census_work(a: AutAction) -> int:
    classes = conjugacy_classes(a.aut_table)
    ords = a.aut_orders
    return sum(a.order**2 for r in classes.class_reps if _is_prime(int(ords[r])))


def hol_prime_census(a: AutAction, cap: int = 5 * 10**7, chunk: int = 256) -> HolCensus:
    """Census via Aut-class representatives.

    The image of a prime-order (g, alpha) in Aut(T) has order 1 or r, and
    conjugating by Aut(T) preserves the cycle shape, so it is enough to pair
    each class representative alpha with every g and weight by class size.
    """
    from .perm import GroupOverflowError
    n = a.order
    work = census_work(a)
    if work > cap:
        raise GroupOverflowError(f"census work {work} exceeds cap {cap}")
    shapes: Counter = Counter()
    for g in range(1, n):
        r = int(a.t_orders[g])
        if _is_prime(r):
            shapes[(r, 0)] += 1
    classes = conjugacy_classes(a.aut_table)
    ords = a.aut_orders
    ident = np.arange(n)
    tinv = a.t_inv
    for rep, size in zip(classes.class_reps, classes.class_sizes):
        r = int(ords[rep])
        if not _is_prime(r):
            continue
        alpha = a.A[rep]
        for lo in range(0, n, chunk):
            gs = range(lo, min(n, lo + chunk))
            sig = np.stack([alpha[a.t_table.left_row(int(tinv[g]))] for g in gs])
            p = sig
            for _ in range(r - 1):
                p = np.take_along_axis(sig, p, axis=1)
            good = (p == ident).all(axis=1)
            fixed = (sig[good] == ident).sum(axis=1)
            for f, c in zip(*np.unique(fixed, return_counts=True)):
                shapes[(r, int(f))] += int(c) * size
    return HolCensus(a.name, n, dict(shapes), "aut_classes")


def brute_hol_census(a: AutAction, cap: int = 10**6) -> HolCensus:
    """Census by listing every element of Hol(T); the oracle for hol_prime_census."""
    from .perm import GroupOverflowError, perm_orders
    n = a.order
    if a.hol_order > cap:
        raise GroupOverflowError(f"|Hol| = {a.hol_order} exceeds cap {cap}")
    left_inv = np.stack([a.t_table.left_row(int(a.t_inv[g])) for g in range(n)])
    ident = np.arange(n)
    shapes: Counter = Counter()
    for alpha in a.A:
        sig = alpha[left_inv]
        ords = perm_orders(sig)
        for row, o in zip(sig, ords):
            if _is_prime(int(o)):
                shapes[(int(o), int((row == ident).sum()))] += 1
    return HolCensus(a.name, n, dict(shapes), "brute")


def brute_fix_sum(a: AutAction, k: int, cap: int = 4 * 10**9) -> int:
    """Sum of |fix(sigma, k-subsets)| over prime-order sigma by direct subset testing."""
    from itertools import combinations
    from .perm import GroupOverflowError, perm_orders
    n = a.order
    if n > 62:
        raise GroupOverflowError("subset bitmasks need |T| <= 62")
    if k < 1:
        raise ValueError("k >= 1 required")
    left_inv = np.stack([a.t_table.left_row(int(a.t_inv[g])) for g in range(n)])
    prime_rows = []
    for alpha in a.A:
        sig = alpha[left_inv]
        prime_rows.append(sig[[_is_prime(int(o)) for o in perm_orders(sig)]])
    sigmas = np.concatenate(prime_rows)
    if comb(n, k) * len(sigmas) * max(k, 1) > cap:
        raise GroupOverflowError("direct fixed-subset count exceeds cap")
    subsets = np.array(list(combinations(range(n), k)), dtype=np.int64).reshape(-1, k)
    bit = np.left_shift(np.int64(1), np.arange(n, dtype=np.int64))
    masks = np.bitwise_or.reduce(bit[subsets], axis=1)
    total = 0
    for row in sigmas:
        img = np.bitwise_or.reduce(bit[row[subsets]], axis=1)
        total += int((img == masks).sum())
    return total


_CENSUS_CACHE: dict[str, HolCensus] = {}


def _census_or_none(a: AutAction, cap: int) -> HolCensus | None:
    from .perm import GroupOverflowError
    if a.name in _CENSUS_CACHE:
        return _CENSUS_CACHE[a.name]
    try:
        c = hol_prime_census(a, cap=cap)
    except GroupOverflowError:
        return None
    _CENSUS_CACHE[a.name] = c
    return c


def _fix_sum_fallback(a: AutAction, k: int) -> int:
    h, _ = h_exact(a)
    primes = [p for p in range(2, a.hol_order + 1) if a.hol_order % p == 0 and _is_prime(p)] \
        if a.hol_order < 10**7 else _prime_factors(a.hol_order)
    return (a.hol_order - 1) * max(fix_upper(r, a.order, h, k) for r in primes)


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    return out + ([n] if n > 1 else [])


def _union_bound(name: str, a: AutAction, k: int, m, cap: int, citation: str) -> BoundReport:
    n = a.order
    if not 0 <= k <= n:
        raise RangeError(f"k={k} outside 0..{n}")
    m = Fraction(m)
    census = _census_or_none(a, cap)
    if census is not None:
        fsum, note = census.fix_sum(k), "exact integers; exact prime-order census"
    else:
        fsum = _fix_sum_fallback(a, k)
        note = "exact integers; census cap exceeded, sum replaced by |Hol|*max_r fix_upper"
    lhs = comb(n, k) * m.denominator
    rhs = m.numerator * fsum
    params = {"group": a.name, "T": n, "k": k, "m": str(m), "fix_sum": fsum,
              "census": census.method if census else "fallback"}
    return compare_exact(name, lhs, rhs, rounding_note=note, parameters=params,
                         citations=[citation])


def prob_ori_exact(a: AutAction, k: int, cap: int = 5 * 10**7) -> BoundReport:
    """C(|T|,k) > 2 * sum of fixed k-subsets over prime-order elements of Hol(T)."""
    return _union_bound("prob_ori", a, k, 2, cap,
                        "if this holds then Hol(T) has at least two regular orbits on k-subsets")


def qk_union_bound(a: AutAction, k: int, m, cap: int = 5 * 10**7) -> BoundReport:
    """C(|T|,k) > m * sum of fixed k-subsets; certifies Q_k(T) < 1/m when it holds."""
    rep = _union_bound("prob_ori_strong", a, k, m, cap,
                       "if this holds then the proportion of k-subsets of T minus 1 with "
                       "nontrivial Aut-stabilizer is below 1/m")
    n = a.order
    in_window = 2**k > n**5 and 2**(n - k) > n**5
    rep.parameters["certifies_aut_probability_below_1_over_T"] = bool(
        rep.holds and Fraction(m) == n and in_window)
    rep.parameters["in_5log_window"] = in_window
    return rep


# ---------------------------------------------------------------- closed-form criteria

def hol_order_of(order: int, out: int) -> int:
    return order * order * out


def prob_rhs(order: int, hol: int, h: int, k: int) -> int:
    return 2 * hol * sum(comb(order // 2, u) * comb(h, k - 2 * u) for u in range(k // 2 + 1))


def prob_check(order: int, out: int, h: int, k: int, check_range: bool = True) -> BoundReport:
    """C(|T|,k) > 2|Hol| sum_u C(|T|/2,u) C(h,k-2u), in 5 <= k <= 4log2|T|."""
    if check_range:
        _require_log_range(order, k)
    return compare_exact("prob", comb(order, k), prob_rhs(order, hol_order_of(order, out), h, k),
                         parameters={"T": order, "out": out, "h": h, "k": k,
                                     "k_max": log_range_max(order)},
                         citations=["sufficient for two regular Hol(T)-orbits on k-subsets "
                                    "when 5 <= k <= 4 log2|T| (floor)"])


def prob_u_weak(order: int, hol: int, h: int, k: int, u: int, prec: int = DEFAULT_PREC) -> BoundReport:
    """2^u u^u |T|^(k-u) > 2|Hol| floor(k/2) k^(2u) e^(k+u) h^(k-2u)."""
    if not 0 <= u <= k // 2:
        raise RangeError(f"u={u} outside 0..{k // 2}")
    lhs = 2**u * (u**u if u else 1) * order**(k - u)
    coeff = 2 * hol * (k // 2) * k**(2 * u) * h**(k - 2 * u)
    with _precision(prec):
        rep = _iv_report("prob_u_weak", iv.mpf(lhs), iv.mpf(coeff) * iv.e**(k + u), prec,
                         {"T": order, "hol": hol, "h": h, "k": k, "u": u},
                         ["all u in 0..floor(k/2) together imply the prob criterion"])
    return rep


def u_half_criterion(order: int, hol: int, h: int, k: int, k0: int,
                     prec: int = DEFAULT_PREC) -> list[BoundReport]:
    """Hypotheses of the k0 criterion dominated by the u = floor(k/2) term."""
    params = {"T": order, "hol": hol, "h": h, "k": k, "k0": k0}
    cite = ["with |T| > 4080, 5 <= k0 <= k <= 4 log2|T|, these imply the prob criterion"]
    gate = compare_exact("u_half_gate", order, 4080, parameters=params, citations=cite)
    rng = BoundReport("u_half_range", k0, k, "holds" if 5 <= k0 <= k and in_log_range(order, k)
                      else "fails", parameters=params, citations=cite)
    with _precision(prec):
        main = _iv_report("u_half_main", iv.mpf(order)**k0,
                          iv.mpf(hol)**2 * iv.mpf(k0)**(2 + k0) * iv.e**(3 * k0), prec, params, cite)
    cond = compare_exact("u_half_cond", k0 * order, h * h, parameters=params, citations=cite)
    return [gate, rng, main, cond]


def u_zero_criterion(order: int, hol: int, h: int, k: int, k0: int,
                     prec: int = DEFAULT_PREC) -> list[BoundReport]:
    """Hypotheses of the k0 criterion dominated by the u = 0 term."""
    params = {"T": order, "hol": hol, "h": h, "k": k, "k0": k0}
    cite = ["with 5 <= k0 <= k <= 4 log2|T|, these imply the prob criterion"]
    rng = BoundReport("u_zero_range", k0, k, "holds" if 5 <= k0 <= k and in_log_range(order, k)
                      else "fails", parameters=params, citations=cite)
    with _precision(prec):
        main = _iv_report("u_zero_main", iv.mpf(order)**k0,
                          iv.mpf(2 * hol * (k0 // 2)) * iv.e**k0 * iv.mpf(h)**k0, prec, params, cite)
        log2t = iv.log(order) / iv.log(2)
        cond = _iv_report("u_zero_cond", iv.mpf(2 * h * h), (4 * log2t)**2 * iv.e * order,
                          prec, params, cite)
    return [rng, main, cond]


def prob_u_criteria(order: int, hol: int, h: int, k: int, k0: int | None = None,
                    prec: int = DEFAULT_PREC) -> dict[str, list[BoundReport]]:
    """Every term-wise criterion at (k, k0): per-u terms, the u=k/2 route and the u=0 route."""
    k0 = k if k0 is None else k0
    return {
        "prob_u_weak": [prob_u_weak(order, hol, h, k, u, prec) for u in range(k // 2 + 1)],
        "u_half": u_half_criterion(order, hol, h, k, k0, prec),
        "u_zero": u_zero_criterion(order, hol, h, k, k0, prec),
    }


def all_hold(reports) -> str:
    verdicts = {r.verdict for r in reports}
    if verdicts == {"holds"}:
        return "holds"
    return "fails" if "fails" in verdicts else "inconclusive"


def alternating_check(n: int, prec: int = DEFAULT_PREC) -> BoundReport:
    """(n(n-1)/(2e))^n > n (n!)^2 / 2, the u=0 criterion for A_n at k0 = n."""
    with _precision(prec):
        lhs = (iv.mpf(n * (n - 1)) / (2 * iv.e))**n
        rhs = iv.mpf(n * factorial(n)**2) / 2
        return _iv_report("alternating_u_zero", lhs, rhs, prec, {"n": n},
                          ["A_n with n >= 30 satisfies the u=0 criterion at k0 = n"])


def q1q2(order: int, out: int, h: int, k: int, prec: int = DEFAULT_PREC,
         check_range: bool = True) -> BoundReport:
    """Q1 + Q2 < 1/2, from the fixed-point-ratio upper bounds (not the exact r-sums)."""
    if check_range:
        _require_log_range(order, k)
    delta = 1 if k == 5 else 0
    with _precision(prec):
        t = iv.mpf(order)
        third = iv.mpf(1) / 3
        kf = factorial(k)
        q1 = (iv.mpf(kf * kf) * t**(8 * third - iv.mpf(k) / 2 - iv.mpf(delta) / 2)
              + iv.mpf(kf) / t**(4 * third)
              + iv.mpf(k**4) / (2 * t**third))
        ratio = t / h
        q2 = ratio**(4 - k) + iv.mpf(comb(k, 2) * out) * ratio**(3 - k)
        total = q1 + q2
        rep = _iv_report("q1q2", iv.mpf(1) / 2, total, prec,
                         {"T": order, "out": out, "h": h, "k": k, "delta_5k": delta,
                          "q1": _show(q1), "q2": _show(q2)},
                         ["Q1 + Q2 bounds the fixed-point-ratio sums r1 + r2 + r3 from above; "
                          "Q1 + Q2 < 1/2 with 5 <= k <= 4 log2|T| gives two regular suborbits"],
                         "; inequality read as 1/2 > Q1 + Q2")
    return rep


# ---------------------------------------------------------------- binomial sandwich

def _sandwich_verdict(value: int, low, high) -> str:
    if low.b < value and high.a > value:
        return "holds"
    if low.a >= value or high.b <= value:
        return "fails"
    return "inconclusive"


def binom_sandwich(ell: int, m: int, n: int, prec: int = DEFAULT_PREC) -> BoundReport:
    """e^(-1/(8 ell)) a < C(n ell, m ell) < a for the explicit a(ell, m, n)."""
    if not (n > m >= 1 and ell >= 1):
        raise RangeError("need n > m >= 1 and ell >= 1")
    exact = comb(n * ell, m * ell)
    with _precision(prec):
        base = iv.mpf(n**n) / (iv.mpf((n - m)**(n - m)) * iv.mpf(m**m))
        a = (1 / iv.sqrt(2 * iv.pi)) / iv.sqrt(iv.mpf(ell)) \
            * iv.sqrt(iv.mpf(n) / ((n - m) * m)) * base**ell
        low = iv.exp(iv.mpf(-1) / (8 * ell)) * a
        verdict = _sandwich_verdict(exact, low, a)
        return BoundReport("binom_sandwich", exact, [_show(low), _show(a)], verdict,
                           INTERVAL_NOTE.format(prec=prec) + "; rhs lists [lower, upper] enclosures",
                           {"ell": ell, "m": m, "n": n},
                           ["two-sided bound on C(n*ell, m*ell) around an explicit a(ell,m,n)"])


def binom_corollary(t: int, n: int, prec: int = DEFAULT_PREC) -> BoundReport:
    """The ell = 1, m = n/t case, in the form bracketing sqrt(2 pi) C(n, n/t)."""
    if t < 2 or n % t:
        raise RangeError("need t >= 2 dividing n")
    m = n // t
    exact = comb(n, m)
    with _precision(prec):
        x = iv.sqrt(iv.mpf(t * t) / ((t - 1) * n)) * (iv.mpf(t**t) / iv.mpf((t - 1)**(t - 1)))**(iv.mpf(n) / t)
        low = iv.exp(iv.mpf(-1) / 8) * x
        scaled = iv.sqrt(2 * iv.pi) * exact
        if low.b < scaled.a and scaled.b < x.a:
            verdict = "holds"
        elif low.a >= scaled.b or scaled.a >= x.b:
            verdict = "fails"
        else:
            verdict = "inconclusive"
        return BoundReport("binom_corollary", _show(scaled), [_show(low), _show(x)], verdict,
                           INTERVAL_NOTE.format(prec=prec) + "; lhs is sqrt(2pi)*C(n,m)",
                           {"t": t, "n": n, "m": m, "binomial": exact},
                           ["ell = 1, m = n/t specialisation of the binomial sandwich"])


# ---------------------------------------------------------------- decision tables

def ell_of(order: int, k: int) -> int:
    """The ell with |T|^(ell-1) < k <= |T|^ell."""
    ell, p = 1, order
    while k > p:
        ell, p = ell + 1, p * order
    return ell


def _is_a5a6(order: int, t_tag: str | None) -> bool:
    if t_tag is None:
        # A5 and A6 are the only simple groups of orders 60 and 360
        return order in A5A6_ORDERS
    return t_tag in ("A5A6", "A5", "A6")


def base_size_formula(order: int, k: int, giant: bool = True, contains_sk: bool = False,
                      t_tag: str | None = None, g_full: bool = False) -> int:
    """Exact base size of a diagonal-type group from its coarse parameters.

    ``giant``: top group is A_k or S_k (always true for k = 2).
    ``contains_sk``: S_k <= G.  ``g_full``: G = T^k.(Out(T) x S_k).
    """
    if k < 2:
        raise ValueError("diagonal type needs k >= 2")
    if g_full and not contains_sk:
        raise ValueError("G_full implies S_k <= G")
    if contains_sk and not giant and k > 2:
        raise ValueError("S_k <= G forces a giant top group")
    a5a6 = _is_a5a6(order, t_tag)
    if k == 2:
        return 4 if a5a6 and g_full else 3
    if not giant:
        return 2
    ell = ell_of(order, k)
    top = order**ell
    if k == order:
        return ell + 2
    if contains_sk and k in (order - 2, top - 1, top):
        return ell + 2
    if k == order**2 - 2 and a5a6 and g_full:
        return ell + 2
    return ell + 1


def classify_r1(order: int, k: int, t_tag: str | None = None, g_full: bool = False) -> bool:
    """True iff the group has exactly one regular suborbit."""
    is_a5 = order == 60 if t_tag is None else t_tag == "A5"
    return is_a5 and k in (3, 57) and g_full


# ---------------------------------------------------------------- P/Q bridge

def pq_bridge(p_value, k: int) -> Fraction:
    """Upper bound 1 - P_{k+1} on Q_k."""
    if k < 4:
        raise RangeError("the bridge needs k >= 4")
    p = Fraction(p_value)
    if not 0 <= p <= 1:
        raise RangeError("P must lie in [0, 1]")
    return 1 - p


@dataclass
class PEstimate:
    group: str
    k: int
    samples: int
    hits: int
    seed: int
    certifying: bool = False
    note: str = "Monte Carlo frequency; not a certified bound"
    extra: dict = field(default_factory=dict)

    @property
    def value(self) -> Fraction:
        return Fraction(self.hits, self.samples)


def estimate_p(a: AutAction, k: int, samples: int = 200, seed: int = 0) -> PEstimate:
    """Frequency of random Omega points forming a base with D for the full group."""
    from .diagonal import D_point, is_base, normalize
    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(samples):
        raw = list(rng.integers(0, a.order, k - 1)) + [0]
        ok, _desc = is_base(a, [D_point(k), normalize(a, raw)], "S", None)
        hits += bool(ok)
    return PEstimate(a.name, k, samples, hits, seed)
