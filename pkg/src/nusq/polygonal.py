"""Generalized polygonal numbers and their square reductions.

P_m(x) = ((m-2)x^2 - (m-4)x)/2 with x ranging over all of Z.  Three-term
problems for m in {3, 5, 7, 8} reduce to constrained three-square
problems:

    m=3:  8n+3  = s1+s2+s3,  s_i odd squares
    m=5:  24n+3 = s1+s2+s3,  coordinates prime to 3
    m=7:  40n+27 = s1+s2+s3, coordinates = +-3 mod 10
    m=8:  3n+3  = s1+s2+s3,  coordinates prime to 3

"nonzero" means the term value P_m(x) != 0 (for m = 3 this excludes the
arguments 0 and -1, which both give value 0).

The 9m lifting identities write 9(a^2+b^2+c^2) as a sum of three squares
whose roots stay prime to 3; together with a bounded fallback search they
drive the divisible-by-9 branches of the three-term solvers.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from math import isqrt
from typing import Callable, Optional

import numpy as np

from .arith import is_sum_three_squares
from .nonunit import canonical_triples, constrained_sum3_bitmap, s3_bitmap
from .reports import SieveReport


def polygonal_value(m: int, x: int) -> int:
    """P_m(x) = ((m-2)x^2 - (m-4)x)/2."""
    if m < 3:
        raise ValueError("gonality m must be >= 3")
    return ((m - 2) * x * x - (m - 4) * x) // 2


@dataclass(frozen=True)
class PolygonalProblem:
    m: int
    k: int
    nonzero: bool = False

    def __post_init__(self):
        if self.m < 3:
            raise ValueError("gonality m must be >= 3")
        if self.k < 1:
            raise ValueError("k must be >= 1")


@dataclass(frozen=True)
class LiftWitness:
    """9(a^2+b^2+c^2) = A^2+B^2+C^2 with 3 prime to ABC and no unit square."""

    input: tuple[int, int, int]
    output: tuple[int, int, int]
    variant: str

    def __post_init__(self):
        a, b, c = self.input
        A, B, C = self.output
        if A * A + B * B + C * C != 9 * (a * a + b * b + c * c):
            raise ValueError("lift does not scale the sum of squares by 9")
        if (A * B * C) % 3 == 0:
            raise ValueError("output must be prime to 3")
        if 1 in (A * A, B * B, C * C):
            raise ValueError("output must avoid unit squares")


# row matrices: output_i = row_i . (a, b, c)
_Z1 = ((1, 2, 2), (-2, -1, 2), (-2, 2, -1))
_Z2 = ((-1, -2, 2), (2, 1, 2), (2, -2, -1))
_Z3 = ((-1, 2, -2), (2, -1, -2), (2, 2, 1))
_Y = ((-1, 2, 2), (2, -1, 2), (2, 2, -1))

LINEAR_VARIANTS: dict[str, tuple[tuple[int, int, int], ...]] = {
    "z1": _Z1,
    "z2": _Z2,
    "z3": _Z3,
    "y": _Y,
    "yy": _Z1,
    "r0": _Y,
    "r": _Z1,
    "rr": _Z2,
}

# parametrized families: input (a,b,c) = (k*u + d) rows, output likewise
_PARAM_INPUT = {
    "p": ((-18, -3), (6, 1), (-15, -2)),
    "pp": ((-18, -3), (6, 1), (-15, -2)),
    "a": ((0, 0), (6, 1), (3, 1)),
    "aa": ((0, 0), (6, 1), (3, 1)),
    "q": ((9, 0), (6, 1), (-6, 1)),
    "qq": ((9, 0), (6, 1), (-6, 1)),
}
_PARAM_OUTPUT = {
    "p": ((19, 2), (2, 1), (70, 11)),
    "pp": ((10, 1), (26, 5), (67, 10)),
    "a": ((1, -1), (2, 1), (20, 4)),
    "aa": ((4, 0), (10, 3), (17, 3)),
    "q": ((2, -3), (2, 3), (37, 0)),
    "qq": ((5, -4), (14, -1), (34, 1)),
}


def param_lift_input(variant: str, u: int) -> tuple[int, int, int]:
    """The (a, b, c) of a parametrized family at parameter u."""
    rows = _PARAM_INPUT[variant]
    return tuple(k * u + d for k, d in rows)  # type: ignore[return-value]


def identity_lift(a: int, b: int, c: int, variant: str) -> tuple[int, int, int]:
    """Apply one lifting identity; output squares sum to 9(a^2+b^2+c^2).

    For the parametrized families (p/pp, a/aa, q/qq) the inputs must lie
    on the family's parametrization; the parameter u is recovered from
    them.
    """
    if variant in LINEAR_VARIANTS:
        rows = LINEAR_VARIANTS[variant]
        return tuple(r[0] * a + r[1] * b + r[2] * c for r in rows)  # type: ignore
    if variant in _PARAM_INPUT:
        rows = _PARAM_INPUT[variant]
        u = None
        for (k, d), v in zip(rows, (a, b, c)):
            if k:
                if (v - d) % k:
                    raise ValueError(f"({a},{b},{c}) is not on family {variant}")
                u = (v - d) // k
                break
        if (a, b, c) != param_lift_input(variant, u):
            raise ValueError(f"({a},{b},{c}) is not on family {variant}")
        return tuple(k * u + d for k, d in _PARAM_OUTPUT[variant])  # type: ignore
    raise ValueError(f"unknown identity variant {variant!r}")


def _norm_mod3(v: int) -> int:
    """Flip the sign of v (prime to 3) so that v = 1 mod 3."""
    return v if v % 3 == 1 else -v


def _lift_output_ok(out: tuple[int, int, int]) -> bool:
    return all(t % 3 != 0 and t * t != 1 for t in out)


def _try_linear(trip: tuple[int, int, int], names: tuple[str, ...]):
    for name in names:
        out = identity_lift(*trip, name)
        if _lift_output_ok(out):
            return out, name
    return None


def good3_rep(m: int) -> Optional[tuple[int, int, int]]:
    """First canonical rep of m with every coordinate prime to 3."""
    for trip in canonical_triples(m):
        if all(v % 3 != 0 for v in trip):
            return trip
    return None


def _search_valid_triple(target: int) -> Optional[tuple[int, int, int]]:
    """First x <= y <= z with x^2+y^2+z^2 = target, 3 prime to xyz, no units."""
    for x in range(2, isqrt(target // 3) + 1):
        if x % 3 == 0:
            continue
        rem = target - x * x
        for y in range(x, isqrt(rem // 2) + 1):
            if y % 3 == 0:
                continue
            z2 = rem - y * y
            z = isqrt(z2)
            if z * z == z2 and z >= y and z % 3 != 0 and z != 1:
                return (x, y, z)
    return None


def _signed_assignments(fixed, movable):
    """(a, b, c) candidates: movable coords in both orders and signs,
    the residue-1-normalized coordinate(s) fixed."""
    m1, m2 = movable
    orders = [(m1, m2)] if m1 == m2 else [(m1, m2), (m2, m1)]
    for o1, o2 in orders:
        s1_opts = (1,) if o1 == 0 else (1, -1)
        s2_opts = (1,) if o2 == 0 else (1, -1)
        for s1 in s1_opts:
            for s2 in s2_opts:
                yield (s1 * o1, s2 * o2, fixed)


def _lift_by_identities(m: int) -> Optional[LiftWitness]:
    r = m % 3
    if r == 0:
        if m == 3:
            return None
        rep = good3_rep(m)
        if rep is None:
            raise AssertionError(f"no coordinatewise-prime-to-3 rep for m={m}")
        trip = tuple(_norm_mod3(v) for v in rep)
        hit = _try_linear(trip, ("z1", "z2", "z3"))
        if hit is None:
            raise AssertionError(f"triple identity failed for m={m}")
        out, name = hit
        return _make_witness(trip, out, name)
    if r == 2:
        variants = ("y", "yy")
    else:
        variants = ("r0", "r", "rr")
    for rep in canonical_triples(m):
        zeros = [v for v in rep if v % 3 == 0]
        units = [v for v in rep if v % 3 != 0]
        if r == 2:
            if len(zeros) != 1:
                continue
            fixed_pair = tuple(_norm_mod3(v) for v in units)
            for o1, o2 in (
                [(fixed_pair[0], fixed_pair[1])]
                if fixed_pair[0] == fixed_pair[1]
                else [(fixed_pair[0], fixed_pair[1]), (fixed_pair[1], fixed_pair[0])]
            ):
                signs = (1,) if zeros[0] == 0 else (1, -1)
                for s in signs:
                    trip = (s * zeros[0], o1, o2)
                    hit = _try_linear(trip, variants)
                    if hit:
                        return _make_witness(trip, hit[0], hit[1])
        else:
            if len(units) != 1:
                continue
            c = _norm_mod3(units[0])
            for trip in _signed_assignments(c, (zeros[0], zeros[1])):
                hit = _try_linear(trip, variants)
                if hit:
                    return _make_witness(trip, hit[0], hit[1])
    return None


def _make_witness(trip, out, name) -> LiftWitness:
    canonical = tuple(sorted(abs(t) for t in out))
    return LiftWitness(input=trip, output=canonical, variant=name)


def nine_m_lift(m: int) -> Optional[LiftWitness]:
    """Witness for 9m = A^2+B^2+C^2 with 3 prime to ABC and no unit square.

    Absent exactly for m in {1, 2, 3, 14}.  The identity-based route is
    tried first; a bounded exhaustive search acts as fallback and oracle,
    and the two routes must agree about existence.
    """
    if m < 1 or not is_sum_three_squares(m):
        raise ValueError(f"m={m} is not a sum of three squares")
    witness = _lift_by_identities(m)
    found = _search_valid_triple(9 * m)
    if witness is None and found is not None:
        # identity case analysis missed; fall back to the searched triple
        rep = next(iter(canonical_triples(m)))
        witness = LiftWitness(input=rep, output=found, variant="search")
    elif witness is not None and found is None:
        raise AssertionError(f"identity route produced a witness but search found none (m={m})")
    return witness


# --------------------------------------------------------------------------
# three-term solvers through the square reductions
# --------------------------------------------------------------------------

# m -> (scale, shift): the reduced target is scale*n + shift
_REDUCTION = {3: (8, 3), 5: (24, 3), 7: (40, 27), 8: (3, 3)}


def _coord_ok(m: int, v: int) -> bool:
    if m == 3:
        return v % 2 == 1
    if m == 5:
        return v % 2 == 1 and v % 3 != 0
    if m == 7:
        return v % 10 in (3, 7)
    if m == 8:
        return v % 3 != 0
    raise ValueError(f"no square reduction for m={m}")


def _zero_coord(m: int) -> int:
    # the (positive) coordinate whose term value is zero
    return 3 if m == 7 else 1


def _arg_from_coord(m: int, s: int) -> int:
    """Recover the polygonal argument from a nonnegative coordinate s."""
    if m == 3:
        return (s - 1) // 2
    if m == 5:
        return (s + 1) // 6 if s % 6 == 5 else (1 - s) // 6
    if m == 7:
        return (s + 3) // 10 if s % 10 == 7 else (3 - s) // 10
    if m == 8:
        return (s + 1) // 3 if s % 3 == 2 else (1 - s) // 3
    raise ValueError(f"no square reduction for m={m}")


def _constrained_triple(target: int, m: int, nonzero: bool):
    zero = _zero_coord(m)
    for x in range(isqrt(target // 3) + 1):
        if not _coord_ok(m, x) or (nonzero and x == zero):
            continue
        rem = target - x * x
        for y in range(x, isqrt(rem // 2) + 1):
            if not _coord_ok(m, y) or (nonzero and y == zero):
                continue
            z2 = rem - y * y
            z = isqrt(z2)
            if (
                z * z == z2
                and z >= y
                and _coord_ok(m, z)
                and not (nonzero and z == zero)
            ):
                return (x, y, z)
    return None


def _decompose3_reduced(n: int, m: int, nonzero: bool) -> Optional[list[int]]:
    scale, shift = _REDUCTION[m]
    trip = _constrained_triple(scale * n + shift, m, nonzero)
    if trip is None:
        return None
    args = [_arg_from_coord(m, s) for s in trip]
    args.sort(key=lambda x: -polygonal_value(m, x))
    return args


# --------------------------------------------------------------------------
# generic terms, reachability tables, witness extraction
# --------------------------------------------------------------------------


def _terms_upto(m: int, limit: int, include_zero: bool) -> dict[int, int]:
    """value -> canonical argument, over all P_m(x) <= limit."""
    vals: dict[int, int] = {}

    def visit(x: int) -> int:
        v = polygonal_value(m, x)
        if v <= limit:
            best = vals.get(v)
            if best is None or (abs(x), x < 0) < (abs(best), best < 0):
                vals[v] = x
        return v

    x = 0
    while visit(x) <= limit:
        x += 1
    x = -1
    while visit(x) <= limit:
        x -= 1
    if not include_zero:
        vals.pop(0, None)
    return vals


_reach_cache: dict[tuple[int, bool], dict[int, tuple[int, np.ndarray]]] = {}


def _reach_table(m: int, j: int, nonzero: bool, bound: int) -> np.ndarray:
    """Bitmap over 0..bound: reachable as a sum of exactly j terms."""
    per_m = _reach_cache.setdefault((m, nonzero), {})
    cached = per_m.get(j)
    if cached is not None and cached[0] >= bound:
        return cached[1][: bound + 1]
    if j == 3 and m in _REDUCTION:
        scale, shift = _REDUCTION[m]
        zero = _zero_coord(m)

        def keep(v: int) -> bool:
            return _coord_ok(m, v) and not (nonzero and v == zero)

        reduced = constrained_sum3_bitmap(scale * bound + shift, keep)
        idx = scale * np.arange(bound + 1, dtype=np.int64) + shift
        table = reduced[idx]
    else:
        values = sorted(_terms_upto(m, bound, include_zero=not nonzero))
        if j == 1:
            table = np.zeros(bound + 1, dtype=bool)
            table[np.array(values, dtype=np.int64)] = True
        else:
            prev = _reach_table(m, j - 1, nonzero, bound)
            table = np.zeros(bound + 1, dtype=bool)
            for v in values:
                table[v:] |= prev[: bound + 1 - v]
    per_m[j] = (bound, table)
    return table


def _solve_k1(n: int, m: int, nonzero: bool) -> Optional[int]:
    disc = (m - 4) ** 2 + 8 * (m - 2) * n
    if disc < 0:
        return None
    r = isqrt(disc)
    if r * r != disc:
        return None
    best = None
    for num in (m - 4 + r, m - 4 - r):
        if num % (2 * (m - 2)) == 0:
            x = num // (2 * (m - 2))
            if polygonal_value(m, x) != n:
                continue
            if nonzero and n == 0:
                continue
            if best is None or (abs(x), x < 0) < (abs(best), best < 0):
                best = x
    return best


def decompose_polygonal(n: int, prob: PolygonalProblem) -> Optional[list[int]]:
    """Arguments x_1..x_k with sum P_m(x_i) = n, or None.

    Three-term problems for m in {3,5,7,8} go through the square
    reductions; k >= 4 peels terms (largest value first) against memoized
    reachability tables; other m use the generic table solver directly.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    m, k, nonzero = prob.m, prob.k, prob.nonzero
    if k == 1:
        x = _solve_k1(n, m, nonzero)
        return None if x is None else [x]
    if k == 3 and m in _REDUCTION:
        return _decompose3_reduced(n, m, nonzero)

    terms = _terms_upto(m, n, include_zero=not nonzero)
    if k == 2:
        for v in sorted(terms, reverse=True):
            x2 = _solve_k1(n - v, m, nonzero)
            if x2 is not None:
                return [terms[v], x2]
        return None

    if not _reach_table(m, k, nonzero, n)[n]:
        return None
    out: list[int] = []
    remaining = n
    for j in range(k, 3, -1):
        prev = _reach_table(m, j - 1, nonzero, remaining)
        for v in sorted(terms, reverse=True):
            if v <= remaining and prev[remaining - v]:
                out.append(terms[v])
                remaining -= v
                break
        else:
            raise AssertionError("reachability table disagrees with extraction")
    if m in _REDUCTION:
        tail = _decompose3_reduced(remaining, m, nonzero)
    else:
        tail = _decompose3_generic(remaining, m, nonzero)
    if tail is None:
        raise AssertionError("reachability table disagrees with 3-term solver")
    return out + tail


def _decompose3_generic(n: int, m: int, nonzero: bool) -> Optional[list[int]]:
    terms = _terms_upto(m, n, include_zero=not nonzero)
    for v in sorted(terms, reverse=True):
        rest = n - v
        for w in sorted(t for t in terms if t <= rest):
            x3 = _solve_k1(rest - w, m, nonzero)
            if x3 is not None:
                return sorted(
                    [terms[v], terms[w], x3],
                    key=lambda x: -polygonal_value(m, x),
                )
    return None


# --------------------------------------------------------------------------
# exceptional-set sieves
# --------------------------------------------------------------------------


def k_sum_exceptions(m: int, k: int, hi: int, *, threads: int = 1) -> SieveReport:
    """n <= hi that are not sums of k nonzero generalized m-gonal numbers.

    For (m, k) = (8, 3) only n with 3n+3 a sum of three squares are
    candidates (the rest are not sums of three octagonal numbers at all).
    k = 3 completeness is conditional; k >= 4 is unconditional.
    """
    if m not in (3, 5, 8):
        raise ValueError("m must be 3, 5 or 8")
    if k < 3:
        raise ValueError("k must be >= 3")
    if hi < 1:
        raise ValueError("hi must be positive")
    t0 = time.perf_counter()
    reach = _reach_table(m, k, True, hi)
    n = np.arange(hi + 1, dtype=np.int64)
    candidates = np.ones(hi + 1, dtype=bool)
    candidates[0] = False
    if m == 8 and k == 3:
        candidates &= s3_bitmap(3 * hi + 3)[3 * n + 3]
    exceptions = n[candidates & ~reach[: hi + 1]].tolist()
    elapsed = (time.perf_counter() - t0) * 1000.0
    return SieveReport(
        target="polygonal",
        lo=1,
        hi=hi,
        filter={"m": m, "k": k, "nonzero": True},
        exceptions=exceptions,
        elapsed_ms=elapsed,
        chunk_count=1,
        grh_conditional=(k == 3),
    )


def heptagonal_exceptions(hi: int) -> SieveReport:
    """n <= hi that are not sums of three generalized heptagonal numbers."""
    if hi < 1:
        raise ValueError("hi must be positive")
    t0 = time.perf_counter()
    reach = _reach_table(7, 3, False, hi)
    n = np.arange(1, hi + 1, dtype=np.int64)
    exceptions = n[~reach[1 : hi + 1]].tolist()
    elapsed = (time.perf_counter() - t0) * 1000.0
    return SieveReport(
        target="polygonal",
        lo=1,
        hi=hi,
        filter={"m": 7, "k": 3, "nonzero": False},
        exceptions=exceptions,
        elapsed_ms=elapsed,
        chunk_count=1,
        grh_conditional=True,
    )


def octagonal_four_square_check(n: int) -> bool:
    """Is n = x^2+y^2+z^2+w^2 with 3 prime to xyzw and no unit square?"""
    if n < 0:
        raise ValueError("n must be nonnegative")

    def ok(v: int) -> bool:
        return v % 3 != 0 and v != 1

    for x in range(2, isqrt(n // 4) + 1):
        if not ok(x):
            continue
        r1 = n - x * x
        for y in range(x, isqrt(r1 // 3) + 1):
            if not ok(y):
                continue
            r2 = r1 - y * y
            for z in range(y, isqrt(r2 // 2) + 1):
                if not ok(z):
                    continue
                w2 = r2 - z * z
                w = isqrt(w2)
                if w * w == w2 and w >= z and ok(w):
                    return True
    return False
