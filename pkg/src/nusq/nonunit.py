"""Sums of three nonunit squares.

A "nonunit square" is a square x^2 with x^2 != 1 (x = 0 is allowed).
This module decides and counts representations n = x^2+y^2+z^2 avoiding
unit squares, produces witnesses, and sieves out the exceptional sets on
ranges.  It also carries the supporting facts used by those sieves:
two-nonunit-square decompositions, the (5a,5b) -> (x,y) rewriting with
its exceptional norms, the exponential Diophantine tables 2^i 5^n = a+y^2,
and essentially-distinct representation counts.

The range sieve works on bitmaps: P marks sums of two admissible squares,
and the membership bitmap is the union of P shifted by every admissible
square, chunked over n-windows for parallelism and checkpointing.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import isqrt
from typing import Callable, Iterable, Iterator, Optional

import numpy as np

from .arith import _fast_r2, _fast_r3, _r1, is_sum_three_squares
from .reports import SieveReport

SIEVE_LIMIT = 10**8


@dataclass(frozen=True)
class Triple:
    """An ordered integer triple with x^2 + y^2 + z^2 = n."""

    x: int
    y: int
    z: int
    n: int

    def __post_init__(self):
        if self.x**2 + self.y**2 + self.z**2 != self.n:
            raise ValueError("triple does not represent n")

    @classmethod
    def of(cls, x: int, y: int, z: int) -> "Triple":
        return cls(x, y, z, x * x + y * y + z * z)

    def is_nonunit(self) -> bool:
        return 1 not in (self.x * self.x, self.y * self.y, self.z * self.z)

    def canonical(self) -> "Triple":
        a, b, c = sorted((abs(self.x), abs(self.y), abs(self.z)))
        return Triple(a, b, c, self.n)


@dataclass(frozen=True)
class NonunitStatus:
    n: int
    in_s3: bool
    in_s3_nonunit: bool
    witness: Optional[Triple]

    def __post_init__(self):
        if self.in_s3_nonunit and not self.in_s3:
            raise ValueError("nonunit membership implies three-square membership")
        if self.in_s3_nonunit != (self.witness is not None):
            raise ValueError("witness must be present exactly for members")


def canonical_triples(n: int) -> Iterator[tuple[int, int, int]]:
    """All 0 <= x <= y <= z with x^2+y^2+z^2 = n, lexicographically."""
    for x in range(isqrt(n // 3) + 1):
        rem = n - x * x
        for y in range(x, isqrt(rem // 2) + 1):
            z2 = rem - y * y
            z = isqrt(z2)
            if z * z == z2 and z >= y:
                yield (x, y, z)


def r3_nonunit(n: int) -> int:
    """Ordered triples x^2+y^2+z^2 = n with all three squares != 1.

    Inclusion-exclusion over the unit coordinates:
    r_3(n) - 6 r_2(n-1) + 12 r_1(n-2) - 8 [n = 3]; the final term is the
    triple intersection (all coordinates +-1), which only occurs at n = 3.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    total = _fast_r3(n) - 6 * _fast_r2(n - 1) + 12 * _r1(n - 2)
    if n == 3:
        total -= 8
    return total


def r3_nonunit_raw_formula(n: int) -> int:
    """The same count without the n = 3 correction term."""
    return _fast_r3(n) - 6 * _fast_r2(n - 1) + 12 * _r1(n - 2)


def nonunit_witness(n: int) -> Optional[Triple]:
    """Least canonical triple for n with all squares != 1, if any."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    for x in range(isqrt(n // 3) + 1):
        if x == 1:
            continue
        rem = n - x * x
        for y in range(x, isqrt(rem // 2) + 1):
            if y == 1:
                continue
            z2 = rem - y * y
            z = isqrt(z2)
            if z * z == z2 and z >= y and z != 1:
                return Triple(x, y, z, n)
    return None


def nonunit_status(n: int) -> NonunitStatus:
    w = nonunit_witness(n)
    return NonunitStatus(n, is_sum_three_squares(n), w is not None, w)


def two_nonunit_decomp(n: int) -> Optional[tuple[int, int]]:
    """x^2 + y^2 = n with both squares != 1, least (x, y), or None."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    for x in range(isqrt(n // 2) + 1):
        if x == 1:
            continue
        y2 = n - x * x
        y = isqrt(y2)
        if y * y == y2 and y >= x and y != 1:
            return (x, y)
    return None


def tilde_r2(n: int) -> int:
    """Ordered pairs x^2+y^2 = n with 5 not dividing xy."""
    if n < 1:
        raise ValueError("n must be positive")
    count = 0
    for x in range(1, isqrt(n) + 1):
        if x % 5 == 0:
            continue
        y2 = n - x * x
        if y2 <= 0:
            continue
        y = isqrt(y2)
        if y * y == y2 and y % 5 != 0:
            count += 4
    return count


CHANGE_EXCEPTIONAL_NORMS = frozenset({1, 2, 5, 8, 18, 250})

_change_cache: dict[int, Optional[tuple[int, int]]] = {}


def change_witness(a: int, b: int) -> Optional[tuple[int, int]]:
    """(x, y) with x^2+y^2 = 25(a^2+b^2), x^2,y^2 >= 10 and 5 not | xy.

    Exists whenever a^2+b^2 is outside {0,1,2,5,8,18,250}; returns the
    least such (x, y) with x <= y, or None.
    """
    s = a * a + b * b
    if s in _change_cache:
        return _change_cache[s]
    target = 25 * s
    found = None
    for x in range(4, isqrt(target // 2) + 1):
        if x % 5 == 0:
            continue
        y2 = target - x * x
        y = isqrt(y2)
        if y * y == y2 and y >= x and y % 5 != 0 and y2 >= 10:
            found = (x, y)
            break
    _change_cache[s] = found
    return found


_SOLEQN_VALID = {(0, 1), (0, 4), (0, 9), (1, 1), (1, 4), (1, 9)}


def soleqn_solutions(i: int, a: int, n_max: int) -> list[tuple[int, int]]:
    """All (n, y), 1 <= n <= n_max, y >= 1, with 2^i 5^n = a + y^2."""
    if (i, a) not in _SOLEQN_VALID:
        raise ValueError(f"unsupported parameters (i, a) = ({i}, {a})")
    if not 1 <= n_max <= 64:
        raise ValueError("n_max must be in 1..64")
    out = []
    power = 5
    for n in range(1, n_max + 1):
        t = (2**i) * power - a
        if t >= 1:
            y = isqrt(t)
            if y * y == t:
                out.append((n, y))
        power *= 5
    return out


def essentially_distinct_count(n: int) -> int:
    """Triples 0 <= x <= y <= z with x^2+y^2+z^2 = n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return sum(1 for _ in canonical_triples(n))


# --------------------------------------------------------------------------
# bitmap sieve machinery (shared with the polygonal reductions)
# --------------------------------------------------------------------------


def coordinate_squares(limit: int, keep: Callable[[int], bool]) -> np.ndarray:
    """Squares x^2 <= limit over the x >= 0 accepted by `keep`."""
    return np.array(
        [x * x for x in range(isqrt(limit) + 1) if keep(x)], dtype=np.int64
    )


def pair_sum_bitmap(squares: np.ndarray, limit: int) -> np.ndarray:
    bm = np.zeros(limit + 1, dtype=bool)
    for s in squares.tolist():
        if s > limit:
            break
        rest = squares[squares <= limit - s]
        bm[s + rest] = True
    return bm


def _triple_window(
    pair_bm: np.ndarray, squares: np.ndarray, lo: int, hi: int
) -> np.ndarray:
    """Membership of s1+s2+s3 (s_i admissible squares) on [lo, hi]."""
    out = np.zeros(hi - lo + 1, dtype=bool)
    for s in squares.tolist():
        if s > hi:
            break
        a = max(lo - s, 0)
        b = hi - s
        if a > b:
            continue
        out[s + a - lo : s + b - lo + 1] |= pair_bm[a : b + 1]
    return out


def constrained_sum3_bitmap(limit: int, keep: Callable[[int], bool]) -> np.ndarray:
    """Bitmap of n <= limit that are sums of three admissible squares."""
    squares = coordinate_squares(limit, keep)
    pair = pair_sum_bitmap(squares, limit)
    return _triple_window(pair, squares, 0, limit)


def nonunit_sum3_bitmap(limit: int) -> np.ndarray:
    """Bitmap of membership in the set of sums of three nonunit squares."""
    return constrained_sum3_bitmap(limit, lambda x: x != 1)


def s3_bitmap(limit: int) -> np.ndarray:
    """Three-square criterion on 0..limit as a bitmap."""
    n = np.arange(limit + 1, dtype=np.int64)
    while True:
        mask = (n >= 4) & (n % 4 == 0)
        if not mask.any():
            break
        n[mask] //= 4
    return (n % 8) != 7


def _chunk_ranges(lo: int, hi: int, chunk_size: int) -> list[tuple[int, int]]:
    out = []
    a = lo
    while a <= hi:
        b = min(a + chunk_size - 1, hi)
        out.append((a, b))
        a = b + 1
    return out


def sieve_nonunit_exceptions(
    lo: int,
    hi: int,
    residue_filter: Optional[Iterable[int]] = None,
    *,
    threads: int = 1,
    chunk_size: Optional[int] = None,
    completed: Optional[dict[int, list[int]]] = None,
    on_chunk: Optional[Callable[[int, int, int, list[int]], None]] = None,
) -> SieveReport:
    """All n in [lo, hi] that are sums of three squares but not of three
    nonunit squares, optionally restricted to residue classes mod 5.

    `completed` maps chunk index -> exception list from a previous run;
    those chunks are not recomputed.  `on_chunk(idx, a, b, exceptions)` is
    called as each chunk finishes, in index order.
    """
    if not 0 <= lo <= hi:
        raise ValueError("need 0 <= lo <= hi")
    if hi > SIEVE_LIMIT:
        raise ValueError(f"sieve bound {hi} exceeds limit {SIEVE_LIMIT}")
    residues = frozenset(r % 5 for r in residue_filter) if residue_filter else None
    t0 = time.perf_counter()

    squares = coordinate_squares(hi, lambda x: x != 1)
    pair = pair_sum_bitmap(squares, hi)
    s3 = s3_bitmap(hi)

    if chunk_size is None:
        chunk_size = max(1 << 16, (hi - lo + 1 + 7) // 8)
    chunks = _chunk_ranges(lo, hi, chunk_size)

    def job(bounds: tuple[int, int]) -> list[int]:
        a, b = bounds
        member = _triple_window(pair, squares, a, b)
        idx = np.nonzero(s3[a : b + 1] & ~member)[0] + a
        idx = idx[idx >= 1]
        if residues is not None:
            idx = idx[np.isin(idx % 5, sorted(residues))]
        return idx.tolist()

    results: dict[int, list[int]] = dict(completed or {})
    todo = [(i, c) for i, c in enumerate(chunks) if i not in results]
    if threads > 1 and len(todo) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for (i, _), res in zip(todo, pool.map(job, [c for _, c in todo])):
                results[i] = res
    else:
        for i, c in todo:
            results[i] = job(c)

    exceptions: list[int] = []
    for i, (a, b) in enumerate(chunks):
        exceptions.extend(results[i])
        if on_chunk is not None:
            on_chunk(i, a, b, results[i])

    elapsed = (time.perf_counter() - t0) * 1000.0
    grh = residues is None or bool(residues & {2, 3})
    return SieveReport(
        target="nonunit",
        lo=lo,
        hi=hi,
        filter={"residues_mod_5": sorted(residues)} if residues else None,
        exceptions=exceptions,
        elapsed_ms=elapsed,
        chunk_count=len(chunks),
        grh_conditional=grh,
    )
