"""Positive-definite ternary quadratic form engine.

Gram lattices, representation counting by bounded lattice-point
enumeration, theta coefficient sweeps, isometry and automorphism
counting with orbit decomposition, and the exceptional-set sieves for
the determinant-625 forms

    f(x,y,z) = 3x^2 + 25y^2 + 25z^2 - 10xy - 10xz
    g(x,y,z) = 2x^2 + 25y^2 + 25z^2 - 10xy

Enumeration uses an LDL (Cholesky-style) decomposition for real bounds,
widened slightly, with every candidate re-verified in exact integer
arithmetic so no vector is lost to rounding.  The innermost coordinate
is solved exactly as an integer quadratic.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import ceil, floor, isqrt, sqrt
from typing import Callable, Optional

import numpy as np

from .arith import is_prime
from .qseries import QSeries
from .reports import SieveReport

THETA_LIMIT = 10**8


@dataclass(frozen=True)
class TernaryLattice:
    """A positive-definite integral Gram matrix of rank 3."""

    gram: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        g = self.gram
        if len(g) != 3 or any(len(row) != 3 for row in g):
            raise ValueError("gram must be 3x3")
        if any(g[i][j] != g[j][i] for i in range(3) for j in range(3)):
            raise ValueError("gram must be symmetric")
        m1 = g[0][0]
        m2 = g[0][0] * g[1][1] - g[0][1] ** 2
        m3 = self._det3(g)
        if m1 <= 0 or m2 <= 0 or m3 <= 0:
            raise ValueError("gram must be positive definite")
        object.__setattr__(self, "_det", m3)
        object.__setattr__(self, "_ldl", self._compute_ldl(g))

    @staticmethod
    def _det3(g) -> int:
        return (
            g[0][0] * (g[1][1] * g[2][2] - g[1][2] ** 2)
            - g[0][1] * (g[0][1] * g[2][2] - g[1][2] * g[0][2])
            + g[0][2] * (g[0][1] * g[1][2] - g[1][1] * g[0][2])
        )

    @staticmethod
    def _compute_ldl(g) -> tuple[float, float, float, float, float, float]:
        d1 = float(g[0][0])
        l21 = g[0][1] / d1
        l31 = g[0][2] / d1
        d2 = g[1][1] - d1 * l21 * l21
        l32 = (g[1][2] - d1 * l31 * l21) / d2
        d3 = g[2][2] - d1 * l31 * l31 - d2 * l32 * l32
        return (d1, d2, d3, l21, l31, l32)

    @property
    def det(self) -> int:
        return self._det

    @property
    def ldl(self) -> tuple[float, float, float, float, float, float]:
        return self._ldl

    @property
    def cholesky(self) -> np.ndarray:
        """Lower-triangular real factor L with L L^T = gram."""
        return np.linalg.cholesky(np.array(self.gram, dtype=float))

    def evaluate(self, v) -> int:
        x, y, z = v
        g = self.gram
        return (
            g[0][0] * x * x
            + g[1][1] * y * y
            + g[2][2] * z * z
            + 2 * (g[0][1] * x * y + g[0][2] * x * z + g[1][2] * y * z)
        )

    def bilinear(self, u, v) -> int:
        g = self.gram
        return sum(g[i][j] * u[i] * v[j] for i in range(3) for j in range(3))


@dataclass(frozen=True)
class Isometry:
    """Integer matrix M with M^T G_target M = G_source (columns = images)."""

    matrix: tuple[tuple[int, int, int], ...]

    def as_array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=np.int64)


I3 = TernaryLattice(((1, 0, 0), (0, 1, 0), (0, 0, 1)))


def ell_ab(p: int, a: int, b: int) -> TernaryLattice:
    """Index-p^2 sublattice of I3 with Gram
    [[a^2+b^2+1, ap, bp], [ap, p^2, 0], [bp, 0, p^2]]."""
    if p % 2 == 0 or not is_prime(p):
        raise ValueError("p must be an odd prime")
    eps = a * a + b * b + 1
    return TernaryLattice(
        ((eps, a * p, b * p), (a * p, p * p, 0), (b * p, 0, p * p))
    )


def form_f() -> TernaryLattice:
    return TernaryLattice(((3, -5, -5), (-5, 25, 0), (-5, 0, 25)))


def form_g() -> TernaryLattice:
    return TernaryLattice(((2, -5, 0), (-5, 25, 0), (0, 0, 25)))


def _x1_solutions(g, x2: int, x3: int, n: int) -> list[int]:
    """Integer x1 with Q(x1, x2, x3) = n, solved exactly."""
    a = g[0][0]
    b = g[0][1] * x2 + g[0][2] * x3
    c = g[1][1] * x2 * x2 + 2 * g[1][2] * x2 * x3 + g[2][2] * x3 * x3 - n
    disc = b * b - a * c
    if disc < 0:
        return []
    r = isqrt(disc)
    if r * r != disc:
        return []
    out = []
    for num in ((-b + r), (-b - r)):
        if num % a == 0:
            out.append(num // a)
        if r == 0:
            break
    return out


def _stripe_ranges(L: TernaryLattice, bound: int):
    """Yield (x2, x3) with the d2/d3 part of the LDL value <= bound."""
    d1, d2, d3, l21, l31, l32 = L.ldl
    b3 = int(sqrt(bound / d3) + 1e-9) + 1
    for x3 in range(-b3, b3 + 1):
        rem3 = bound - d3 * x3 * x3
        if rem3 < -0.5:
            continue
        w2 = sqrt(max(rem3, 0.0) / d2) + 1e-6
        c2 = l32 * x3
        for x2 in range(floor(-c2 - w2) - 1, ceil(-c2 + w2) + 2):
            yield x2, x3


def rep_count(L: TernaryLattice, n: int) -> int:
    """Number of integer vectors v with v^T G v = n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    g = L.gram
    return sum(len(_x1_solutions(g, x2, x3, n)) for x2, x3 in _stripe_ranges(L, n))


def enumerate_vectors(L: TernaryLattice, n: int) -> list[tuple[int, int, int]]:
    """All integer vectors of norm n, ordered lexicographically."""
    g = L.gram
    out = []
    for x2, x3 in _stripe_ranges(L, n):
        for x1 in _x1_solutions(g, x2, x3, n):
            out.append((x1, x2, x3))
    out.sort()
    return out


def _sweep_window(
    L: TernaryLattice, lo: int, hi: int, consume: Callable[[np.ndarray], None]
) -> None:
    """Feed exact norms Q(v) in [lo, hi] to `consume`, stripe by stripe.

    Bounds come from the LDL factors (floats widened by 1e-6 plus a whole
    index of margin); the integer norm recomputation filters exactly.
    """
    g = L.gram
    g00, g01, g02 = g[0]
    g11, g12 = g[1][1], g[1][2]
    g22 = g[2][2]
    d1, d2, d3, l21, l31, l32 = L.ldl
    b3 = int(sqrt(hi / d3) + 1e-9) + 1
    for x3 in range(-b3, b3 + 1):
        rem3 = hi - d3 * x3 * x3
        if rem3 < -0.5:
            continue
        w2 = sqrt(max(rem3, 0.0) / d2) + 1e-6
        c2 = l32 * x3
        base3 = g22 * x3 * x3
        for x2 in range(floor(-c2 - w2) - 1, ceil(-c2 + w2) + 2):
            c1 = l21 * x2 + l31 * x3
            rem2 = rem3 - d2 * (x2 + c2) ** 2
            if rem2 < -0.5:
                continue
            whi = sqrt(max(rem2, 0.0) / d1) + 1e-6
            rem2_lo = lo - d3 * x3 * x3 - d2 * (x2 + c2) ** 2
            wlo = sqrt(rem2_lo / d1) if rem2_lo > 0 else 0.0
            if wlo >= 2.0:
                spans = (
                    (floor(-c1 - whi) - 1, ceil(-c1 - wlo) + 1),
                    (floor(-c1 + wlo) - 1, ceil(-c1 + whi) + 2),
                )
            else:
                spans = ((floor(-c1 - whi) - 1, ceil(-c1 + whi) + 2),)
            lin = 2 * (g01 * x2 + g02 * x3)
            const = g11 * x2 * x2 + 2 * g12 * x2 * x3 + base3
            for a, b in spans:
                if a > b:
                    continue
                x1 = np.arange(a, b + 1, dtype=np.int64)
                q = g00 * x1 * x1 + lin * x1 + const
                q = q[(q >= lo) & (q <= hi)]
                if len(q):
                    consume(q)


def theta_coeffs(L: TernaryLattice, n_max: int, *, threads: int = 1) -> QSeries:
    """Theta series coefficients r(n, L) for 0 <= n <= n_max, one sweep."""
    if not 1 <= n_max <= THETA_LIMIT:
        raise ValueError(f"n_max must be in 1..{THETA_LIMIT}")
    counts = np.zeros(n_max + 1, dtype=np.int64)

    def consume(q: np.ndarray) -> None:
        np.add.at(counts, q, 1)

    _sweep_window(L, 0, n_max, consume)
    return QSeries(counts)


def represented_bitmap(
    L: TernaryLattice, n_max: int, *, threads: int = 1, chunk_size: Optional[int] = None
) -> np.ndarray:
    """Bitmap over 0..n_max of integers represented by L."""
    if not 1 <= n_max <= THETA_LIMIT:
        raise ValueError(f"n_max must be in 1..{THETA_LIMIT}")
    bm = np.zeros(n_max + 1, dtype=bool)
    if chunk_size is None:
        chunk_size = n_max + 1 if threads <= 1 else (n_max + threads) // threads

    windows = []
    a = 0
    while a <= n_max:
        b = min(a + chunk_size - 1, n_max)
        windows.append((a, b))
        a = b + 1

    def job(win):
        lo, hi = win
        local = np.zeros(hi - lo + 1, dtype=bool)
        _sweep_window(L, lo, hi, lambda q: local.__setitem__(q - lo, True))
        return win, local

    if threads > 1 and len(windows) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for (lo, hi), local in pool.map(job, windows):
                bm[lo : hi + 1] = local
    else:
        for win in windows:
            (lo, hi), local = job(win)
            bm[lo : hi + 1] = local
    return bm


# --------------------------------------------------------------------------
# isometries and orbits
# --------------------------------------------------------------------------


def _isometry_column_data(source: TernaryLattice, target: TernaryLattice):
    s = source.gram
    norms = (s[0][0], s[1][1], s[2][2])
    cache: dict[int, np.ndarray] = {}
    for n in norms:
        if n not in cache:
            vecs = enumerate_vectors(target, n)
            cache[n] = np.array(vecs, dtype=np.int64).reshape(len(vecs), 3)
    gt = np.array(target.gram, dtype=np.int64)
    v1 = cache[norms[0]]
    v2 = cache[norms[1]]
    v3 = cache[norms[2]]
    return s, v1, v2, v3, v2 @ gt, v3 @ gt


def isometry_count(source: TernaryLattice, target: TernaryLattice) -> int:
    """|R(source, target)|: the number of isometric embeddings."""
    s, v1, v2, v3, gv2, gv3 = _isometry_column_data(source, target)
    total = 0
    for w1 in v1:
        m2 = gv2 @ w1 == s[0][1]
        if not m2.any():
            continue
        m3 = gv3 @ w1 == s[0][2]
        if not m3.any():
            continue
        dots = v2[m2] @ gv3[m3].T
        total += int((dots == s[1][2]).sum())
    return total


def isometries(source: TernaryLattice, target: TernaryLattice) -> list[Isometry]:
    """All isometries source -> target as column matrices."""
    s, v1, v2, v3, gv2, gv3 = _isometry_column_data(source, target)
    out = []
    for w1 in v1:
        m2 = gv2 @ w1 == s[0][1]
        if not m2.any():
            continue
        m3 = gv3 @ w1 == s[0][2]
        if not m3.any():
            continue
        w2s = v2[m2]
        w3s = v3[m3]
        dots = w2s @ gv3[m3].T
        for i, j in np.argwhere(dots == s[1][2]):
            mat = tuple(
                (int(w1[r]), int(w2s[i][r]), int(w3s[j][r])) for r in range(3)
            )
            out.append(Isometry(mat))
    return out


def automorphism_count(L: TernaryLattice) -> int:
    """Order of the isometry group O(L)."""
    return isometry_count(L, L)


def orbit_representatives(
    source: TernaryLattice, target: TernaryLattice
) -> list[Isometry]:
    """One representative per orbit of O(target) acting on R(source, target).

    Left multiplication by O(target) is free (isometries have full rank),
    so every orbit has size |O(target)|; the representative chosen is the
    entrywise-least matrix of its orbit.
    """
    emb = isometries(source, target)
    if not emb:
        return []
    auto = [U.as_array() for U in isometries(target, target)]
    reps: dict[tuple, np.ndarray] = {}
    for m in emb:
        arr = m.as_array()
        key = min(tuple((u @ arr).flatten()) for u in auto)
        reps.setdefault(key, arr)
    if len(reps) * len(auto) != len(emb):
        raise AssertionError("orbit decomposition is not free")
    out = []
    for key in sorted(reps):
        mat = np.array(key, dtype=np.int64).reshape(3, 3)
        out.append(Isometry(tuple(tuple(int(v) for v in row) for row in mat)))
    return out


# --------------------------------------------------------------------------
# exceptional-set sieve for f and g
# --------------------------------------------------------------------------


def squarefree_bitmap(limit: int) -> np.ndarray:
    bm = np.ones(limit + 1, dtype=bool)
    bm[0] = False
    for p in range(2, isqrt(limit) + 1):
        bm[p * p :: p * p] = False
    return bm


def genus_exception_sieve(
    form_id: str, hi: int, *, threads: int = 1, chunk_size: Optional[int] = None
) -> SieveReport:
    """Square-free n <= hi in the form's residue class (2 mod 5 for f,
    3 mod 5 for g), n != 7 mod 8, that the form fails to represent."""
    if form_id not in ("f", "g"):
        raise ValueError("form_id must be 'f' or 'g'")
    if not 1 <= hi <= THETA_LIMIT:
        raise ValueError(f"hi must be in 1..{THETA_LIMIT}")
    t0 = time.perf_counter()
    lattice = form_f() if form_id == "f" else form_g()
    residue = 2 if form_id == "f" else 3
    rep = represented_bitmap(lattice, hi, threads=threads, chunk_size=chunk_size)
    n = np.arange(hi + 1, dtype=np.int64)
    eligible = squarefree_bitmap(hi) & (n % 5 == residue) & (n % 8 != 7)
    exceptions = n[eligible & ~rep].tolist()
    elapsed = (time.perf_counter() - t0) * 1000.0
    chunks = 1 if chunk_size is None and threads <= 1 else max(threads, 1)
    return SieveReport(
        target=f"form-{form_id}",
        lo=1,
        hi=hi,
        filter={"residue_mod_5": residue, "squarefree": True, "not_7_mod_8": True},
        exceptions=exceptions,
        elapsed_ms=elapsed,
        chunk_count=chunks,
        grh_conditional=True,
    )
