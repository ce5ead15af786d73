"""Exact integer arithmetic layer.

Prime tables, Legendre symbols, representation counts r_k(n), the
three-square criterion, class numbers of negative discriminants, and
quadratic Dirichlet L-values at s=1.

L-values are carried exactly as (rational, fundamental discriminant)
pairs, so the genus-average and r_3 identity checks downstream can be
done in rational arithmetic after the pi and square-root factors cancel.
Floats appear only as a convenience view for reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

_SPF_LIMIT_DEFAULT = 10**6
_spf: np.ndarray | None = None


def _spf_table(limit: int = _SPF_LIMIT_DEFAULT) -> np.ndarray:
    """Smallest-prime-factor table, grown on demand."""
    global _spf
    if _spf is None or len(_spf) <= limit:
        size = max(limit, _SPF_LIMIT_DEFAULT)
        spf = np.zeros(size + 1, dtype=np.int64)
        spf[1] = 1
        for p in range(2, isqrt(size) + 1):
            if spf[p] == 0:
                spf[p] = p
                sl = spf[p * p :: p]
                sl[sl == 0] = p
        rest = np.nonzero(spf == 0)[0]
        spf[rest] = rest
        _spf = spf
    return _spf


def primes_up_to(n: int) -> list[int]:
    """All primes <= n."""
    if n < 2:
        return []
    spf = _spf_table(n)
    idx = np.arange(n + 1)
    return np.nonzero(spf[: n + 1] == idx)[0][2:].tolist()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    spf = _spf_table()
    if n < len(spf):
        return int(spf[n]) == n
    if n > (len(spf) - 1) ** 2:
        raise ValueError(f"primality test out of range for n={n}")
    for p in primes_up_to(isqrt(n)):
        if n % p == 0:
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    """n together with its sorted prime factorization."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError("factors must be sorted primes with exponents >= 1")
            last = p
            prod *= p**e
        if prod != self.n:
            raise ValueError("factorization does not multiply back to n")

    def divisors(self) -> list[int]:
        divs = [1]
        for p, e in self.factors:
            divs = [d * p**j for d in divs for j in range(e + 1)]
        return sorted(divs)

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    @property
    def squarefree_kernel(self) -> int:
        """Product of primes dividing n to an odd power."""
        k = 1
        for p, e in self.factors:
            if e % 2:
                k *= p
        return k


def factorize(n: int) -> Factorization:
    """Trial-division factorization for desk-scale n (n < 10^12)."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    spf = _spf_table()
    factors = []
    if n < len(spf):
        m = n
        while m > 1:
            p = int(spf[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
        return Factorization(n, tuple(factors))
    m = n
    for p in primes_up_to(isqrt(n)):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
        if m == 1:
            break
    if m > 1:
        # remainder is prime: all factors <= sqrt(original n) were removed
        factors.append((m, 1))
        factors.sort()
    return Factorization(n, tuple(factors))


def is_squarefree(n: int) -> bool:
    return factorize(n).is_squarefree()


def legendre_symbol(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p."""
    if p <= 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    t = pow(a % p, (p - 1) // 2, p)
    if t == p - 1:
        return -1
    return int(t)


def _chi4(d: int) -> int:
    # nontrivial character mod 4
    r = d % 4
    if r == 1:
        return 1
    if r == 3:
        return -1
    return 0


def _r1(n: int) -> int:
    if n < 0:
        return 0
    if n == 0:
        return 1
    r = isqrt(n)
    return 2 if r * r == n else 0


def rk_count(n: int, k: int) -> int:
    """Number of ordered (x_1,...,x_k) in Z^k with sum of squares n.

    Pure enumeration; serves as the independent oracle against the
    divisor-formula and L-value routes. r_1(0) = 1 (the solution x=0).
    """
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    if n < 0:
        return 0
    if k == 1:
        return _r1(n)
    total = 0
    for x in range(isqrt(n) + 1):
        w = 1 if x == 0 else 2
        total += w * rk_count(n - x * x, k - 1)
    return total


def r2_divisor_formula(n: int) -> int:
    """r_2(n) as 4 * sum_{d|n} (-4/d), computed multiplicatively."""
    if n < 1:
        raise ValueError("n must be positive")
    total = 1
    for p, e in factorize(n).factors:
        if p == 2:
            continue
        if p % 4 == 1:
            total *= e + 1
        else:
            if e % 2:
                return 0
    return 4 * total


def chi_divisor_sum(n: int) -> int:
    """sum_{d|n} (-4/d); equals r2_divisor_formula(n)/4."""
    return r2_divisor_formula(n) // 4


def _fast_r2(n: int) -> int:
    if n < 0:
        return 0
    if n == 0:
        return 1
    return r2_divisor_formula(n)


def _fast_r3(n: int) -> int:
    # r_3(n) = sum over x of r_2(n - x^2); divisor-formula inner route
    if n < 0:
        return 0
    total = 0
    for x in range(isqrt(n) + 1):
        w = 1 if x == 0 else 2
        total += w * _fast_r2(n - x * x)
    return total


def is_sum_three_squares(n: int) -> bool:
    """Three-square criterion: n is not of the form 4^a(8b+7)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    while n % 4 == 0 and n > 0:
        n //= 4
    return n % 8 != 7


@dataclass(frozen=True)
class Discriminant:
    """A negative discriminant D = conductor^2 * fundamental part."""

    D: int
    is_fundamental: bool
    conductor: int

    @property
    def fundamental_part(self) -> int:
        return self.D // (self.conductor * self.conductor)

    @classmethod
    def of(cls, d: int) -> "Discriminant":
        if d >= 0:
            raise ValueError("only negative discriminants are supported")
        if d % 4 not in (0, 1):
            raise ValueError("a discriminant must be 0 or 1 mod 4")
        kernel = factorize(-d).squarefree_kernel
        d0 = -kernel
        fund = d0 if d0 % 4 == 1 else 4 * d0
        conductor = isqrt(d // fund)
        return cls(d, conductor == 1, conductor)


def class_number(d) -> int:
    """h(d): reduced primitive forms ax^2+bxy+cy^2 of discriminant d < 0.

    Reduction convention: |b| <= a <= c with b >= 0 whenever |b| = a
    or a = c.
    """
    if isinstance(d, Discriminant):
        d = d.D
    if d >= 0:
        raise ValueError("class_number requires d < 0")
    if d % 4 not in (0, 1):
        raise ValueError("a discriminant must be 0 or 1 mod 4")
    count = 0
    for a in range(1, isqrt(-d // 3) + 1):
        for b in range(-a, a + 1):
            if (b - d) % 2:
                continue
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and (abs(b) == a or a == c):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) == 1:
                count += 1
    return count


def chi_fundamental(D: int, p: int) -> int:
    """Quadratic character attached to the fundamental discriminant D, at p."""
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    if D % p == 0:
        return 0
    return legendre_symbol(D, p)


@dataclass(frozen=True)
class LValue:
    """L(1, chi_d) = rational * pi / sqrt(|fundamental|)."""

    d: int
    fundamental: int
    rational: Fraction

    @property
    def value(self) -> float:
        return float(self.rational) * math.pi / math.sqrt(-self.fundamental)


def l_value_quadratic(d: int) -> LValue:
    """Exact L(1, chi_d) for d < 0, d = 0 or 1 mod 4.

    Uses the class number formula at the fundamental discriminant D* of d,
    then strips the Euler factors at primes dividing d but not D*:

        L(1, chi_d) = L(1, chi_D*) * prod_{p | d, p !| D*} (1 - chi_D*(p)/p)
    """
    if d >= 0:
        raise ValueError("only d < 0 is supported")
    if d % 4 not in (0, 1):
        raise ValueError("chi_d is a quadratic character only for d = 0,1 mod 4")
    dstar = Discriminant.of(d).fundamental_part
    h = class_number(dstar)
    w = 6 if dstar == -3 else 4 if dstar == -4 else 2
    rat = Fraction(2 * h, w)
    for p, _ in factorize(-d).factors:
        if dstar % p != 0:
            rat *= 1 - Fraction(chi_fundamental(dstar, p), p)
    return LValue(d, dstar, rat)


def r3_exact_analytic(n: int) -> int:
    """r_3(n) for square-free n != 7 mod 8 via the L-value route.

    (16/pi) sqrt(n) L(1, chi_{-4n}) when n = 3 mod 8, else (24/pi) sqrt(n)
    L(1, chi_{-4n}); the pi and the square roots cancel exactly because the
    fundamental discriminant of -4n is -n or -4n.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n % 8 == 7:
        raise ValueError("no representation for n = 7 mod 8")
    if not is_squarefree(n):
        raise ValueError("analytic formula implemented for square-free n only")
    lv = l_value_quadratic(-4 * n)
    absd = -lv.fundamental
    if absd == n:
        root = Fraction(1)
    elif absd == 4 * n:
        root = Fraction(1, 2)
    else:  # unreachable for square-free n
        raise AssertionError("unexpected fundamental discriminant")
    mult = 16 if n % 8 == 3 else 24
    exact = mult * lv.rational * root
    if exact.denominator != 1:
        raise AssertionError("analytic r_3 did not reduce to an integer")
    return int(exact)
