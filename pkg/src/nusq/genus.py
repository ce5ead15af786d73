"""Analytic side of the determinant-625 genus {f, g}.

Local densities, the closed-form genus representation count
b_n sqrt(n) L(1, chi_{-100n}) carried as an exact rational, the
Eisenstein/cusp decomposition phi = (theta_g - theta_f)/2, and the
weight-2 companion series built from point counts of the curve

    y^2 + x y + y = x^3 + x^2 - 3x + 1

over prime fields.  All identity checks are exact; floats are views.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, sqrt
from typing import NamedTuple

import numpy as np

from . import ternary
from .arith import (
    _spf_table,
    chi_fundamental,
    factorize,
    is_prime,
    is_squarefree,
    l_value_quadratic,
    legendre_symbol,
)
from .qseries import QSeries

# a1, a2, a3, a4, a6 of the Weierstrass equation
CURVE = (1, 1, 1, -3, 1)

# coefficients at the bad primes, pinned to the series q + q^2 - q^3 + ...
A2_BAD = 1
A5_BAD = 0

_f_lattice = None
_g_lattice = None


def _forms():
    global _f_lattice, _g_lattice
    if _f_lattice is None:
        _f_lattice = ternary.form_f()
        _g_lattice = ternary.form_g()
    return _f_lattice, _g_lattice


def _check_eligible(n: int) -> None:
    if n < 1:
        raise ValueError("n must be positive")
    if n % 8 == 7 or n % 5 not in (2, 3):
        raise ValueError(f"n={n} is not in the residue classes of the genus")
    if not is_squarefree(n):
        raise ValueError(f"n={n} must be square-free")


@dataclass(frozen=True)
class LocalDensityProfile:
    """Local density factors at the primes where they are not generic."""

    n: int
    factors: tuple[tuple[int, Fraction], ...]


@dataclass(frozen=True)
class EllipticTrace:
    p: int
    a_p: int

    def __post_init__(self):
        if self.a_p * self.a_p > 4 * self.p:
            raise ValueError("Hasse bound violated")


def alpha_p(n: int, p: int) -> Fraction:
    """Local density at p for square-free eligible n."""
    _check_eligible(n)
    if not is_prime(p):
        raise ValueError("p must be prime")
    if p == 5:
        return Fraction(2)
    if p == 2:
        return Fraction(1) if n % 8 == 3 else Fraction(3, 2)
    if n % p == 0:
        return 1 - Fraction(1, p * p)
    return 1 + Fraction(legendre_symbol(-n, p), p)


def local_density_profile(n: int) -> LocalDensityProfile:
    _check_eligible(n)
    ps = sorted({2, 5} | {p for p, _ in factorize(n).factors})
    return LocalDensityProfile(n, tuple((p, alpha_p(n, p)) for p in ps))


class GenusCount(NamedTuple):
    exact: Fraction
    value: float


def r_gen_f(n: int) -> GenusCount:
    """Genus-average representation count b_n sqrt(n) L(1, chi_{-100n}).

    b_n = 4/(3 pi) when n = 3 mod 8, else 2/pi.  The pi cancels against
    the class number formula and sqrt(n)/sqrt(|D*|) is 1 or 1/2, so the
    result is an exact rational.
    """
    _check_eligible(n)
    lv = l_value_quadratic(-100 * n)
    absd = -lv.fundamental
    if absd == n:
        root = Fraction(1)
    elif absd == 4 * n:
        root = Fraction(1, 2)
    else:
        raise AssertionError("unexpected fundamental discriminant")
    b = Fraction(4, 3) if n % 8 == 3 else Fraction(2)
    exact = b * lv.rational * root
    return GenusCount(exact, float(exact))


def weighted_genus_average(n: int) -> Fraction:
    """(2/5) r(n, f) + (3/5) r(n, g) by direct enumeration."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    f, g = _forms()
    return Fraction(2, 5) * ternary.rep_count(f, n) + Fraction(3, 5) * ternary.rep_count(g, n)


def phi_coeff(n: int) -> int:
    """Cusp form coefficient a(n) = (r(n,g) - r(n,f)) / 2."""
    if n < 1:
        raise ValueError("n must be positive")
    f, g = _forms()
    diff = ternary.rep_count(g, n) - ternary.rep_count(f, n)
    if diff % 2:
        raise AssertionError("theta difference must be even")
    return diff // 2


def phi_coeffs(n_max: int) -> QSeries:
    """a(0..n_max) from one theta sweep per form."""
    f, g = _forms()
    tf = ternary.theta_coeffs(f, n_max).coeffs
    tg = ternary.theta_coeffs(g, n_max).coeffs
    diff = tg - tf
    if (diff % 2).any():
        raise AssertionError("theta difference must be even")
    return QSeries(diff // 2)


def elliptic_point_count(p: int) -> int:
    """#E(F_p) for the Weierstrass equation, counting the point at infinity
    (and, at bad primes, the singular point) by exhaustive evaluation."""
    if not is_prime(p):
        raise ValueError("p must be prime")
    a1, a2, a3, a4, a6 = CURVE
    if p == 2:
        count = 1
        for x in range(2):
            for y in range(2):
                lhs = y * y + a1 * x * y + a3 * y
                rhs = x**3 + a2 * x * x + a4 * x + a6
                if (lhs - rhs) % 2 == 0:
                    count += 1
        return count
    x = np.arange(p, dtype=np.int64)
    rhs = (x**3 + a2 * x * x + a4 * x + a6) % p
    t = (a1 * x + a3) % p
    disc = (t * t + 4 * rhs) % p
    qr = np.zeros(p, dtype=bool)
    qr[(x * x) % p] = True
    per_x = np.where(disc == 0, 1, np.where(qr[disc], 2, 0))
    return int(per_x.sum()) + 1


def elliptic_ap(p: int) -> EllipticTrace:
    """Trace a_p = p + 1 - #E(F_p)."""
    return EllipticTrace(p, p + 1 - elliptic_point_count(p))


def _ap(p: int) -> int:
    if p == 2:
        return A2_BAD
    if p == 5:
        return A5_BAD
    return elliptic_ap(p).a_p


def shimura_coeffs(n_max: int) -> QSeries:
    """Multiplicative weight-2 coefficients A(n) for n <= n_max.

    A(1) = 1, A(p) = a_p; good primes follow the Hecke recursion
    A(p^{k+1}) = A(p) A(p^k) - p A(p^{k-1}), the primes dividing 50 use
    A(p^k) = A(p)^k, and A is multiplicative across coprime parts.
    """
    if not 1 <= n_max <= 10**5:
        raise ValueError("n_max must be in 1..100000")
    spf = _spf_table(max(n_max, 10))
    coeffs = np.zeros(n_max + 1, dtype=np.int64)
    coeffs[1] = 1
    power_cache: dict[tuple[int, int], int] = {}

    def prime_power(p: int, k: int) -> int:
        if k == 0:
            return 1
        key = (p, k)
        if key not in power_cache:
            ap = _ap(p)
            if p in (2, 5):
                power_cache[key] = ap**k
            else:
                power_cache[key] = ap * prime_power(p, k - 1) - p * prime_power(p, k - 2)
        return power_cache[key]

    for n in range(2, n_max + 1):
        p = int(spf[n])
        k = 0
        rest = n
        while rest % p == 0:
            rest //= p
            k += 1
        if rest == 1:
            coeffs[n] = prime_power(p, k)
        else:
            coeffs[n] = prime_power(p, k) * coeffs[rest]
    return QSeries(coeffs)


# square-class representatives keyed by (ord_2(n), odd part mod 8)
_WALDSPURGER_REPS = {
    (0, 1): 17,
    (0, 3): 3,
    (0, 5): 13,
    (1, 1): 2,
    (1, 3): 22,
    (1, 5): 42,
    (1, 7): 62,
}


def waldspurger_representative(n: int) -> int:
    """The unique m in {2,3,13,17,22,42,62} with n/m a square in Q_2 and Q_5.

    For square-free eligible n the square class at 2 is determined by
    ord_2(n) and the odd part mod 8, and at 5 both admissible residues
    (2 and 3) already lie in one class.
    """
    _check_eligible(n)
    v2 = 1 if n % 2 == 0 else 0
    odd = n >> v2
    return _WALDSPURGER_REPS[(v2, odd % 8)]


def genus_table(n_max: int) -> list[dict]:
    """Rows n, r_f, r_g, genus_avg_exact, genus_avg_analytic, phi."""
    f, g = _forms()
    tf = ternary.theta_coeffs(f, n_max).coeffs
    tg = ternary.theta_coeffs(g, n_max).coeffs
    rows = []
    for n in range(1, n_max + 1):
        rf, rg = int(tf[n]), int(tg[n])
        avg = Fraction(2, 5) * rf + Fraction(3, 5) * rg
        analytic = ""
        if n % 8 != 7 and n % 5 in (2, 3) and is_squarefree(n):
            analytic = str(r_gen_f(n).exact)
        rows.append(
            {
                "n": n,
                "r_f": rf,
                "r_g": rg,
                "genus_avg_exact": str(avg),
                "genus_avg_analytic": analytic,
                "phi": (rg - rf) // 2,
            }
        )
    return rows
