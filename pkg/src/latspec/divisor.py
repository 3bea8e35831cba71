"""The divisor lattice (Z+, |, gcd, lcm) and the arithmetic functions on it."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .poset import FinitePoset, from_relation

EULER_GAMMA = 0.57721566490153286
ROBIN_OMEGA_CONSTANT = 1.3841
# 1.3841 * log(2), rounded as usually quoted
ROBIN_EXPONENT = 0.9594
MAX_INTEGER = 2**63 - 1


@lru_cache(maxsize=65536)
def factorize(k: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization by trial division, as ``((p, e), ...)`` with ``p`` ascending."""
    if not 1 <= k <= MAX_INTEGER:
        raise ValueError("expected 1 <= k <= 2**63 - 1, got %r" % (k,))
    out = []
    m = k
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def divisors(k: int) -> list[int]:
    ds = [1]
    for p, e in factorize(k):
        ds = [d * p**a for d in ds for a in range(e + 1)]
    return sorted(ds)


def mobius(k: int) -> int:
    fac = factorize(k)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def omega(k: int) -> int:
    return len(factorize(k))


def big_omega(k: int) -> int:
    return sum(e for _, e in factorize(k))


def tau(k: int) -> int:
    return math.prod(e + 1 for _, e in factorize(k))


def jordan_totient(k: int, alpha: int = 1) -> int:
    """``J_alpha(k) = k**alpha * prod over p | k of (1 - p**-alpha)``."""
    if alpha < 1:
        raise ValueError("Jordan totient needs a positive integer exponent")
    out = 1
    for p, e in factorize(k):
        out *= p ** (alpha * (e - 1)) * (p**alpha - 1)
    return out


def euler_phi(k: int) -> int:
    return jordan_totient(k, 1)


@dataclass(frozen=True)
class ArithmeticSummary:
    k: int
    phi: int
    tau: int
    omega: int
    big_omega: int

    def jordan(self, alpha: int) -> int:
        return jordan_totient(self.k, alpha)


def totients_and_counters(k: int) -> ArithmeticSummary:
    return ArithmeticSummary(k, euler_phi(k), tau(k), omega(k), big_omega(k))


def dirichlet_convolve(f: Callable[[int], object], g: Callable[[int], object], x: int) -> Fraction:
    return sum((Fraction(f(d)) * Fraction(g(x // d)) for d in divisors(x)), Fraction(0))


def factor_closure(S: Iterable[int]) -> list[int]:
    """All divisors of all members, ascending (ascending order is a linear extension of |)."""
    S = list(S)
    if not S or any(int(s) != s or s < 1 for s in S):
        raise ValueError("factor closure needs a nonempty set of positive integers")
    return sorted({d for s in S for d in divisors(int(s))})


def is_factor_closed(S: Sequence[int]) -> bool:
    members = set(S)
    return all(d in members for s in S for d in divisors(s))


def divisor_poset(S: Sequence[int]) -> FinitePoset:
    """``S`` (sorted ascending) ordered by divisibility; labels are the integers."""
    S = list(S)
    if S != sorted(set(S)):
        raise ValueError("integer set must be strictly increasing")
    return from_relation(S, lambda a, b: b % a == 0)


def robin_bound(x: float) -> float:
    """``x ** (0.9594 / log log x)``, an upper bound for ``2 ** omega(x)``."""
    if x <= 2:
        raise ValueError("Robin's bound is only defined for x > 2")
    return x ** (ROBIN_EXPONENT / math.log(math.log(x)))


@dataclass(frozen=True)
class MobiusRowBound:
    x: int
    exact_sum: int
    two_pow_omega: int
    two_sqrt: float
    robin_bound: float | None
    robin_applicable: bool


def mobius_row_bounds(S: Sequence[int], j: int) -> MobiusRowBound:
    """Bounds for ``sum_beta |mu(x_beta, x_j)|`` on a factor closed ``S``.

    ``robin_bound`` is evaluated at the largest element of ``S`` and is only
    flagged applicable once that element exceeds 70.
    """
    S = list(S)
    if not is_factor_closed(S):
        raise ValueError("Möbius row bounds need a factor closed set")
    x = S[j]
    exact = sum(abs(mobius(x // d)) for d in S if x % d == 0)
    xn = max(S)
    rb = robin_bound(xn) if xn > 2 else None
    return MobiusRowBound(x, exact, 2 ** omega(x), 2 * math.sqrt(x), rb, xn > 70)


@dataclass(frozen=True)
class TauSum:
    exact: int
    average_order: float


def tau_partial_sum(S: Sequence[int]) -> TauSum:
    """Exact ``sum tau(x_j)`` with the two leading terms of its average order.

    The ``O(sqrt(x_n))`` remainder of the asymptotic is unknown and not added.
    """
    S = list(S)
    xn = max(S)
    avg = xn * math.log(xn) + (2 * EULER_GAMMA - 1) * xn
    return TauSum(sum(tau(x) for x in S), avg)
