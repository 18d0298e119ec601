"""Counting bounds for locally represented values along progressions 8n + const.

The functions here count how many n in [1, i] can land in the excluded
classes of an anisotropic prime r_j, bound that count digit-wise (a_ij),
and turn the bounds into guaranteed numbers of locally represented n.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd, isqrt, prod
from typing import Dict, List, Sequence, Tuple

from sympy import primerange
from sympy.ntheory import digits

from form_core import DiagLattice, odd_prime, require_odd_prime, valuation
from golden_tables import TABLE1
from local_solver import (
    NONSQUARE,
    SQUARE,
    decide_zp,
    decide_zp_binary,
    in_excluded_class,
    is_anisotropic,
    is_p_stable,
)

logger = logging.getLogger(__name__)


class WitnessNotFoundError(RuntimeError):
    """A search that a counting lemma guarantees to succeed came back empty."""


@dataclass(frozen=True)
class DigitExpansion:
    i: int
    r: int
    digits: Tuple[int, ...]  # b_0, b_1, ..., b_{e-1}

    @property
    def e(self) -> int:
        return len(self.digits)

    @property
    def delta(self) -> int:
        return (self.e + 1) // 2

    def digit(self, nu: int) -> int:
        return self.digits[nu] if nu < self.e else 0


@dataclass(frozen=True)
class BoundRow:
    i: int
    values: Tuple[int, ...]


def digit_expansion(i: int, r: int) -> DigitExpansion:
    if i < 1:
        raise ValueError("i must be positive")
    # sympy returns [base, most significant, ..., least significant]
    return DigitExpansion(i, r, tuple(reversed(digits(i, r)[1:])))


def epsilon_ij(i: int, j: int, k: int) -> int:
    return 0 if i % odd_prime(j) ** (2 * k - 1) == 0 else 1


def psi_ij(i: int, j: int, k: int) -> int:
    r = odd_prime(j)
    expansion = digit_expansion(i, r)
    e, delta = expansion.e, expansion.delta
    if not 1 <= k <= delta:
        raise ValueError(f"k must lie in [1, {delta}] for i={i}, j={j}")
    if k < (e + 1) // 2:
        return min(expansion.digit(2 * k - 1) + epsilon_ij(i, j, k), (r - 1) // 2)
    if e == 2 * delta:
        return min(expansion.digit(2 * delta - 1) + epsilon_ij(i, j, delta), (r + 1) // 2)
    return 1


def a_ij(i: int, j: int) -> int:
    """Digit-wise upper bound on how many of n = 1..i fall into the excluded classes at r_j."""
    r = odd_prime(j)
    delta = digit_expansion(i, r).delta
    half = (r - 1) // 2
    return sum(half * (i // r ** (2 * k)) + psi_ij(i, j, k) for k in range(1, delta + 1))


def b_ij(i: int, j: int, s: int) -> int:
    if s < 1:
        raise ValueError("s must be positive")
    return max(a_ij(i, j), -(-i // odd_prime(s)))


def locally_rep_lower_bound(i: int, s: int) -> int:
    """Guaranteed count of locally represented n in [1, i] when the anisotropic primes
    avoid the first s - 1 odd primes except as accounted for by b_ij(s); may be <= 0."""
    return i - sum(b_ij(i, j, s) for j in range(1, s))


def psi_exact(u: int, v: int, i: int, j: int) -> int:
    """Exact count of n in [1, i] with un + v in an excluded class at r_j, maximised over the class of eps."""
    r = odd_prime(j)
    if gcd(u, r) != 1:
        raise ValueError(f"u={u} must be coprime to r_{j}={r}")
    best = 0
    for eps_class in (SQUARE, NONSQUARE):
        hits = sum(1 for n in range(1, i + 1) if in_excluded_class(u * n + v, r, eps_class))
        best = max(best, hits)
    return best


def psi_crude_bound(i: int, j: int) -> int:
    r = odd_prime(j)
    return (r + 1) // 2 * -(-i // (r * r))


def table1_rows(rows: Sequence[int] = tuple(TABLE1), columns: int = 11) -> List[BoundRow]:
    return [BoundRow(i, tuple(a_ij(i, j) for j in range(1, columns + 1))) for i in rows]


def table1_diff() -> Dict[Tuple[int, int], Tuple[int, int]]:
    """(i, j) -> (computed, printed) for every cell that disagrees with the golden table."""
    diff = {}
    for row in table1_rows():
        for j, (got, want) in enumerate(zip(row.values, TABLE1[row.i]), start=1):
            if got != want:
                diff[(row.i, j)] = (got, want)
    return diff


def coprime_progression_min(u: int, v: int, primes: Sequence[int]) -> int:
    """Least n >= 0 with un + v coprime to every prime in ``primes``."""
    modulus = prod(primes)
    if gcd(u, modulus) != 1:
        raise ValueError("u must be coprime to the primes")
    n = 0
    while gcd(u * n + v, modulus) != 1:
        n += 1
    return n


def progression_bound(s: int) -> int:
    """Any s distinct odd primes leave a coprime term un + v with n < (s + 2) 2^(s - 1)."""
    return (s + 2) * 2 ** (s - 1)


def small_progression_bound(s: int) -> int:
    """With s below the least prime, some n <= s already works."""
    return s


def find_g(L: DiagLattice, p: int, d: int) -> int:
    """Least g in (0, p^2) such that, with <a, b> the unit part of L and c its p-divisible coefficient,
    dg + a + b is not represented by <a, b> over Z_p, dg + a + b + c is represented by L, and
    both have p-valuation at most 1."""
    require_odd_prime(p)
    if p < 5:
        raise ValueError("find_g needs p >= 5")
    if d % p == 0:
        raise ValueError(f"d={d} must be coprime to p={p}")
    if not (is_p_stable(L, p).p_stable and is_anisotropic(L, p)):
        raise ValueError(f"{L} must be p-stable and anisotropic at p={p}")
    a, b, c = sorted(L.coeffs, key=lambda x: (x % p == 0, x))
    for g in range(1, p * p):
        binary_target = d * g + a + b
        full_target = binary_target + c
        if max(valuation(binary_target, p)[0], valuation(full_target, p)[0]) > 1:
            continue
        if decide_zp_binary(a, b, binary_target, p):
            continue
        if decide_zp(L, full_target, p).represented:
            return g
    raise WitnessNotFoundError(f"no g below {p * p} for {L}, p={p}, d={d}")


def u_lower_bound(a: int, k: int) -> int:
    """Lower bound on the number of n < (k^2 - 1) a / 8 whose s_n is locally represented."""
    if k % 2 == 0 or k < 3:
        raise ValueError("k must be an odd integer >= 3")
    return locally_rep_lower_bound((k * k - 1) * a // 8 - 1, 8)


def shape_i_counting_excludes(l: int) -> bool:
    """For a missing prime l, the guaranteed locally represented count beats the all-odd count.

    Compares ceil(71 l / 450 - 11/2) with floor(sqrt(2l + 1/4)) exactly.
    """
    guaranteed = ceil(Fraction(71 * l, 450) - Fraction(11, 2))
    reachable = isqrt(8 * l + 1) // 2
    return guaranteed > reachable


def shape_i_prime_cutoff(l_max: int = 10000) -> int:
    """Least prime l0 such that every prime in [l0, l_max] passes shape_i_counting_excludes."""
    cutoff = None
    for l in primerange(3, l_max + 1):
        if shape_i_counting_excludes(int(l)):
            if cutoff is None:
                cutoff = int(l)
        else:
            cutoff = None
    if cutoff is None:
        raise WitnessNotFoundError(f"no cutoff below {l_max}")
    return cutoff
