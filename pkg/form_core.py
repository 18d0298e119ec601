"""Exact integer and p-adic primitives shared by every other module.

Holds the two value types the engine passes around: ``TriForm`` for a
primitive ternary triangular form and ``DiagLattice`` for the diagonal
quadratic lattice it is tested against.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterator, List, Tuple

from sympy import isprime, prime, primefactors
from sympy.functions.combinatorial.numbers import legendre_symbol

logger = logging.getLogger(__name__)

INT64_LIMIT = 2 ** 63


class PrimitivityError(ValueError):
    """Raised when a triple with a common factor is passed where a primitive form is required."""


def checked_int(value: int) -> int:
    """Return ``value`` unchanged, aborting if it leaves the signed 64-bit range."""
    if not -INT64_LIMIT < value < INT64_LIMIT:
        raise OverflowError(f"integer {value} exceeds the 64-bit working range")
    return value


def require_odd_prime(p: int) -> None:
    if p == 2:
        raise ValueError("p = 2 is never decided here; the dyadic case is reduced away")
    if p < 3 or not isprime(p):
        raise ValueError(f"p must be an odd prime, got {p}")


def valuation(n: int, p: int) -> Tuple[int, int]:
    """Split ``n`` as ``p**v * u`` with ``p`` not dividing ``u``.

    Args:
        n: Nonzero integer; the sign stays with the unit part.
        p: Odd prime.

    Returns:
        Tuple ``(v, u)``.
    """
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def unit_part(n: int, p: int) -> int:
    return valuation(n, p)[1]


@lru_cache(maxsize=65536)
def _legendre_residue(residue: int, p: int) -> int:
    return int(legendre_symbol(residue, p))


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) in {-1, 0, 1}."""
    return _legendre_residue(a % p, p)


@lru_cache(maxsize=None)
def nonresidue(p: int) -> int:
    """Least positive quadratic nonresidue mod p, the fixed representative of the nonsquare unit class."""
    require_odd_prime(p)
    d = 2
    while legendre(d, p) != -1:
        d += 1
    return d


def hilbert(a: int, b: int, p: int) -> int:
    """Hilbert symbol (a, b)_p at an odd prime."""
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    alpha, u = valuation(a, p)
    beta, w = valuation(b, p)
    alpha %= 2
    beta %= 2
    value = 1
    if alpha and beta:
        value *= legendre(-1, p)
    if beta:
        value *= legendre(u, p)
    if alpha:
        value *= legendre(w, p)
    return value


def odd_prime(k: int) -> int:
    """The k-th odd prime: odd_prime(1) = 3, odd_prime(2) = 5, ..."""
    if k < 1:
        raise ValueError("odd primes are indexed from 1")
    return int(prime(k + 1))


def odd_prime_divisors(n: int) -> List[int]:
    return [int(q) for q in primefactors(abs(n)) if q != 2]


@dataclass(frozen=True, order=True)
class DiagLattice:
    """Diagonal ternary lattice <a, b, c>, stored with coefficients ascending."""
    coeffs: Tuple[int, int, int]

    def __post_init__(self):
        if len(self.coeffs) != 3:
            raise ValueError("a diagonal ternary lattice has exactly three coefficients")
        if min(self.coeffs) < 1:
            raise ValueError(f"coefficients must be positive, got {self.coeffs}")
        object.__setattr__(self, "coeffs", tuple(sorted(checked_int(c) for c in self.coeffs)))

    @classmethod
    def of(cls, *coeffs: int) -> "DiagLattice":
        return cls(tuple(coeffs))

    @property
    def primitive(self) -> bool:
        return gcd(*self.coeffs) == 1

    def discriminant(self) -> int:
        a, b, c = self.coeffs
        return checked_int(a * b * c)

    def valuations(self, p: int) -> Tuple[int, int, int]:
        return tuple(valuation(c, p)[0] for c in self.coeffs)

    def primitivized(self) -> "DiagLattice":
        g = gcd(*self.coeffs)
        return DiagLattice(tuple(c // g for c in self.coeffs))

    def __iter__(self) -> Iterator[int]:
        return iter(self.coeffs)

    def __str__(self) -> str:
        return "<{},{},{}>".format(*self.coeffs)


@dataclass(frozen=True, order=True)
class TriForm:
    """Primitive ternary triangular form aT_x + bT_y + cT_z with a <= b <= c."""
    a: int
    b: int
    c: int

    def __post_init__(self):
        if not 1 <= self.a <= self.b <= self.c:
            raise ValueError(f"TriForm coefficients must be positive and sorted, got {self.as_tuple()}")
        if gcd(self.a, self.b, self.c) != 1:
            raise PrimitivityError(f"Delta{self.as_tuple()} is not primitive")

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def discriminant(self) -> int:
        return checked_int(self.a * self.b * self.c)

    def shift(self) -> int:
        return self.a + self.b + self.c

    def target(self, n: int) -> int:
        """s_n = 8n + a + b + c, the integer the lattice has to reach with all-odd coordinates."""
        return checked_int(8 * n + self.shift())

    def lattice(self) -> DiagLattice:
        return DiagLattice(self.as_tuple())

    def __str__(self) -> str:
        return "Delta({},{},{})".format(self.a, self.b, self.c)


def canonical_triform(a: int, b: int, c: int) -> TriForm:
    """Sort a positive triple into a TriForm; non-primitive triples are rejected, never divided."""
    if min(a, b, c) < 1:
        raise ValueError(f"coefficients must be positive, got {(a, b, c)}")
    if gcd(a, b, c) != 1:
        raise PrimitivityError(f"Delta{(a, b, c)} is not primitive (gcd {gcd(a, b, c)})")
    x, y, z = sorted(checked_int(v) for v in (a, b, c))
    return TriForm(x, y, z)
