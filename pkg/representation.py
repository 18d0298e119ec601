"""Global representation counts over Z for diagonal binary and ternary forms.

Counts are signed and include zeros: every nonzero coordinate contributes
both signs. Solutions are bucketed by coordinate parity so that the
all-odd counts (triangular representations) fall out of the same pass.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from math import isqrt
from typing import Dict, Tuple

import numpy as np

from form_core import DiagLattice, TriForm

logger = logging.getLogger(__name__)

ParityMask = Tuple[int, ...]
ALL_ODD: ParityMask = (1, 1, 1)
TERNARY_MASKS = tuple(product((0, 1), repeat=3))
BINARY_MASKS = tuple(product((0, 1), repeat=2))


@dataclass
class CountResult:
    """R(M, f) split by coordinate parities; ``total`` is r(M, f)."""
    total: int = 0
    by_parity: Dict[ParityMask, int] = field(default_factory=dict)

    def r(self, mask: ParityMask) -> int:
        return self.by_parity.get(tuple(mask), 0)

    @property
    def all_odd(self) -> int:
        return self.r((1,) * len(next(iter(self.by_parity))))


def _sqrt_exact(value: int) -> int:
    """Nonnegative square root of ``value`` or -1 when it is not a perfect square."""
    if value < 0:
        return -1
    root = isqrt(value)
    return root if root * root == value else -1


def _signs(k: int) -> int:
    return 2 if k else 1


def count_binary(M: int, a: int, b: int) -> CountResult:
    """Count (x, y) in Z^2 with a x^2 + b y^2 = M, by parity of (x, y)."""
    if M < 0:
        raise ValueError("M must be nonnegative")
    by_parity = {mask: 0 for mask in BINARY_MASKS}
    y = 0
    while b * y * y <= M:
        rest = M - b * y * y
        if rest % a == 0:
            x = _sqrt_exact(rest // a)
            if x >= 0:
                by_parity[(x & 1, y & 1)] += _signs(x) * _signs(y)
        y += 1
    return CountResult(sum(by_parity.values()), by_parity)


def represented_by_binary(M: int, a: int, b: int) -> bool:
    return count_binary(M, a, b).total > 0


def count_ternary(M: int, L: DiagLattice) -> CountResult:
    """Count (x, y, z) in Z^3 with a x^2 + b y^2 + c z^2 = M for L = <a, b, c>.

    The outer loop runs over the largest coefficient so the inner ranges stay short.
    """
    if M < 0:
        raise ValueError("M must be nonnegative")
    a, b, c = L.coeffs
    by_parity = {mask: 0 for mask in TERNARY_MASKS}
    z = 0
    while c * z * z <= M:
        rest_z = M - c * z * z
        y = 0
        while b * y * y <= rest_z:
            rest = rest_z - b * y * y
            if rest % a == 0:
                x = _sqrt_exact(rest // a)
                if x >= 0:
                    by_parity[(x & 1, y & 1, z & 1)] += _signs(x) * _signs(y) * _signs(z)
            y += 1
        z += 1
    return CountResult(sum(by_parity.values()), by_parity)


def count_all_odd(M: int, L: DiagLattice) -> int:
    """All-odd part of count_ternary without visiting even coordinates."""
    a, b, c = L.coeffs
    count = 0
    z = 1
    while c * z * z <= M:
        rest_z = M - c * z * z
        y = 1
        while b * y * y <= rest_z:
            rest = rest_z - b * y * y
            if rest % a == 0:
                x = _sqrt_exact(rest // a)
                if x > 0 and x & 1:
                    count += 8
            y += 2
        z += 2
    return count


def exists_all_odd(M: int, L: DiagLattice) -> bool:
    """True iff M = a x^2 + b y^2 + c z^2 with x, y, z all odd; stops at the first witness."""
    if M < 0:
        raise ValueError("M must be nonnegative")
    a, b, c = L.coeffs
    z = 1
    while c * z * z <= M:
        rest_z = M - c * z * z
        y = 1
        while b * y * y <= rest_z:
            rest = rest_z - b * y * y
            if rest % a == 0:
                x = _sqrt_exact(rest // a)
                if x > 0 and x & 1:
                    return True
            y += 2
        z += 2
    return False


def triangular_count(n: int, F: TriForm) -> int:
    """t(n, F): number of (x, y, z) in Z^3 with a T_x + b T_y + c T_z = n.

    Uses x -> 2x + 1, which maps solutions bijectively onto all-odd
    representations of 8n + a + b + c.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    return count_all_odd(F.target(n), F.lattice())


def _odd_squares(bound: int) -> np.ndarray:
    if bound < 1:
        return np.zeros(0, dtype=np.int64)
    odd = np.arange(1, isqrt(bound) + 1, 2, dtype=np.int64)
    return odd * odd


def all_odd_sieve(limit: int, L: DiagLattice) -> np.ndarray:
    """Boolean array ``hits`` with hits[M] true iff M <= limit has an all-odd representation by L."""
    a, b, c = L.coeffs
    hits = np.zeros(limit + 1, dtype=bool)
    if limit < a + b + c:
        return hits
    xs = a * _odd_squares((limit - b - c) // a)
    ys = b * _odd_squares((limit - a - c) // b)
    pairs = (xs[:, None] + ys[None, :]).ravel()
    pairs = pairs[pairs <= limit - c]
    binary = np.zeros(limit + 1, dtype=bool)
    binary[pairs] = True
    for z_term in c * _odd_squares((limit - a - b) // c):
        z_term = int(z_term)
        hits[z_term:] |= binary[: limit + 1 - z_term]
    logger.debug(f"all-odd sieve for {L} up to {limit}: {int(hits.sum())} hits")
    return hits
