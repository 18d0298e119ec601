"""Watson lambda_p transformations, stabilization chains and their inverse images."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from form_core import (
    DiagLattice,
    TriForm,
    canonical_triform,
    checked_int,
    legendre,
    odd_prime_divisors,
    require_odd_prime,
    valuation,
)
from local_solver import is_p_stable

logger = logging.getLogger(__name__)

BOTH_SCALED = "both_scaled"
UNIT_PAIR_ANISOTROPIC = "unit_pair_anisotropic"
IDENTITY = "identity"
P_STABLE = "p_stable"

SHAPE_I = "i"
SHAPE_II = "ii"


class StabilizationError(RuntimeError):
    """A non-stable form matched neither descent hypothesis."""


@dataclass(frozen=True)
class LambdaStep:
    p: int
    before: TriForm
    after: TriForm
    rule: str


@dataclass
class PreimageSet:
    base: TriForm
    p: int
    row: str
    images: List[TriForm] = field(default_factory=list)


def lambda_p_lattice(L: DiagLattice, p: int) -> DiagLattice:
    """lambda_p(L) for a diagonal lattice.

    Lambda_p(L) keeps the coordinates of p-divisible coefficients and forces
    the others into pZ, so each unit coefficient picks up p^2; the result is
    then scaled back to a primitive lattice. For <a, p^m b, p^n c> this gives
    L itself when m = n = 0, <pa, b, p^(n-1) c> when 1 = m <= n and
    <a, p^(m-2) b, p^(n-2) c> when 2 <= m <= n.
    """
    require_odd_prime(p)
    scaled = tuple(checked_int(c * p * p) if c % p else c for c in L.coeffs)
    return DiagLattice(scaled).primitivized()


def lambda_p_tri(F: TriForm, p: int) -> TriForm:
    return canonical_triform(*lambda_p_lattice(F.lattice(), p).coeffs)


def _normal_form(F: TriForm, p: int) -> Tuple[Tuple[int, int, int], Tuple[int, int, int]]:
    """Units (a, b, c) and exponents (0, r, s) with F = <a, p^r b, p^s c>."""
    ordered = sorted((valuation(c, p)[0], c) for c in F.as_tuple())
    exps = tuple(e for e, _ in ordered)
    units = tuple(valuation(c, p)[1] for _, c in ordered)
    if exps[0] != 0:
        raise ValueError(f"{F} has no p-adic unit coefficient at p={p}")
    return units, exps


def descent_rule(F: TriForm, p: int) -> str:
    """Which descent hypothesis licenses lambda_p on a form that is not p-stable."""
    (a, b, _), (_, r, s) = _normal_form(F, p)
    if r == 0 and s == 0:
        return IDENTITY
    if r >= 1:
        return BOTH_SCALED
    if legendre(-a * b, p) == -1 and s >= 2:
        return UNIT_PAIR_ANISOTROPIC
    raise StabilizationError(f"{F} at p={p}: pattern (0,{r},{s}) matches no descent hypothesis")


def lambda_rule(F: TriForm, p: int) -> str:
    """Label for a single lambda_p step; unlike descent_rule it also accepts p-stable forms."""
    require_odd_prime(p)
    _, (_, r, s) = _normal_form(F, p)
    if r == 0 and s == 0:
        return IDENTITY
    if is_p_stable(F.lattice(), p).p_stable:
        return P_STABLE
    return descent_rule(F, p)


def stabilize(F: TriForm) -> Tuple[TriForm, List[LambdaStep]]:
    """Apply lambda_p at the least odd prime where the form is not p-stable until it is stable."""
    steps: List[LambdaStep] = []
    current = F
    while True:
        unstable = [p for p in odd_prime_divisors(current.discriminant())
                    if not is_p_stable(current.lattice(), p).p_stable]
        if not unstable:
            return current, steps
        p = unstable[0]
        rule = descent_rule(current, p)
        if rule == IDENTITY:
            raise StabilizationError(f"{current} is unimodular at p={p} yet reported unstable")
        after = lambda_p_tri(current, p)
        before_ord = valuation(current.discriminant(), p)[0]
        if valuation(after.discriminant(), p)[0] >= before_ord:
            raise StabilizationError(f"lambda_{p} did not lower ord_p of the discriminant of {current}")
        logger.debug(f"stabilize: {current} -> {after} via lambda_{p} ({rule})")
        steps.append(LambdaStep(p, current, after, rule))
        current = after


def table2_row(F: TriForm, p: int) -> str:
    _, (_, r, s) = _normal_form(F, p)
    if r == 0:
        return f"r=0,s={s}" if s < 2 else "r=0,s>=2"
    if r == 1:
        return "r=1,s=1" if s == 1 else "r=1,s>=2"
    return "r>=2"


def _inverse_row(units: Tuple[int, int, int], r: int, s: int, p: int) -> List[Tuple[int, int, int]]:
    a, b, c = units
    q = p * p
    if r == 0 and s == 0:
        return [(q * a, b, c), (a, q * b, c), (a, b, q * c),
                (q * a, q * b, c), (q * a, b, q * c), (a, q * b, q * c)]
    if r == 0 and s == 1:
        return [(p * a, p * b, c), (a, q * b, p ** 3 * c), (q * a, b, p ** 3 * c), (a, b, p ** 3 * c)]
    if r == 0:
        return [(a, q * b, p ** (s + 2) * c), (q * a, b, p ** (s + 2) * c), (a, b, p ** (s + 2) * c)]
    if r == 1 and s == 1:
        return [(p * a, b, q * c), (p * a, q * b, c), (p * a, b, c), (a, p ** 3 * b, p ** 3 * c)]
    if r == 1:
        return [(p * a, b, p ** (s + 1) * c), (a, p ** 3 * b, p ** (s + 2) * c)]
    return [(a, p ** (r + 2) * b, p ** (s + 2) * c)]


def preimages(F: TriForm, p: int) -> PreimageSet:
    """All primitive forms G with lambda_p(G) = F, one inverse-image row per (r, s) pattern."""
    require_odd_prime(p)
    units, (_, r, s) = _normal_form(F, p)
    images = set()
    for triple in _inverse_row(units, r, s, p):
        image = canonical_triform(*triple)
        if lambda_p_tri(image, p) != F:
            logger.warning(f"preimage {image} of {F} at p={p} fails the round trip; dropped")
            continue
        images.add(image)
    return PreimageSet(F, p, table2_row(F, p), sorted(images))


def missing_prime_candidates(S: TriForm, l: int, shapes: Optional[Sequence[str]] = None) -> List[TriForm]:
    """Forms over the stable form S that would make l a missing prime.

    Shape (i) scales two coefficients by l^2. Shape (ii) scales one, and is
    only produced when the untouched pair satisfies (-ab/l) = -1.
    """
    require_odd_prime(l)
    if l < 11:
        raise ValueError(f"missing-prime candidates are generated for l >= 11, got {l}")
    if S.discriminant() % l == 0:
        raise ValueError(f"{l} divides the discriminant of {S}")
    shapes = (SHAPE_I, SHAPE_II) if shapes is None else tuple(shapes)
    coeffs = S.as_tuple()
    q = l * l
    found = set()
    for idx in range(3):
        others = [coeffs[j] for j in range(3) if j != idx]
        if SHAPE_I in shapes:
            found.add(canonical_triform(coeffs[idx], q * others[0], q * others[1]))
        if SHAPE_II in shapes and legendre(-others[0] * others[1], l) == -1:
            found.add(canonical_triform(others[0], others[1], q * coeffs[idx]))
    return sorted(found)
