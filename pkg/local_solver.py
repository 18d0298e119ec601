"""Representability over Z_p (p odd) for diagonal lattices.

Two independent deciders live here. ``decide_zp`` follows a structural
recursion on coefficient valuations and Legendre classes; it is the one the
scans use. ``decide_zp_oracle`` searches residues for a Hensel-certified
solution and exists to cross-check the recursion. On top of them sit the
anisotropy test, p-stability, the excluded classes of a stable anisotropic
localisation and the ``locally_represented`` predicate for triangular forms.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from engine_config import SCAN_CONFIG
from form_core import (
    DiagLattice,
    TriForm,
    hilbert,
    legendre,
    nonresidue,
    odd_prime_divisors,
    require_odd_prime,
    valuation,
)

logger = logging.getLogger(__name__)

STRUCTURAL = "structural"
ORACLE = "oracle"

ISOTROPIC_PLANE = "isotropic_plane"
ANISOTROPIC_TIMES_P = "unit_binary_anisotropic_times_p"
UNSTABLE = "unstable"

SQUARE = "square"
NONSQUARE = "nonsquare"

# (valuation, Legendre class of the unit part) for one coefficient
Term = Tuple[int, int]


class OracleBudgetError(RuntimeError):
    """The residue search would exceed the configured work budget."""


@dataclass(frozen=True)
class LocalVerdict:
    p: int
    represented: bool
    method: str
    trace: Tuple[str, ...] = ()


@dataclass(frozen=True)
class PrimeStability:
    p: int
    p_stable: bool
    shape: str
    epsilon_class: Optional[str] = None


@dataclass
class StabilityProfile:
    form: DiagLattice
    anisotropic_odd_primes: List[int] = field(default_factory=list)
    T_prime: List[int] = field(default_factory=list)
    per_prime: Dict[int, PrimeStability] = field(default_factory=dict)

    @property
    def t(self) -> int:
        return len(self.anisotropic_odd_primes)

    @property
    def t_prime(self) -> int:
        return len(self.T_prime)

    @property
    def stable(self) -> bool:
        return all(entry.p_stable for entry in self.per_prime.values())


@dataclass(frozen=True)
class ExcludedClasses:
    """Non-represented p-adic integers p^(2w-1) * delta with delta * eps a nonsquare."""
    p: int
    epsilon_class: str

    def contains(self, m: int) -> bool:
        return in_excluded_class(m, self.p, self.epsilon_class)


def _terms(coeffs, p: int) -> Tuple[Term, ...]:
    terms = []
    for coeff in coeffs:
        e, unit = valuation(coeff, p)
        terms.append((e, legendre(unit, p)))
    return tuple(sorted(terms))


@lru_cache(maxsize=200000)
def _decide_terms(terms: Tuple[Term, ...], v: int, chi_u: int, minus_one: int) -> Tuple[bool, Tuple[str, ...]]:
    """Structural recursion on (valuation, class) data; returns the verdict and its steps."""
    if all(e >= 1 for e, _ in terms):
        if v == 0:
            return False, ("all coefficients divisible by p, unit target: not represented",)
        verdict, steps = _decide_terms(tuple(sorted((e - 1, chi) for e, chi in terms)), v - 1, chi_u, minus_one)
        return verdict, ("divide coefficients and target by p",) + steps

    units = [chi for e, chi in terms if e == 0]
    rest = [(e, chi) for e, chi in terms if e >= 1]
    if v == 0:
        if len(units) >= 2:
            return True, ("unit target, two unit coefficients: represented",)
        verdict = units[0] * chi_u == 1
        return verdict, (f"unit target, one unit coefficient: (alpha*u/p) = {units[0] * chi_u}",)

    if len(units) == 3:
        return True, ("unimodular ternary: isotropic, represented",)
    if len(units) == 2:
        if minus_one * units[0] * units[1] == 1:
            return True, ("unit pair with (-ab/p) = +1 spans a hyperbolic plane: represented",)
        if not rest:
            return v % 2 == 0, (f"anisotropic unit binary, ord_p(m) = {v}",)
        e, gamma = rest[0]
        if v % 2 == 0:
            return True, (f"anisotropic unit pair covers even ord_p(m) = {v}",)
        if e % 2 == 0 and e < v:
            return True, (f"third coefficient has even valuation {e} < {v}",)
        if e % 2 == 1 and e <= v and gamma * chi_u == 1:
            return True, (f"third coefficient p^{e}*gamma with (gamma*u/p) = +1",)
        return False, (f"odd ord_p(m) = {v} outside the reach of p^{e}*gamma: not represented",)

    alpha = units[0]
    lifted = tuple(sorted([(1, alpha)] + [(e - 1, chi) for e, chi in rest]))
    verdict, steps = _decide_terms(lifted, v - 1, chi_u, minus_one)
    return verdict, ("single unit coefficient: its coordinate is divisible by p",) + steps


def _decide(coeffs, m: int, p: int, trace: bool) -> LocalVerdict:
    require_odd_prime(p)
    if m <= 0:
        raise ValueError(f"target must be positive, got {m}")
    v, u = valuation(m, p)
    represented, steps = _decide_terms(_terms(coeffs, p), v, legendre(u, p), legendre(-1, p))
    return LocalVerdict(p, represented, STRUCTURAL, steps if trace else ())


def decide_zp(L: DiagLattice, m: int, p: int, trace: bool = False) -> LocalVerdict:
    """Decide whether a x^2 + b y^2 + c z^2 = m is soluble in Z_p.

    Args:
        L: Diagonal ternary lattice.
        m: Positive target.
        p: Odd prime.
        trace: Keep the human-readable recursion steps.

    Returns:
        LocalVerdict with method ``structural``.
    """
    return _decide(L.coeffs, m, p, trace)


def decide_zp_binary(a: int, b: int, m: int, p: int) -> bool:
    """Z_p-representability of m by the binary lattice <a, b>."""
    return _decide((a, b), m, p, False).represented


def _residue_member(r: int, coeff: int, p: int, modulus: int) -> bool:
    """Is r congruent to coeff * x^2 mod ``modulus`` (a power of p) for some x?"""
    r %= modulus
    if r == 0:
        return True
    w, unit = valuation(r, p)
    e, alpha = valuation(coeff, p)
    return w >= e and (w - e) % 2 == 0 and legendre(unit * alpha, p) == 1


def _oracle_plan(coeffs, v: int, p: int):
    """Enumerate (certificate index, its valuation k, enumerated index) triples with their cost."""
    vals = [valuation(c, p)[0] for c in coeffs]
    plan = []
    for i, e_i in enumerate(vals):
        if e_i > v:
            continue
        for k in range((v - e_i) // 2 + 1):
            exponent = 2 * (e_i + k) + 1
            others = [j for j in range(3) if j != i]
            j = max(others, key=lambda idx: (vals[idx], -idx))
            y_count = (p ** (e_i + 1) - 1) // 2
            x_count = p ** max(exponent - vals[j], 0) // 2 + 1
            plan.append((i, k, j, exponent, y_count * x_count))
    return vals, plan


def decide_zp_oracle(L: DiagLattice, m: int, p: int, budget: Optional[int] = None) -> LocalVerdict:
    """Search residues for a Hensel-certified solution of f(x, y, z) = m.

    A certificate is a coordinate i with ord_p(2 a_i x_i) = t together with
    f = m mod p^(2t+1); any such solution lifts to Z_p. Every Z_p solution
    has a coordinate with ord_p(a_i x_i^2) <= ord_p(m), so it suffices to
    try t <= (ord_p(m) + e_max) / 2, always within E = ord_p(m) + 2 e_max + 3.
    For each certificate shape one further coordinate is enumerated and the
    third is decided by valuation parity and a Legendre symbol.
    """
    require_odd_prime(p)
    if m <= 0:
        raise ValueError(f"target must be positive, got {m}")
    budget = SCAN_CONFIG["oracle_budget"] if budget is None else budget
    coeffs = L.coeffs
    v = valuation(m, p)[0]
    vals, plan = _oracle_plan(coeffs, v, p)
    horizon = v + 2 * max(vals) + 3
    work = sum(cost for *_, cost in plan)
    if work > budget:
        raise OracleBudgetError(f"oracle for {L}, m={m}, p={p} needs {work} steps (budget {budget})")

    for i, k, j, exponent, _ in plan:
        modulus = p ** exponent
        l = 3 - i - j
        unit_modulus = p ** (vals[i] + 1)
        scale = coeffs[i] * p ** (2 * k)
        x_range = p ** max(exponent - vals[j], 0) // 2 + 1
        for y in range(1, (unit_modulus + 1) // 2):
            if y % p == 0:
                continue
            target = (m - scale * y * y) % modulus
            for x in range(x_range):
                if _residue_member(target - coeffs[j] * x * x, coeffs[l], p, modulus):
                    step = f"certified at coordinate {i}, t={vals[i] + k}, modulus p^{exponent} (horizon p^{horizon})"
                    return LocalVerdict(p, True, ORACLE, (step,))
    return LocalVerdict(p, False, ORACLE, (f"no certified solution up to p^{horizon}",))


def is_anisotropic(L: DiagLattice, p: int) -> bool:
    """Anisotropy over Q_p via the Hasse invariant: isotropic iff (a,b)(a,c)(b,c) = (-1, -abc)."""
    require_odd_prime(p)
    a, b, c = L.coeffs
    hasse = hilbert(a, b, p) * hilbert(a, c, p) * hilbert(b, c, p)
    return hasse != hilbert(-1, -a * b * c, p)


def anisotropic_primes(L: DiagLattice) -> Tuple[List[int], List[int]]:
    """The set T of odd anisotropic primes and T' = T minus {3}."""
    T = [p for p in odd_prime_divisors(L.discriminant()) if is_anisotropic(L, p)]
    return T, [p for p in T if p != 3]


def is_p_stable(L: DiagLattice, p: int) -> PrimeStability:
    require_odd_prime(p)
    ordered = sorted(((valuation(c, p)[0], c) for c in L.coeffs))
    (e0, a), (m, b), (n, c) = ordered
    if e0 >= 1 or m >= 1:
        return PrimeStability(p, False, UNSTABLE)
    if n == 0 or legendre(-a * b, p) == 1:
        return PrimeStability(p, True, ISOTROPIC_PLANE)
    if n == 1:
        eps = SQUARE if legendre(valuation(c, p)[1], p) == 1 else NONSQUARE
        return PrimeStability(p, True, ANISOTROPIC_TIMES_P, eps)
    return PrimeStability(p, False, UNSTABLE)


def stability_profile(L: DiagLattice) -> StabilityProfile:
    T, T_prime = anisotropic_primes(L)
    per_prime = {p: is_p_stable(L, p) for p in odd_prime_divisors(L.discriminant())}
    return StabilityProfile(L, T, T_prime, per_prime)


def is_stable(L: DiagLattice) -> bool:
    return all(is_p_stable(L, p).p_stable for p in odd_prime_divisors(L.discriminant()))


def excluded_classes(L: DiagLattice, p: int) -> ExcludedClasses:
    entry = is_p_stable(L, p)
    if entry.shape != ANISOTROPIC_TIMES_P:
        raise ValueError(f"{L} is not p-stable and anisotropic at p={p}")
    return ExcludedClasses(p, entry.epsilon_class)


def in_excluded_class(m: int, p: int, epsilon_class: str) -> bool:
    """m = p^(2w-1) * delta with delta * eps a nonsquare unit."""
    if m == 0:
        return False
    v, u = valuation(m, p)
    eps = 1 if epsilon_class == SQUARE else nonresidue(p)
    return v % 2 == 1 and legendre(u * eps, p) == -1


def locally_represented(F: TriForm, n: int, trace: bool = False) -> Tuple[bool, List[LocalVerdict]]:
    """Is 8n + a + b + c represented by <a, b, c> over Z_p for every odd p dividing abc?

    Z_2 is skipped because primitive triangular forms are universal there.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    L = F.lattice()
    target = F.target(n)
    verdicts = [decide_zp(L, target, p, trace) for p in odd_prime_divisors(F.discriminant())]
    return all(v.represented for v in verdicts), verdicts
