from __future__ import annotations

import random
from math import gcd

import pytest
from sympy import primerange

from bounds import (
    WitnessNotFoundError,
    a_ij,
    coprime_progression_min,
    digit_expansion,
    find_g,
    locally_rep_lower_bound,
    progression_bound,
    psi_crude_bound,
    psi_exact,
    psi_ij,
    shape_i_counting_excludes,
    shape_i_prime_cutoff,
    small_progression_bound,
    table1_diff,
    table1_rows,
    u_lower_bound,
)
from form_core import DiagLattice, odd_prime
from golden_tables import LOWER_BOUND_CHECKS, SHAPE_I_PRIME_CUTOFF, TABLE1, UK_PAIRS


def test_digit_expansion_least_significant_first():
    expansion = digit_expansion(19, 3)
    assert expansion.digits == (1, 0, 2)
    assert expansion.e == 3
    assert expansion.delta == 2
    assert expansion.digit(5) == 0


def test_digit_expansion_rejects_nonpositive():
    with pytest.raises(ValueError):
        digit_expansion(0, 3)


def test_psi_range_check():
    with pytest.raises(ValueError):
        psi_ij(19, 1, 3)


def test_table1_reproduced_exactly():
    assert table1_diff() == {}
    rows = table1_rows()
    assert len(rows) == 20
    assert all(len(r.values) == 11 for r in rows)
    assert rows[-1].values == TABLE1[314]


def test_a_ij_never_exceeds_the_trivial_bound():
    for i in range(1, 1001):
        for j in range(1, 12):
            assert a_ij(i, j) <= -(-i // odd_prime(j)), (i, j)


def test_psi_exact_is_bounded_by_a_ij():
    for j in (1, 2, 3):
        r = odd_prime(j)
        for i in (1, 4, 9, 19, 26):
            bound = a_ij(i, j)
            for u in (1, 2, 4, 5, 7, 8):
                if u % r == 0:
                    continue
                for v in range(27):
                    assert psi_exact(u, v, i, j) <= bound, (u, v, i, j)


def test_psi_exact_is_bounded_by_the_crude_bound():
    for j in (1, 2, 3):
        r = odd_prime(j)
        for i in (1, 10, 50, 100):
            bound = psi_crude_bound(i, j)
            for u in range(1, r):
                for v in range(r * r):
                    assert psi_exact(u, v, i, j) <= bound, (u, v, i, j)


@pytest.mark.slow
def test_psi_exact_is_bounded_by_a_ij_randomized():
    rng = random.Random(20240605)
    for j in range(1, 6):
        r = odd_prime(j)
        for i in range(1, 101):
            bound = a_ij(i, j)
            for _ in range(500):
                u = rng.randrange(1, 10000)
                while u % r == 0:
                    u = rng.randrange(1, 10000)
                v = rng.randrange(0, 10000)
                assert psi_exact(u, v, i, j) <= bound, (u, v, i, j)


def test_psi_exact_requires_coprime_step():
    with pytest.raises(ValueError):
        psi_exact(3, 1, 10, 1)


def test_psi_crude_bound():
    assert psi_crude_bound(1, 1) == 2
    assert psi_crude_bound(10, 1) == 4
    assert psi_crude_bound(26, 2) == 6


@pytest.mark.parametrize("i_s,expected", sorted(LOWER_BOUND_CHECKS.items()))
def test_locally_represented_lower_bounds(i_s, expected):
    assert locally_rep_lower_bound(*i_s) == expected


def test_lower_bound_at_25_with_eleven_primes_is_positive():
    assert locally_rep_lower_bound(25, 11) > 0


@pytest.mark.parametrize("a_k,values", sorted(UK_PAIRS.items()))
def test_u_lower_bound(a_k, values):
    assert u_lower_bound(*a_k) == values[0]


def test_u_lower_bound_rejects_even_k():
    with pytest.raises(ValueError):
        u_lower_bound(5, 4)


def test_coprime_progression_within_both_bounds():
    primes = list(primerange(3, 40))
    for s in range(1, 5):
        for start in range(0, len(primes) - s + 1):
            chosen = primes[start:start + s]
            for u in range(1, 30):
                if any(u % q == 0 for q in chosen):
                    continue
                for v in range(0, 30):
                    n = coprime_progression_min(u, v, chosen)
                    assert n < progression_bound(s)
                    assert all(gcd(u * n + v, q) == 1 for q in chosen)
                    if s < min(chosen):
                        assert n <= small_progression_bound(s)


def test_find_g_known_value():
    assert find_g(DiagLattice.of(1, 2, 5), 5, 24) == 13


def test_find_g_needs_anisotropic_stable_localisation():
    with pytest.raises(ValueError):
        find_g(DiagLattice.of(1, 1, 5), 5, 24)
    with pytest.raises(ValueError):
        find_g(DiagLattice.of(1, 2, 5), 5, 25)


def test_shape_i_counting():
    assert not shape_i_counting_excludes(131)
    assert shape_i_counting_excludes(137)
    assert shape_i_prime_cutoff() == SHAPE_I_PRIME_CUTOFF


def test_witness_error_is_runtime_error():
    assert issubclass(WitnessNotFoundError, RuntimeError)
