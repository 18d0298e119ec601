from __future__ import annotations

import pytest

from form_core import DiagLattice, TriForm
from representation import (
    all_odd_sieve,
    count_all_odd,
    count_binary,
    count_ternary,
    exists_all_odd,
    represented_by_binary,
    triangular_count,
)


def test_count_ternary_splits_by_parity():
    counts = count_ternary(13, DiagLattice.of(1, 1, 3))
    assert counts.total == 32
    assert counts.r((1, 1, 1)) == 16
    assert counts.r((1, 0, 0)) == 8
    assert counts.all_odd == 16


def test_count_binary_small_case():
    counts = count_binary(4, 1, 3)
    assert counts.total == 6
    assert counts.r((1, 1)) == 4
    assert counts.r((0, 0)) == 2


def test_negative_target_is_rejected():
    with pytest.raises(ValueError):
        count_binary(-1, 1, 1)
    with pytest.raises(ValueError):
        count_ternary(-1, DiagLattice.of(1, 1, 1))


def test_triangular_count_matches_direct_enumeration():
    # T_x in {0} only for x in {0, -1}
    assert triangular_count(0, TriForm(1, 2, 3)) == 8
    # one coordinate with T = 1, two with T = 0
    assert triangular_count(1, TriForm(1, 1, 1)) == 24


def test_triangular_count_brute_force():
    F = TriForm(1, 2, 4)
    tri = {x: x * (x + 1) // 2 for x in range(-12, 12)}
    for n in range(0, 30):
        brute = sum(1 for x in tri for y in tri for z in tri
                    if F.a * tri[x] + F.b * tri[y] + F.c * tri[z] == n)
        assert triangular_count(n, F) == brute


def test_exists_all_odd():
    assert not exists_all_odd(115, DiagLattice.of(1, 25, 49))
    assert exists_all_odd(75, DiagLattice.of(1, 25, 49))


@pytest.mark.parametrize("coeffs", [(1, 1, 1), (1, 2, 5), (2, 3, 7), (1, 9, 9)])
def test_sieve_agrees_with_pointwise_search(coeffs):
    L = DiagLattice(coeffs)
    hits = all_odd_sieve(500, L)
    for M in range(501):
        assert bool(hits[M]) == exists_all_odd(M, L)


def test_count_all_odd_agrees_with_parity_split():
    L = DiagLattice.of(1, 3, 10)
    for M in range(0, 200):
        assert count_all_odd(M, L) == count_ternary(M, L).all_odd


def test_binary_representation():
    assert not represented_by_binary(418, 1, 1)
    assert represented_by_binary(25, 1, 1)
    assert not represented_by_binary(110, 1, 5)
