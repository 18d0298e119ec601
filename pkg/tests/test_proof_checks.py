from __future__ import annotations

import pytest

from form_core import DiagLattice
from proof_checks import (
    COUNT_IDENTITIES,
    ISOMETRY_INSTANCES,
    jones_witness,
    parity_forced_forms,
    run_identity_suite,
    verify_count_identity,
    verify_isometry,
    verify_lem12,
    verify_lem13,
    verify_parity_forcing,
)
from representation import count_binary, count_ternary


def test_lem13_small_values():
    counts = count_binary(4, 1, 3)
    assert (counts.total, counts.r((1, 1))) == (6, 4)
    counts = count_binary(12, 1, 3)
    assert 3 * counts.r((1, 1)) == 2 * counts.total


def test_lem13_holds():
    assert verify_lem13(4000)


def test_jones_witnesses():
    assert jones_witness(3, 1, 1) == (1, -1)
    assert jones_witness(1, 1, 0) == (1, 0)
    u, v = jones_witness(9, 3, 0)
    assert u * u + 2 * v * v == 9
    assert (u - v) % 3 != 0 and (u - 3) % 4 == 0 and v % 2 == 0


def test_lem12_holds():
    assert verify_lem12(400)


def test_identity_counts_at_n_zero():
    counts = count_ternary(8, DiagLattice.of(1, 3, 4))
    assert counts.r((1, 1, 1)) == 8 and counts.r((0, 0, 1)) == 4
    counts = count_ternary(14, DiagLattice.of(1, 3, 10))
    assert (counts.total, counts.r((1, 1, 1))) == (12, 8)
    counts = count_ternary(22, DiagLattice.of(1, 3, 18))
    assert (counts.total, counts.r((1, 1, 1))) == (12, 8)


@pytest.mark.parametrize("name", sorted(COUNT_IDENTITIES))
def test_count_identities(name):
    assert verify_count_identity(name, 150)


def test_unknown_identity_is_rejected():
    with pytest.raises(ValueError):
        verify_count_identity("i99", 10)


def test_eleven_parity_forced_forms():
    forms = parity_forced_forms()
    assert len(forms) == 11
    assert len(set(forms)) == 11


@pytest.mark.parametrize("form", parity_forced_forms(), ids=str)
def test_parity_forcing(form):
    assert verify_parity_forcing(form, 200)


@pytest.mark.parametrize("inst", ISOMETRY_INSTANCES, ids=lambda inst: inst.name)
def test_isometries(inst):
    report = verify_isometry(inst)
    assert report.preserves_gram
    assert report.kernel_dim == 1
    assert report.fixed_line_matches
    assert report.passed


def test_isometry_determinants():
    assert [verify_isometry(inst).det for inst in ISOMETRY_INSTANCES] == [1, -1, -1]


def test_identity_suite_small_bounds():
    results = run_identity_suite(n_max=60, lem13_m_max=500, jones_n_max=100)
    assert all(results.values())
    assert {"lem13", "lem12", "i3", "i12", "i17", "i30"} <= set(results)
    assert sum(1 for k in results if k.startswith("isometry:")) == 3


@pytest.mark.slow
def test_identity_suite_full():
    results = run_identity_suite(jobs=4)
    assert all(results.values()), {k: v for k, v in results.items() if not v}


def test_sum_with_three_z_squared_at_thirteen():
    counts = count_ternary(13, DiagLattice.of(1, 1, 3))
    assert (counts.total, counts.r((1, 1, 1)), counts.r((1, 0, 0))) == (32, 16, 8)
