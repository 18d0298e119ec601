from __future__ import annotations

import pytest

from classifier import (
    Certificate,
    RegularityReport,
    anisotropic_sets_of_stable,
    count_locally_represented,
    derive_exclusion_bounds,
    derived_c_bounds,
    escalate,
    eset_check,
    eset_disjoint_support,
    exclusion_scan_a3to10,
    expand_tree,
    is_counterexample,
    make_certificate,
    missing_prime_scan,
    pair_two_six_obstruction,
    regularity_scan,
    stable_candidates,
    stable_search,
    tree_fragment_mismatches,
    universality_check,
    vk_count,
)
from form_core import TriForm
from golden_tables import (
    ANISOTROPIC_SETS_OF_STABLE,
    E_SET_22,
    E_SET_23,
    LIOUVILLE_FORMS,
    MISSING_PRIME_WITNESSES,
    REGULAR_FORMS,
    STABLE_FORMS,
    TREE_OVER_111_CLEAN,
    TREE_OVER_111_REJECTED,
    UK_PAIRS,
    VK_CAPS,
)
from watson import preimages


@pytest.mark.parametrize("triple,n", sorted(TREE_OVER_111_REJECTED.items()))
def test_scan_finds_least_counterexample(triple, n):
    F = TriForm(*triple)
    report = regularity_scan(F, 100)
    assert report.counterexample == n
    assert report.status == "counterexample"
    assert all(v.represented for v in report.local_evidence)
    assert not any(is_counterexample(F, m) for m in range(1, n))


def test_sum_of_three_triangles_is_clean():
    report = regularity_scan(TriForm(1, 1, 1), 10000)
    assert report.clean
    assert report.scanned == 10000


def test_clean_scan_is_monotone():
    F = TriForm(1, 2, 3)
    assert regularity_scan(F, 3000).clean
    assert regularity_scan(F, 500).clean


def test_scan_crosses_window_boundaries():
    # a counterexample past the first sieve window must still be the least one
    F = TriForm(1, 1, 81)
    assert regularity_scan(F, 20000).counterexample == 19


def test_scan_limit_must_be_positive():
    with pytest.raises(ValueError):
        regularity_scan(TriForm(1, 1, 1), 0)


def test_scanned_counts_locally_represented_n():
    F = TriForm(1, 1, 9)
    report = regularity_scan(F, 300)
    assert report.clean
    assert report.scanned == count_locally_represented(F, 300)


def test_report_dict_round_trip():
    report = regularity_scan(TriForm(1, 1, 25), 100)
    again = RegularityReport.from_dict(report.to_dict())
    assert again.form == report.form
    assert again.counterexample == 5
    assert [v.p for v in again.local_evidence] == [5]


def test_certificate_replays():
    certificate = make_certificate(TriForm(1, 1, 81), 19, {"limit": 100})
    assert certificate.s_n == 235
    assert certificate.global_all_odd_count == 0
    assert certificate.replay()
    assert Certificate.from_dict(certificate.to_dict()).replay()


def test_tampered_certificate_fails_replay():
    data = make_certificate(TriForm(1, 1, 81), 19).to_dict()
    data["n"] = 18
    data["s_n"] = 8 * 18 + 83
    assert not Certificate.from_dict(data).replay()


def test_make_certificate_rejects_represented_n():
    with pytest.raises(ValueError):
        make_certificate(TriForm(1, 1, 1), 5)


@pytest.mark.parametrize("triple,n", [((1, 1, 841), 52), ((1, 1, 961), 52), ((1, 5, 961), 13)])
def test_missing_prime_witnesses(triple, n):
    assert is_counterexample(TriForm(*triple), n)


def test_missing_prime_witness_table():
    assert 8 * MISSING_PRIME_WITNESSES[(1, 1)] + 2 == 418
    assert 8 * MISSING_PRIME_WITNESSES[(1, 5)] + 6 == 110


def test_tree_over_sum_of_three_triangles_at_three():
    root = TriForm(1, 1, 1)
    tree = expand_tree([root], primes=(3,), N=2000, max_depth=4)
    clean = {f.as_tuple() for f in tree.clean_forms}
    assert clean == {(1, 1, 1)} | set(TREE_OVER_111_CLEAN)
    expected = {TriForm(*t): n for t, n in TREE_OVER_111_REJECTED.items() if 3 in _odd_prime_set(t)}
    assert tree.rejected == expected
    assert tree.warnings == []
    for form, node in tree.nodes.items():
        if node.parent is not None:
            assert form in preimages(node.parent, node.prime).images


def test_tree_over_sum_of_three_triangles_at_five_and_seven():
    tree = expand_tree([TriForm(1, 1, 1)], primes=(5, 7), N=2000, max_depth=1)
    assert tree.rejected == {TriForm(1, 1, 25): 5, TriForm(1, 25, 25): 5,
                             TriForm(1, 1, 49): 8, TriForm(1, 49, 49): 7}


def test_tree_flags_clean_nodes_at_max_depth():
    tree = expand_tree([TriForm(1, 1, 1)], primes=(3,), N=500, max_depth=1)
    assert len(tree.warnings) == 2
    assert {f.depth for f in tree.nodes.values()} == {0, 1}


def test_tree_fragment_over_sum_of_three_triangles_matches():
    tree = expand_tree([TriForm(1, 1, 1)], primes=(3, 5, 7), N=100, max_depth=2)
    assert tree_fragment_mismatches(tree) == []


def test_tree_fragment_reports_wrong_counterexample_and_missing_forms():
    tree = expand_tree([TriForm(1, 1, 1)], primes=(3, 5, 7), N=100, max_depth=2)
    tampered = dict(TREE_OVER_111_REJECTED)
    tampered[(1, 49, 49)] = 8
    problems = tree_fragment_mismatches(tree, rejected=tampered)
    assert problems == ["Delta(1,49,49) gave n=7, expected n=8"]

    only_three = expand_tree([TriForm(1, 1, 1)], primes=(3,), N=100, max_depth=2)
    problems = tree_fragment_mismatches(only_three)
    assert len(problems) == 4
    assert all("missing" in problem for problem in problems)


def test_escalation_prunes_subtrees_of_rejected_nodes():
    # at N=10 Delta(1,1,81) and Delta(1,9,81) still look clean and get expanded
    tree = expand_tree([TriForm(1, 1, 1)], primes=(3,), N=10, max_depth=3, escalate_limit=100)
    assert tree.rejected[TriForm(1, 1, 81)] == 19
    assert tree.rejected[TriForm(1, 9, 81)] == 18
    assert tree.children(TriForm(1, 1, 81)) == []
    assert tree.children(TriForm(1, 9, 81)) == []
    for form, node in tree.nodes.items():
        if node.parent is not None:
            assert node.parent in tree.nodes, form
            assert tree.nodes[node.parent].report.clean, form
    assert max(node.depth for node in tree.nodes.values()) == 2
    assert tree.warnings == []


def test_tree_is_deterministic():
    roots = [TriForm(1, 1, 1), TriForm(1, 1, 3)]
    first = expand_tree(roots, primes=(3, 5), N=1000, max_depth=2).to_dict()
    second = expand_tree(list(reversed(roots)), primes=(3, 5), N=1000, max_depth=2).to_dict()
    assert first == second


def _odd_prime_set(triple):
    return {q for q in (3, 5, 7) if any(c % q == 0 for c in triple)}


def test_stable_candidates_small_cap():
    found = {f.as_tuple() for f in stable_candidates(4)}
    assert {(1, 1, 1), (1, 1, 2), (1, 1, 3), (1, 1, 4), (1, 2, 2), (1, 2, 3), (1, 2, 4), (2, 2, 3)} <= found


def test_stable_search_small_cap():
    survivors = stable_search(c_max=6, N=100000)
    assert [f.as_tuple() for f in survivors] == sorted(t for t in STABLE_FORMS if t[2] <= 6)


def test_escalation_rejects_known_irregular_form():
    escalations = escalate([TriForm(1, 1, 81), TriForm(1, 1, 1)], [(1, 1, 1)], 1000)
    assert [e.form for e in escalations] == [TriForm(1, 1, 81)]
    assert not escalations[0].unexplained


def test_vk_count():
    assert vk_count(10, 10, 5) == 2
    assert vk_count(5, 5, 3) == 0
    with pytest.raises(ValueError):
        vk_count(3, 4, 4)


def test_vk_caps_on_small_b_range():
    for (a, k) in UK_PAIRS:
        for b in range(a, 200):
            assert vk_count(a, b, k) <= VK_CAPS[k], (a, b, k)


def test_derived_bounds_small_b_range():
    rows = derive_exclusion_bounds(b_max=100)
    assert len(rows) == 8
    for row in rows:
        assert (row.u_lower, row.c_bound) == UK_PAIRS[(row.a, row.k)]
        assert row.holds


def test_derived_c_bounds():
    assert derived_c_bounds() == {10: 29, 9: 26, 8: 47, 7: 41, 6: 35, 5: 49, 4: 83, 3: 314}


def test_e_sets():
    assert eset_check(E_SET_22, 2, 2)
    assert eset_check(E_SET_23, 2, 3)
    assert all((e - 5) % 8 == 0 for e in E_SET_23)
    assert not eset_check([4], 1, 3)


def test_e_set_supports_are_disjoint():
    assert eset_disjoint_support(E_SET_22)
    assert eset_disjoint_support(E_SET_23)
    assert not eset_disjoint_support([35, 55])


def test_pair_two_six_obstruction():
    assert pair_two_six_obstruction(300)


def test_liouville_forms_are_universal():
    missed = universality_check(LIOUVILLE_FORMS, 2000)
    assert len(missed) == 7
    assert all(n is None for n in missed.values())


def test_non_universal_form_reports_first_miss():
    missed = universality_check([(1, 1, 3)], 100)
    assert missed[TriForm(1, 1, 3)] is not None


def test_anisotropic_sets_of_stable_forms():
    sets = anisotropic_sets_of_stable()
    assert set(sets.values()) <= set(ANISOTROPIC_SETS_OF_STABLE)
    assert sets[TriForm(1, 1, 1)] == ()
    assert sets[TriForm(1, 3, 10)] == (3, 5)
    assert sets[TriForm(1, 1, 21)] == (3, 7)


@pytest.mark.slow
def test_stable_search_full():
    survivors = stable_search(c_max=500, N=100000, jobs=4)
    assert [f.as_tuple() for f in survivors] == sorted(STABLE_FORMS)


@pytest.mark.slow
def test_exclusion_full():
    assert exclusion_scan_a3to10(10000, jobs=4) == []


@pytest.mark.slow
def test_full_tree_gives_the_49_forms():
    roots = [TriForm(*t) for t in STABLE_FORMS]
    tree = expand_tree(roots, (3, 5, 7), N=100000, max_depth=6, jobs=4)
    assert [f.as_tuple() for f in tree.clean_forms] == sorted(REGULAR_FORMS)
    assert set(LIOUVILLE_FORMS) <= set(REGULAR_FORMS)


@pytest.mark.slow
def test_missing_prime_scan_full():
    report = missing_prime_scan(N=100000, jobs=4)
    assert report.survivors == []
    assert max(report.rejected.values()) <= 100000


@pytest.mark.slow
def test_vk_caps_full_range():
    rows = derive_exclusion_bounds(b_max=1000)
    assert all(row.holds for row in rows)


@pytest.mark.slow
def test_liouville_forms_are_universal_to_ten_thousand():
    missed = universality_check(LIOUVILLE_FORMS, 10000)
    assert all(n is None for n in missed.values()), missed
