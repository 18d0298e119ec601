"""Search harnesses behind the classification.

Every harness reduces to ``regularity_scan``: walk n = 1..N, find the least
n whose s_n = 8n + a + b + c is locally represented yet has no all-odd
representation, or report the form clean up to N. The harnesses here are
the stable-form search, the a in [3, 10] exclusion, the lambda-tree
expansion, the missing-prime scan and the small counting checks that feed
them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Any, Dict, Iterable, List, Optional, Protocol, Sequence, Tuple

import numpy as np
from sympy import primerange

from engine_config import ENGINE_VERSION, MISSING_PRIME_RANGE_SHAPE_I, MISSING_PRIME_RANGE_SHAPE_II, TREE_PRIMES
from form_core import DiagLattice, TriForm, canonical_triform, odd_prime_divisors
from golden_tables import (
    ANISOTROPIC_SETS_OF_STABLE,
    LIOUVILLE_FORMS,
    REGULAR_FORMS,
    STABLE_FORMS,
    TREE_OVER_111_CLEAN,
    TREE_OVER_111_REJECTED,
    UK_PAIRS,
    VK_CAPS,
)
from bounds import u_lower_bound
from local_solver import LocalVerdict, anisotropic_primes, is_stable, locally_represented
from representation import all_odd_sieve, exists_all_odd, represented_by_binary
from watson import SHAPE_I, SHAPE_II, missing_prime_candidates, preimages
from worker_pool import run_ordered

logger = logging.getLogger(__name__)

CLEAN = "clean"
COUNTEREXAMPLE = "counterexample"

# First sieve window in n; each later window is this many times larger
SCAN_WINDOW = 1000
WINDOW_GROWTH = 8


@dataclass(frozen=True)
class RegularityReport:
    form: TriForm
    limit: int
    counterexample: Optional[int] = None
    local_evidence: Tuple[LocalVerdict, ...] = ()
    scanned: int = 0

    @property
    def clean(self) -> bool:
        return self.counterexample is None

    @property
    def status(self) -> str:
        return CLEAN if self.clean else COUNTEREXAMPLE

    def to_dict(self) -> Dict[str, Any]:
        return {
            "form": list(self.form.as_tuple()),
            "limit": self.limit,
            "status": self.status,
            "counterexample_n": self.counterexample,
            "scanned": self.scanned,
            "local_evidence": [{"p": v.p, "represented": v.represented} for v in self.local_evidence],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RegularityReport":
        evidence = tuple(LocalVerdict(item["p"], item["represented"], "replayed") for item in data["local_evidence"])
        return cls(canonical_triform(*data["form"]), data["limit"], data["counterexample_n"], evidence, data["scanned"])

    def __str__(self) -> str:
        if self.clean:
            return f"{self.form}: clean up to {self.limit} ({self.scanned} locally represented n)"
        return f"{self.form}: counterexample n={self.counterexample} (s_n={self.form.target(self.counterexample)})"


@dataclass(frozen=True)
class Certificate:
    """Recomputable evidence that n is a local-but-not-global failure of a form."""
    form: Tuple[int, int, int]
    n: int
    s_n: int
    local_evidence: Tuple[Tuple[int, bool], ...]
    global_all_odd_count: int
    engine_version: str = ENGINE_VERSION
    config: Dict[str, Any] = field(default_factory=dict, compare=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "form": list(self.form),
            "n": self.n,
            "s_n": self.s_n,
            "local_evidence": [{"p": p, "represented": ok} for p, ok in self.local_evidence],
            "global_all_odd_count": self.global_all_odd_count,
            "engine_version": self.engine_version,
            "config": dict(sorted(self.config.items())),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Certificate":
        evidence = tuple((item["p"], item["represented"]) for item in data["local_evidence"])
        return cls(tuple(data["form"]), data["n"], data["s_n"], evidence,
                   data["global_all_odd_count"], data.get("engine_version", ENGINE_VERSION), data.get("config", {}))

    def replay(self) -> bool:
        """Recompute every field from scratch; True iff they all match."""
        try:
            F = canonical_triform(*self.form)
        except ValueError:
            return False
        if self.n < 0 or F.target(self.n) != self.s_n or self.global_all_odd_count != 0:
            return False
        ok, verdicts = locally_represented(F, self.n)
        evidence = tuple((v.p, v.represented) for v in verdicts)
        return ok and evidence == self.local_evidence and not exists_all_odd(self.s_n, F.lattice())


class ReportStore(Protocol):
    def lookup(self, form: TriForm, limit: int) -> Optional[RegularityReport]: ...

    def store(self, report: RegularityReport) -> None: ...


def is_counterexample(F: TriForm, n: int) -> bool:
    """n is locally represented by F yet t(n, F) = 0."""
    return locally_represented(F, n)[0] and not exists_all_odd(F.target(n), F.lattice())


def make_certificate(F: TriForm, n: int, config: Optional[Dict[str, Any]] = None) -> Certificate:
    ok, verdicts = locally_represented(F, n)
    if not ok or exists_all_odd(F.target(n), F.lattice()):
        raise ValueError(f"n={n} is not a counterexample for {F}")
    evidence = tuple((v.p, v.represented) for v in verdicts)
    return Certificate(F.as_tuple(), n, F.target(n), evidence, 0, ENGINE_VERSION, dict(config or {}))


def count_locally_represented(F: TriForm, limit: int) -> int:
    return sum(1 for n in range(1, limit + 1) if locally_represented(F, n)[0])


def regularity_scan(F: TriForm, N: int) -> RegularityReport:
    """Least n in [1, N] that is locally but not globally represented, or clean up to N.

    The all-odd sieve is built over growing windows of n so an early
    counterexample costs little; only sieve misses go through the local check.
    """
    if N < 1:
        raise ValueError(f"scan limit must be >= 1, got {N}")
    L = F.lattice()
    shift = F.shift()
    scanned = 0
    start, window = 1, SCAN_WINDOW
    while start <= N:
        stop = min(N, start + window - 1)
        hits = all_odd_sieve(F.target(stop), L)
        ns = np.arange(start, stop + 1, dtype=np.int64)
        represented = hits[8 * ns + shift]
        for n in ns[~represented]:
            n = int(n)
            ok, verdicts = locally_represented(F, n)
            if ok:
                scanned += int(represented[: n - start].sum()) + 1
                logger.debug(f"{F}: counterexample n={n}, s_n={F.target(n)}")
                return RegularityReport(F, N, n, tuple(verdicts), scanned)
        scanned += int(represented.sum())
        start, window = stop + 1, window * WINDOW_GROWTH
    return RegularityReport(F, N, None, (), scanned)


def _scan_job(item: Tuple[TriForm, int]) -> RegularityReport:
    form, limit = item
    return regularity_scan(form, limit)


def scan_forms(forms: Sequence[TriForm], N: int, jobs: int = 1,
               cache: Optional[ReportStore] = None, desc: str = "scanning") -> List[RegularityReport]:
    """regularity_scan over many forms, results in input order. Cache hits skip the scan."""
    reports: List[Optional[RegularityReport]] = [None] * len(forms)
    pending = []
    for index, form in enumerate(forms):
        cached = cache.lookup(form, N) if cache is not None else None
        if cached is not None:
            reports[index] = cached
        else:
            pending.append(index)
    fresh = run_ordered(_scan_job, [(forms[i], N) for i in pending], jobs, desc)
    for index, report in zip(pending, fresh):
        reports[index] = report
        if cache is not None:
            cache.store(report)
    return reports


@dataclass(frozen=True)
class Escalation:
    form: TriForm
    report: RegularityReport

    @property
    def unexplained(self) -> bool:
        return self.report.clean


def escalate(forms: Iterable[TriForm], golden: Iterable[Tuple[int, int, int]], limit: int,
             jobs: int = 1, cache: Optional[ReportStore] = None) -> List[Escalation]:
    """Rescan survivors that the embedded golden list does not account for at a larger limit."""
    known = set(golden)
    outsiders = sorted(f for f in forms if f.as_tuple() not in known)
    if not outsiders:
        return []
    logger.warning(f"Escalating {len(outsiders)} survivors outside the golden list to N={limit}")
    escalations = [Escalation(r.form, r) for r in scan_forms(outsiders, limit, jobs, cache, "escalating")]
    for item in escalations:
        if item.unexplained:
            logger.warning(f"Unexplained survivor {item.form}: clean up to {limit}")
        else:
            logger.info(f"Escalation rejected {item.form} at n={item.report.counterexample}")
    return escalations


def _apply_escalation(survivors: List[TriForm], golden, escalate_limit: Optional[int],
                      jobs: int, cache: Optional[ReportStore]) -> List[TriForm]:
    if escalate_limit is None:
        return survivors
    rejected = {e.form for e in escalate(survivors, golden, escalate_limit, jobs, cache) if not e.unexplained}
    return [f for f in survivors if f not in rejected]


def stable_candidates(c_max: int) -> List[TriForm]:
    """Primitive stable a <= b <= c with a in {1, 2}, a + b <= 21, c <= c_max."""
    found = []
    for a in (1, 2):
        for b in range(a, 22 - a):
            for c in range(b, c_max + 1):
                if gcd(a, b, c) == 1 and is_stable(DiagLattice((a, b, c))):
                    found.append(TriForm(a, b, c))
    return found


def stable_search(c_max: int, N: int, jobs: int = 1, escalate_limit: Optional[int] = None,
                  cache: Optional[ReportStore] = None) -> List[TriForm]:
    candidates = stable_candidates(c_max)
    logger.info(f"Stable search: {len(candidates)} stable candidates with c <= {c_max}, N={N}")
    reports = scan_forms(candidates, N, jobs, cache, "stable search")
    survivors = sorted(r.form for r in reports if r.clean)
    survivors = _apply_escalation(survivors, STABLE_FORMS, escalate_limit, jobs, cache)
    logger.info(f"Stable search finished with {len(survivors)} survivors")
    return survivors


def exclusion_candidates(bounds: Optional[Dict[int, int]] = None) -> List[TriForm]:
    """Primitive stable a <= b <= c with 3 <= a <= 10 and c within the per-a bound."""
    if bounds is None:
        bounds = derived_c_bounds()
    found = []
    for a, c_bound in sorted(bounds.items()):
        for b in range(a, c_bound + 1):
            for c in range(b, c_bound + 1):
                if gcd(a, b, c) == 1 and is_stable(DiagLattice((a, b, c))):
                    found.append(TriForm(a, b, c))
    return found


def exclusion_scan_a3to10(N: int, jobs: int = 1, bounds: Optional[Dict[int, int]] = None,
                          cache: Optional[ReportStore] = None) -> List[TriForm]:
    """Stable candidates with 3 <= a <= 10 that survive the scan; expected empty."""
    candidates = exclusion_candidates(bounds)
    logger.info(f"Exclusion a in [3,10]: {len(candidates)} stable candidates, N={N}")
    reports = scan_forms(candidates, N, jobs, cache, "exclusion")
    survivors = sorted(r.form for r in reports if r.clean)
    if survivors:
        logger.warning(f"Exclusion scan left {len(survivors)} survivors: {', '.join(map(str, survivors))}")
    return survivors


@dataclass(frozen=True)
class TreeNode:
    form: TriForm
    report: RegularityReport
    parent: Optional[TriForm]
    prime: Optional[int]
    depth: int


@dataclass
class LambdaTree:
    roots: List[TriForm]
    nodes: Dict[TriForm, TreeNode] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)

    @property
    def clean_forms(self) -> List[TriForm]:
        return sorted(f for f, node in self.nodes.items() if node.report.clean)

    @property
    def rejected(self) -> Dict[TriForm, int]:
        return {f: node.report.counterexample for f, node in sorted(self.nodes.items()) if not node.report.clean}

    def children(self, form: TriForm) -> List[TriForm]:
        return sorted(f for f, node in self.nodes.items() if node.parent == form)

    def to_dict(self) -> Dict[str, Any]:
        nodes = []
        for form in sorted(self.nodes):
            node = self.nodes[form]
            nodes.append({
                "form": list(form.as_tuple()),
                "parent": list(node.parent.as_tuple()) if node.parent else None,
                "prime": node.prime,
                "depth": node.depth,
                "status": node.report.status,
                "counterexample_n": node.report.counterexample,
                "limit": node.report.limit,
            })
        return {
            "roots": [list(r.as_tuple()) for r in self.roots],
            "clean": [list(f.as_tuple()) for f in self.clean_forms],
            "nodes": nodes,
            "warnings": list(self.warnings),
        }


def expand_tree(roots: Sequence[TriForm], primes: Sequence[int] = TREE_PRIMES, N: int = 100000,
                max_depth: int = 6, jobs: int = 1, escalate_limit: Optional[int] = None,
                cache: Optional[ReportStore] = None) -> LambdaTree:
    """Breadth-first inverse-lambda expansion, recursing only into clean nodes.

    A preimage reached from two parents is attached to the first one in
    canonical order. Clean nodes at ``max_depth`` are not expanded and are
    recorded in ``warnings``.
    """
    tree = LambdaTree(sorted(set(roots)))
    level: List[Tuple[TriForm, Optional[TriForm], Optional[int]]] = [(r, None, None) for r in tree.roots]
    depth = 0
    while level:
        reports = scan_forms([form for form, _, _ in level], N, jobs, cache, f"tree depth {depth}")
        for (form, parent, p), report in zip(level, reports):
            tree.nodes[form] = TreeNode(form, report, parent, p, depth)
        frontier = sorted(form for (form, _, _), report in zip(level, reports) if report.clean)
        logger.info(f"Tree depth {depth}: {len(level)} nodes, {len(frontier)} clean")
        if depth >= max_depth:
            for form in frontier:
                message = f"{form} is clean at max depth {max_depth}; tree may be unfinished"
                logger.warning(message)
                tree.warnings.append(message)
            break
        queued = set()
        next_level = []
        for parent in frontier:
            for p in primes:
                for child in preimages(parent, p).images:
                    if child in tree.nodes or child in queued:
                        continue
                    queued.add(child)
                    next_level.append((child, parent, p))
        level = next_level
        depth += 1

    if escalate_limit is not None:
        demoted = []
        for item in escalate(tree.clean_forms, REGULAR_FORMS, escalate_limit, jobs, cache):
            if not item.unexplained:
                node = tree.nodes[item.form]
                tree.nodes[item.form] = TreeNode(item.form, item.report, node.parent, node.prime, node.depth)
                demoted.append(item.form)
        if demoted:
            _prune_below(tree, demoted, primes)
    return tree


def _prune_below(tree: LambdaTree, demoted: Sequence[TriForm], primes: Sequence[int]) -> None:
    """Drop nodes that hang only under forms rejected after expansion.

    A dropped form that is also a preimage of a surviving clean node is
    attached there instead, with its subtree kept.
    """
    doomed = set()
    stack = list(demoted)
    while stack:
        parent = stack.pop()
        for child in tree.children(parent):
            if child not in doomed:
                doomed.add(child)
                stack.append(child)
    removed = {form: tree.nodes.pop(form) for form in doomed}

    changed = True
    while changed:
        changed = False
        for parent in tree.clean_forms:
            for p in primes:
                for child in preimages(parent, p).images:
                    if child in removed and child not in tree.nodes:
                        old = removed.pop(child)
                        tree.nodes[child] = TreeNode(child, old.report, parent, p, tree.nodes[parent].depth + 1)
                        changed = True
    if removed:
        logger.warning(f"Pruned {len(removed)} tree nodes below forms rejected by escalation")
        tree.warnings = [w for w in tree.warnings if not any(w.startswith(f"{f} ") for f in removed)]


def tree_fragment_mismatches(tree: LambdaTree,
                             clean: Iterable[Tuple[int, int, int]] = TREE_OVER_111_CLEAN,
                             rejected: Optional[Dict[Tuple[int, int, int], int]] = None) -> List[str]:
    """Compare the tree with an embedded fragment: expected clean forms and least counterexamples."""
    if rejected is None:
        rejected = TREE_OVER_111_REJECTED
    problems = []
    for triple in clean:
        node = tree.nodes.get(TriForm(*triple))
        if node is None:
            problems.append(f"{TriForm(*triple)} missing, expected clean")
        elif not node.report.clean:
            problems.append(f"{node.form} rejected at n={node.report.counterexample}, expected clean")
    for triple, n in sorted(rejected.items()):
        node = tree.nodes.get(TriForm(*triple))
        if node is None:
            problems.append(f"{TriForm(*triple)} missing, expected counterexample n={n}")
        elif node.report.counterexample != n:
            problems.append(f"{node.form} gave n={node.report.counterexample}, expected n={n}")
    return problems


@dataclass
class MissingPrimeReport:
    limit: int
    origins: Dict[TriForm, List[Tuple[int, str, TriForm]]] = field(default_factory=dict)
    rejected: Dict[TriForm, int] = field(default_factory=dict)
    survivors: List[TriForm] = field(default_factory=list)

    @property
    def candidates(self) -> List[TriForm]:
        return sorted(self.origins)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "limit": self.limit,
            "candidates": len(self.origins),
            "max_counterexample": max(self.rejected.values(), default=None),
            "survivors": [list(f.as_tuple()) for f in self.survivors],
        }


def missing_prime_scan(shape_i_range: Tuple[int, int] = MISSING_PRIME_RANGE_SHAPE_I,
                       shape_ii_range: Tuple[int, int] = MISSING_PRIME_RANGE_SHAPE_II,
                       N: int = 100000, stable_forms: Optional[Sequence[TriForm]] = None, jobs: int = 1,
                       escalate_limit: Optional[int] = None,
                       cache: Optional[ReportStore] = None) -> MissingPrimeReport:
    """Scan every shape (i) and shape (ii) candidate over every stable form; survivors expected empty."""
    if stable_forms is None:
        stable_forms = [TriForm(*t) for t in STABLE_FORMS]
    report = MissingPrimeReport(N)
    for shape, (l_min, l_max) in ((SHAPE_I, shape_i_range), (SHAPE_II, shape_ii_range)):
        for l in primerange(l_min, l_max + 1):
            l = int(l)
            for S in stable_forms:
                if S.discriminant() % l == 0:
                    continue
                for candidate in missing_prime_candidates(S, l, (shape,)):
                    report.origins.setdefault(candidate, []).append((l, shape, S))
    candidates = report.candidates
    logger.info(f"Missing-prime scan: {len(candidates)} candidates, N={N}")
    for scan in scan_forms(candidates, N, jobs, cache, "missing primes"):
        if scan.clean:
            report.survivors.append(scan.form)
        else:
            report.rejected[scan.form] = scan.counterexample
    report.survivors = _apply_escalation(report.survivors, (), escalate_limit, jobs, cache)
    if report.survivors:
        logger.warning(f"Missing-prime scan left survivors: {', '.join(map(str, report.survivors))}")
    return report


def vk_count(a: int, b: int, k: int) -> int:
    """Number of distinct a x^2 + b y^2 (x, y odd and positive) strictly between a + b and k^2 a + b."""
    if k < 3 or k % 2 == 0:
        raise ValueError("k must be an odd integer >= 3")
    low, high = a + b, k * k * a + b
    values = set()
    alpha = 1
    while alpha * alpha * a + b < high:
        beta = 1
        while alpha * alpha * a + beta * beta * b < high:
            value = alpha * alpha * a + beta * beta * b
            if value > low:
                values.add(value)
            beta += 2
        alpha += 2
    return len(values)


@dataclass(frozen=True)
class ExclusionBound:
    a: int
    k: int
    u_lower: int
    v_max: int
    v_cap: int
    c_bound: int

    @property
    def holds(self) -> bool:
        return self.v_max <= self.v_cap and self.v_max < self.u_lower


def derive_exclusion_bounds(b_max: int = 1000) -> List[ExclusionBound]:
    """For each paired (a, k): more locally represented n than binary-reachable ones forces c <= (k^2 - 1) a / 8 - 1."""
    rows = []
    for (a, k) in UK_PAIRS:
        v_max = max(vk_count(a, b, k) for b in range(a, b_max + 1))
        rows.append(ExclusionBound(a, k, u_lower_bound(a, k), v_max, VK_CAPS[k], (k * k - 1) * a // 8 - 1))
    return rows


def derived_c_bounds() -> Dict[int, int]:
    return {a: c for (a, k), (_, c) in UK_PAIRS.items()}


def eset_check(E: Iterable[int], a: int, b: int) -> bool:
    """True iff no element of E is represented by <a, b> over Z."""
    return not any(represented_by_binary(e, a, b) for e in E)


def eset_disjoint_support(E: Sequence[int], ignore: Sequence[int] = (3,)) -> bool:
    """The odd prime supports of the elements, minus ``ignore``, are pairwise disjoint."""
    seen = set()
    for e in E:
        support = set(odd_prime_divisors(e)) - set(ignore)
        if support & seen:
            return False
        seen |= support
    return True


def pair_two_six_obstruction(c_max: int) -> bool:
    """For every primitive <2, 6, c> with 7 <= c <= c_max and 3 not dividing c, 48 + c has no all-odd representation."""
    for c in range(7, c_max + 1):
        if c % 2 == 0 or c % 3 == 0:
            continue
        if exists_all_odd(48 + c, DiagLattice((2, 6, c))):
            logger.debug(f"<2,6,{c}> reaches 48 + c with odd coordinates")
            return False
    return True


def universality_check(forms: Optional[Iterable[Tuple[int, int, int]]] = None,
                       n_max: int = 10000) -> Dict[TriForm, Optional[int]]:
    """Least n in [0, n_max] each form misses, or None when it represents them all."""
    if forms is None:
        forms = LIOUVILLE_FORMS
    result = {}
    for triple in forms:
        F = canonical_triform(*triple)
        hits = all_odd_sieve(F.target(n_max), F.lattice())
        missed = np.flatnonzero(~hits[8 * np.arange(n_max + 1, dtype=np.int64) + F.shift()])
        result[F] = int(missed[0]) if missed.size else None
    return result


def anisotropic_sets_of_stable(forms: Optional[Iterable[Tuple[int, int, int]]] = None) -> Dict[TriForm, Tuple[int, ...]]:
    """T for each stable form; every value is expected among ANISOTROPIC_SETS_OF_STABLE."""
    if forms is None:
        forms = STABLE_FORMS
    result = {}
    for triple in forms:
        T, _ = anisotropic_primes(DiagLattice(tuple(triple)))
        result[canonical_triform(*triple)] = tuple(T)
        if tuple(T) not in ANISOTROPIC_SETS_OF_STABLE:
            logger.warning(f"Unexpected anisotropic set {T} for {triple}")
    return result
