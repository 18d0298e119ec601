"""Finite checks of the counting identities and isometries the regularity proofs rely on.

Everything is integer or exact rational arithmetic; a ratio like
r_(1,1) = (2/3) r is always compared cross-multiplied.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import isqrt
from typing import Callable, Dict, List, Optional, Tuple

from sympy import Matrix, Rational, eye

from engine_config import IDENTITY_N_MAX, JONES_N_MAX, LEM13_M_MAX
from form_core import DiagLattice, TriForm
from golden_tables import REGULAR_FORMS, STABLE_FORMS
from local_solver import locally_represented
from representation import CountResult, count_binary, count_ternary
from worker_pool import run_ordered

logger = logging.getLogger(__name__)


def verify_lem13(M_max: int = LEM13_M_MAX) -> bool:
    """3 r_(1,1)(m, <1,3>) = 2 r(m, <1,3>) for every m = 4 mod 8 up to M_max."""
    for m in range(4, M_max + 1, 8):
        counts = count_binary(m, 1, 3)
        if 3 * counts.r((1, 1)) != 2 * counts.total:
            logger.warning(f"lem13 fails at m={m}: r={counts.total}, r11={counts.r((1, 1))}")
            return False
    return True


def _solutions_x2_2y2(N: int) -> List[Tuple[int, int]]:
    found = []
    y = 0
    while 2 * y * y <= N:
        rest = N - 2 * y * y
        x = isqrt(rest)
        if x * x == rest:
            for sx in {x, -x}:
                for sy in {y, -y}:
                    found.append((sx, sy))
        y += 1
    return found


def jones_witness(N: int, x: int, y: int) -> Optional[Tuple[int, int]]:
    """A solution (u, v) of u^2 + 2v^2 = N with u != v mod 3, u = x mod 4, v = y mod 2."""
    for u, v in sorted(_solutions_x2_2y2(N)):
        if (u - v) % 3 and (u - x) % 4 == 0 and (v - y) % 2 == 0:
            return u, v
    return None


def verify_lem12(N_max: int = JONES_N_MAX) -> bool:
    for N in range(1, N_max + 1):
        for x, y in _solutions_x2_2y2(N):
            if jones_witness(N, x, y) is None:
                logger.warning(f"No Jones witness for N={N}, (x, y)=({x}, {y})")
                return False
    return True


@dataclass(frozen=True)
class CountIdentity:
    name: str
    lattice: Tuple[int, int, int]
    shift: int
    relation: Callable[[CountResult], bool]
    statement: str


def _i3(c: CountResult) -> bool:
    return c.r((1, 1, 1)) == 2 * c.r((1, 0, 0)) and 2 * c.r((1, 1, 1)) == c.total


def _i12(c: CountResult) -> bool:
    return c.r((1, 1, 1)) == 2 * c.r((0, 0, 1))


def _two_thirds(c: CountResult) -> bool:
    return 3 * c.r((1, 1, 1)) == 2 * c.total


COUNT_IDENTITIES: Dict[str, CountIdentity] = {
    "i3": CountIdentity("i3", (1, 1, 3), 5, _i3, "r111 = 2 r100 = r/2 on <1,1,3> at 8n+5"),
    "i12": CountIdentity("i12", (1, 3, 4), 8, _i12, "r111 = 2 r001 on <1,3,4> at 8n+8"),
    "i17": CountIdentity("i17", (1, 3, 10), 14, _two_thirds, "3 r111 = 2 r on <1,3,10> at 8n+14"),
    "i30": CountIdentity("i30", (1, 3, 18), 22, _two_thirds, "3 r111 = 2 r on <1,3,18> at 8n+22"),
}


def verify_count_identity(name: str, n_max: int = IDENTITY_N_MAX) -> bool:
    if name not in COUNT_IDENTITIES:
        raise ValueError(f"Unknown identity {name!r}; expected one of {sorted(COUNT_IDENTITIES)}")
    identity = COUNT_IDENTITIES[name]
    L = DiagLattice(identity.lattice)
    for n in range(n_max + 1):
        counts = count_ternary(8 * n + identity.shift, L)
        if not identity.relation(counts):
            logger.warning(f"{name} fails at n={n}: {counts.by_parity}")
            return False
    return True


def parity_forced_forms() -> List[TriForm]:
    """Forms whose every representation of a locally represented s_n is all-odd."""
    stable = [STABLE_FORMS[i - 1] for i in (11, 13, 14, 15, 16)]
    regular = [REGULAR_FORMS[i - 1] for i in (10, 36, 39, 40, 41, 49)]
    return [TriForm(*t) for t in stable + regular]


def verify_parity_forcing(F: TriForm, n_max: int = IDENTITY_N_MAX) -> bool:
    L = F.lattice()
    for n in range(n_max + 1):
        if not locally_represented(F, n)[0]:
            continue
        counts = count_ternary(F.target(n), L)
        if counts.total != counts.all_odd:
            logger.warning(f"{F}: s_{n}={F.target(n)} has {counts.total - counts.all_odd} non-odd solutions")
            return False
    return True


@dataclass(frozen=True)
class IsometryInstance:
    name: str
    scale: int
    entries: Tuple[Tuple[int, int, int], ...]
    gram: Tuple[int, int, int]
    fixed_vector: Tuple[int, int, int]

    @property
    def T(self) -> Matrix:
        return Matrix(self.entries) * Rational(1, self.scale)

    @property
    def M(self) -> Matrix:
        return Matrix.diag(*self.gram)


ISOMETRY_INSTANCES = (
    IsometryInstance("Delta(1,4,9)", 9, ((3, 6, 36), (6, 3, -36), (-1, 1, -3)), (1, 1, 36), (1, 1, 0)),
    IsometryInstance("Delta(1,3,27)", 12, ((-3, 18, -27), (6, 0, -18), (1, 2, 9)), (1, 3, 27), (2, -1, 0)),
    IsometryInstance("Delta(1,6,27)", 9, ((0, 18, -27), (3, -3, -9), (1, 2, 6)), (1, 6, 27), (2, -1, 0)),
)


@dataclass(frozen=True)
class IsometryReport:
    name: str
    preserves_gram: bool
    det: int
    kernel_dim: int
    fixed_line_matches: bool

    @property
    def passed(self) -> bool:
        return self.preserves_gram and self.det in (1, -1) and self.kernel_dim == 1 and self.fixed_line_matches


def verify_isometry(inst: IsometryInstance) -> IsometryReport:
    T, M = inst.T, inst.M
    preserves = T.T * M * T == M
    det = T.det()
    kernel = (T - det * eye(3)).nullspace()
    fixed = Matrix(inst.fixed_vector)
    matches = len(kernel) == 1 and Matrix.hstack(kernel[0], fixed).rank() == 1
    report = IsometryReport(inst.name, bool(preserves), int(det) if det.is_integer else 0, len(kernel), bool(matches))
    if not report.passed:
        logger.warning(f"Isometry check failed for {inst.name}: {report}")
    return report


def _run_check(item: Tuple[str, int]) -> bool:
    name, bound = item
    if name == "lem13":
        return verify_lem13(bound)
    if name == "lem12":
        return verify_lem12(bound)
    if name in COUNT_IDENTITIES:
        return verify_count_identity(name, bound)
    if name.startswith("parity:"):
        a, b, c = (int(v) for v in name[len("parity:"):].split(","))
        return verify_parity_forcing(TriForm(a, b, c), bound)
    raise ValueError(f"Unknown check {name!r}")


def run_identity_suite(n_max: int = IDENTITY_N_MAX, lem13_m_max: int = LEM13_M_MAX,
                       jones_n_max: int = JONES_N_MAX, jobs: int = 1) -> Dict[str, bool]:
    """Every identity check by name; the CLI turns any False into a mismatch exit."""
    items = [("lem13", lem13_m_max), ("lem12", jones_n_max)]
    items += [(name, n_max) for name in COUNT_IDENTITIES]
    items += [("parity:{},{},{}".format(*F.as_tuple()), n_max) for F in parity_forced_forms()]
    outcomes = run_ordered(_run_check, items, jobs, "identities")
    results = {name: ok for (name, _), ok in zip(items, outcomes)}
    for inst in ISOMETRY_INSTANCES:
        results[f"isometry:{inst.name}"] = verify_isometry(inst).passed
    logger.info(f"Identity suite: {sum(results.values())}/{len(results)} passed")
    return results
