import argparse
import csv
import io
import json
import logging
import os
import sys
from typing import Any, Dict, List, Optional, Sequence

from colorama import Fore, Style, init

from bounds import (
    WitnessNotFoundError,
    locally_rep_lower_bound,
    shape_i_prime_cutoff,
    table1_diff,
    table1_rows,
)
from classifier import (
    RegularityReport,
    derive_exclusion_bounds,
    exclusion_scan_a3to10,
    expand_tree,
    missing_prime_scan,
    scan_forms,
    stable_search,
    tree_fragment_mismatches,
    universality_check,
)
from engine_config import (
    ENGINE_VERSION,
    EXCLUSION_SCAN_LIMIT,
    IDENTITY_N_MAX,
    JONES_N_MAX,
    LEM13_M_MAX,
    OUTPUT_FORMATS,
    SCAN_CONFIG,
    TREE_PRIMES,
    UNIVERSALITY_N_MAX,
    RunConfig,
    get_run_config,
)
from form_core import DiagLattice, canonical_triform
from golden_tables import (
    LIOUVILLE_FORMS,
    LOWER_BOUND_CHECKS,
    REGULAR_FORMS,
    SHAPE_I_PRIME_CUTOFF,
    STABLE_FORMS,
    UK_PAIRS,
)
from local_solver import OracleBudgetError, decide_zp, decide_zp_oracle
from proof_checks import run_identity_suite
from result_cache import ResultCache
from watson import StabilizationError, lambda_p_tri, lambda_rule, preimages, stabilize

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_COUNTEREXAMPLE = 3

CSV_COLUMNS = ["a", "b", "c", "status", "counterexample_n", "limit"]

# Initialize colorama
if os.name == 'nt':  # Windows-specific initialization
    init(convert=True, strip=False, wrap=True)
else:
    init()

logger = logging.getLogger(__name__)


def setup_logging(log_directory: str, verbose: bool = False):
    if not os.path.exists(log_directory):
        os.makedirs(log_directory)
    root = logging.getLogger()
    root.setLevel(logging.DEBUG if verbose else logging.INFO)
    log_file = os.path.join(log_directory, 'triform_engine.log')
    file_handler = logging.FileHandler(log_file)
    formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')
    file_handler.setFormatter(formatter)
    root.handlers = []
    root.addHandler(file_handler)


def print_header(title: str):
    print(Fore.CYAN + Style.BRIGHT + f"== {title} (triform engine {ENGINE_VERSION}) ==" + Style.RESET_ALL)


def print_ok(message: str):
    print(Fore.GREEN + message + Style.RESET_ALL)


def print_fail(message: str):
    print(Fore.RED + Style.BRIGHT + message + Style.RESET_ALL)


def print_info(message: str):
    print(Fore.YELLOW + message + Style.RESET_ALL)


def emit_json(payload: Any):
    print(json.dumps(payload, indent=2, sort_keys=True))


def emit_csv(rows: List[Dict[str, Any]], columns: Sequence[str]):
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: ("" if row.get(key) is None else row.get(key)) for key in columns})
    sys.stdout.write(buffer.getvalue())


def report_row(report: RegularityReport) -> Dict[str, Any]:
    a, b, c = report.form.as_tuple()
    return {"a": a, "b": b, "c": c, "status": report.status,
            "counterexample_n": report.counterexample, "limit": report.limit}


def clean_row(triple, limit: int) -> Dict[str, Any]:
    a, b, c = triple
    return {"a": a, "b": b, "c": c, "status": "clean", "counterexample_n": None, "limit": limit}


def open_cache(config: RunConfig) -> Optional[ResultCache]:
    if not config.cache_path:
        return None
    return ResultCache(config.cache_path, config.snapshot())


def cmd_check(args, config: RunConfig) -> int:
    F = canonical_triform(args.a, args.b, args.c)
    report = scan_forms([F], config.limit, 1, open_cache(config))[0]
    if config.format == "json":
        emit_json(report.to_dict())
    elif config.format == "csv":
        emit_csv([report_row(report)], CSV_COLUMNS)
    else:
        print_header(f"Regularity scan of {F}")
        if report.clean:
            print_ok(str(report))
        else:
            print_fail(str(report))
            for verdict in report.local_evidence:
                print(f"  p={verdict.p}: {'represented' if verdict.represented else 'not represented'}")
    return EXIT_OK if report.clean else EXIT_COUNTEREXAMPLE


def _compare_forms(found, golden, label: str) -> bool:
    found = {f.as_tuple() for f in found}
    golden = set(golden)
    missing, extra = sorted(golden - found), sorted(found - golden)
    if missing or extra:
        logger.error(f"{label} mismatch: missing {missing}, unexpected {extra}")
        return False
    return True


def cmd_scan_stable(args, config: RunConfig) -> int:
    survivors = stable_search(config.c_max, config.limit, config.jobs, config.escalate_limit, open_cache(config))
    matches = _compare_forms(survivors, STABLE_FORMS, "stable search")
    if config.format == "json":
        emit_json({"c_max": config.c_max, "limit": config.limit, "matches_golden": matches,
                   "survivors": [list(f.as_tuple()) for f in survivors]})
    elif config.format == "csv":
        emit_csv([clean_row(f.as_tuple(), config.limit) for f in survivors], CSV_COLUMNS)
    else:
        print_header(f"Stable search, c <= {config.c_max}, N = {config.limit}")
        for f in survivors:
            print(f"  {f}")
        (print_ok if matches else print_fail)(f"{len(survivors)} survivors; golden list of 17 "
                                              f"{'matched' if matches else 'NOT matched'}")
    return EXIT_OK if matches else EXIT_MISMATCH


def cmd_exclude(args, config: RunConfig) -> int:
    limit = args.limit or EXCLUSION_SCAN_LIMIT
    survivors = exclusion_scan_a3to10(limit, config.jobs, cache=open_cache(config))
    if config.format == "json":
        emit_json({"limit": limit, "survivors": [list(f.as_tuple()) for f in survivors]})
    elif config.format == "csv":
        emit_csv([clean_row(f.as_tuple(), limit) for f in survivors], CSV_COLUMNS)
    else:
        print_header(f"Stable candidates with 3 <= a <= 10, N = {limit}")
        if survivors:
            print_fail(f"{len(survivors)} survivors: {', '.join(map(str, survivors))}")
        else:
            print_ok("Every candidate rejected")
    return EXIT_MISMATCH if survivors else EXIT_OK


def cmd_tree(args, config: RunConfig) -> int:
    roots = [canonical_triform(*t) for t in STABLE_FORMS]
    tree = expand_tree(roots, TREE_PRIMES, config.limit, config.max_depth, config.jobs,
                       config.escalate_limit, open_cache(config))
    matches = _compare_forms(tree.clean_forms, REGULAR_FORMS, "lambda tree")
    fragment = tree_fragment_mismatches(tree)
    for problem in fragment:
        logger.error(f"lambda tree fragment over Delta(1,1,1): {problem}")
    matches = matches and not fragment
    if config.format == "json":
        payload = tree.to_dict()
        payload["fragment_mismatches"] = fragment
        emit_json(payload)
    elif config.format == "csv":
        emit_csv([report_row(node.report) for _, node in sorted(tree.nodes.items())], CSV_COLUMNS)
    else:
        print_header(f"Lambda tree over {len(roots)} stable forms, N = {config.limit}")
        for form in tree.clean_forms:
            print(f"  {form}")
        for message in tree.warnings:
            print_info(f"  warning: {message}")
        for problem in fragment:
            print_fail(f"  fragment: {problem}")
        (print_ok if matches else print_fail)(f"{len(tree.clean_forms)} clean forms; golden list of 49 "
                                              f"{'matched' if matches else 'NOT matched'}")
    return EXIT_OK if matches else EXIT_MISMATCH


def cmd_missing_primes(args, config: RunConfig) -> int:
    report = missing_prime_scan(N=config.limit, jobs=config.jobs,
                                escalate_limit=config.escalate_limit, cache=open_cache(config))
    if config.format == "json":
        emit_json(report.to_dict())
    elif config.format == "csv":
        rows = [clean_row(f.as_tuple(), config.limit) for f in report.survivors]
        emit_csv(rows, CSV_COLUMNS)
    else:
        print_header(f"Missing-prime candidates, N = {config.limit}")
        print(f"  {len(report.candidates)} candidates, largest counterexample "
              f"{max(report.rejected.values(), default=0)}")
        if report.survivors:
            print_fail(f"Survivors: {', '.join(map(str, report.survivors))}")
        else:
            print_ok("No missing prime above 7")
    return EXIT_MISMATCH if report.survivors else EXIT_OK


def cmd_table1(args, config: RunConfig) -> int:
    rows = table1_rows()
    diff = table1_diff()
    if config.format == "json":
        emit_json({"rows": {str(r.i): list(r.values) for r in rows},
                   "diff": [{"i": i, "j": j, "computed": got, "printed": want}
                            for (i, j), (got, want) in sorted(diff.items())]})
    elif config.format == "csv":
        columns = ["i"] + [f"j{j}" for j in range(1, 12)]
        emit_csv([dict(i=r.i, **{f"j{j}": v for j, v in enumerate(r.values, start=1)}) for r in rows], columns)
    else:
        print_header("a_ij bound table")
        for r in rows:
            print(f"  {r.i:>4}: " + " ".join(f"{v:>3}" for v in r.values))
        if diff:
            print_fail(f"{len(diff)} cells differ from the printed table: {sorted(diff)}")
        else:
            print_ok("All cells match the printed table")
    return EXIT_MISMATCH if diff else EXIT_OK


def cmd_identities(args, config: RunConfig) -> int:
    results = run_identity_suite(args.n_max, args.m_max, args.jones_max, config.jobs)
    passed = all(results.values())
    if config.format == "json":
        emit_json({"passed": passed, "checks": results})
    elif config.format == "csv":
        emit_csv([{"check": k, "passed": v} for k, v in results.items()], ["check", "passed"])
    else:
        print_header("Identity suite")
        for name, ok in results.items():
            (print_ok if ok else print_fail)(f"  {'PASS' if ok else 'FAIL'} {name}")
    return EXIT_OK if passed else EXIT_MISMATCH


def cmd_local(args, config: RunConfig) -> int:
    L = DiagLattice((args.a, args.b, args.c))
    verdict = decide_zp(L, args.m, args.p, trace=True)
    payload = {"lattice": list(L.coeffs), "m": args.m, "p": args.p,
               "represented": verdict.represented, "trace": list(verdict.trace)}
    status = EXIT_OK
    if args.oracle:
        try:
            oracle = decide_zp_oracle(L, args.m, args.p)
            payload["oracle"] = oracle.represented
            if oracle.represented != verdict.represented:
                logger.error(f"decide_zp and the oracle disagree on {L}, m={args.m}, p={args.p}")
                status = EXIT_MISMATCH
        except OracleBudgetError as e:
            logger.warning(str(e))
            payload["oracle"] = None
    if config.format == "json":
        emit_json(payload)
    elif config.format == "csv":
        emit_csv([{"m": args.m, "p": args.p, "represented": verdict.represented}], ["m", "p", "represented"])
    else:
        print_header(f"{args.m} over Z_{args.p} by {L}")
        (print_ok if verdict.represented else print_fail)("represented" if verdict.represented else "not represented")
        for step in verdict.trace:
            print(f"  - {step}")
        if "oracle" in payload:
            print_info(f"  oracle: {payload['oracle']}")
    return status


def cmd_lambda(args, config: RunConfig) -> int:
    F = canonical_triform(args.a, args.b, args.c)
    if args.p:
        result = lambda_p_tri(F, args.p)
        steps = [{"p": args.p, "before": list(F.as_tuple()), "after": list(result.as_tuple()),
                  "rule": lambda_rule(F, args.p)}]
    else:
        result, chain = stabilize(F)
        steps = [{"p": s.p, "before": list(s.before.as_tuple()), "after": list(s.after.as_tuple()), "rule": s.rule}
                 for s in chain]
    if config.format == "json":
        emit_json({"form": list(F.as_tuple()), "result": list(result.as_tuple()), "steps": steps})
    elif config.format == "csv":
        emit_csv(steps, ["p", "before", "after", "rule"])
    else:
        print_header(f"Lambda transformations of {F}")
        for s in steps:
            print(f"  lambda_{s['p']}: {tuple(s['before'])} -> {tuple(s['after'])} ({s['rule']})")
        print_ok(f"Result: {result}")
    return EXIT_OK


def cmd_preimages(args, config: RunConfig) -> int:
    F = canonical_triform(args.a, args.b, args.c)
    found = preimages(F, args.p)
    if config.format == "json":
        emit_json({"form": list(F.as_tuple()), "p": args.p, "row": found.row,
                   "preimages": [list(g.as_tuple()) for g in found.images]})
    elif config.format == "csv":
        emit_csv([dict(zip("abc", g.as_tuple())) for g in found.images], ["a", "b", "c"])
    else:
        print_header(f"Preimages of {F} under lambda_{args.p} (row {found.row})")
        for g in found.images:
            print(f"  {g}")
    return EXIT_OK


def cmd_bounds(args, config: RunConfig) -> int:
    rows = derive_exclusion_bounds(args.b_max)
    mismatches = []
    for row in rows:
        if (row.u_lower, row.c_bound) != UK_PAIRS[(row.a, row.k)] or not row.holds:
            mismatches.append(f"(a,k)=({row.a},{row.k})")
    lower = {f"{i},{s}": locally_rep_lower_bound(i, s) for (i, s) in LOWER_BOUND_CHECKS}
    for (i, s), expected in LOWER_BOUND_CHECKS.items():
        if lower[f"{i},{s}"] < expected:
            mismatches.append(f"lower bound (i,s)=({i},{s})")
    cutoff = shape_i_prime_cutoff()
    if cutoff != SHAPE_I_PRIME_CUTOFF:
        mismatches.append("shape (i) cutoff")
    if config.format == "json":
        emit_json({"exclusion": [{"a": r.a, "k": r.k, "u_lower": r.u_lower, "v_max": r.v_max,
                                  "v_cap": r.v_cap, "c_bound": r.c_bound, "holds": r.holds} for r in rows],
                   "lower_bounds": lower, "shape_i_cutoff": cutoff, "mismatches": mismatches})
    elif config.format == "csv":
        emit_csv([{"a": r.a, "k": r.k, "u_lower": r.u_lower, "v_max": r.v_max, "c_bound": r.c_bound}
                  for r in rows], ["a", "k", "u_lower", "v_max", "c_bound"])
    else:
        print_header(f"Exclusion bounds (b <= {args.b_max})")
        for r in rows:
            print(f"  a={r.a:>2} k={r.k:>2}: u >= {r.u_lower:>3}, v <= {r.v_max:>3} (cap {r.v_cap}) -> c <= {r.c_bound}")
        print(f"  shape (i) prime cutoff: {cutoff}")
        if mismatches:
            print_fail(f"Mismatches: {', '.join(mismatches)}")
        else:
            print_ok("All bounds match")
    return EXIT_MISMATCH if mismatches else EXIT_OK


def cmd_universal(args, config: RunConfig) -> int:
    missed = universality_check(LIOUVILLE_FORMS, args.n_max)
    failures = {str(f): n for f, n in missed.items() if n is not None}
    if config.format == "json":
        emit_json({"n_max": args.n_max, "forms": [list(f.as_tuple()) for f in missed], "missed": failures})
    elif config.format == "csv":
        emit_csv([{"a": f.a, "b": f.b, "c": f.c, "first_missed": n} for f, n in missed.items()],
                 ["a", "b", "c", "first_missed"])
    else:
        print_header(f"Universality up to n = {args.n_max}")
        for f, n in missed.items():
            (print_ok if n is None else print_fail)(f"  {f}: {'universal' if n is None else f'misses {n}'}")
    return EXIT_MISMATCH if failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--limit", type=int, help=f"scan bound N (default {SCAN_CONFIG['limit']})")
    common.add_argument("--c-max", type=int, help="largest c in the stable search")
    common.add_argument("--max-depth", type=int, help="lambda-tree depth limit")
    common.add_argument("--jobs", type=int, help="worker processes")
    common.add_argument("--format", choices=OUTPUT_FORMATS, help="output format")
    common.add_argument("--cache", help="JSON-lines result cache")
    common.add_argument("--escalate-limit", type=int, help="rescan bound for unexplained survivors")
    common.add_argument("--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(prog="triform", description="Regular ternary triangular forms engine")
    sub = parser.add_subparsers(dest="command", required=True)

    def form_command(name, handler, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("a", type=int)
        p.add_argument("b", type=int)
        p.add_argument("c", type=int)
        p.set_defaults(handler=handler)
        return p

    form_command("check", cmd_check, "regularity scan of one form")
    local = form_command("local", cmd_local, "decide Z_p representability")
    local.add_argument("m", type=int)
    local.add_argument("p", type=int)
    local.add_argument("--oracle", action="store_true", help="cross-check with the residue oracle")
    lam = form_command("lambda", cmd_lambda, "apply lambda_p, or stabilize when p is omitted")
    lam.add_argument("p", type=int, nargs="?")
    pre = form_command("preimages", cmd_preimages, "inverse images under lambda_p")
    pre.add_argument("p", type=int)

    for name, handler, help_text in (
        ("scan-stable", cmd_scan_stable, "stable regular form search"),
        ("exclude", cmd_exclude, "exclusion of 3 <= a <= 10"),
        ("tree", cmd_tree, "lambda-tree expansion from the stable forms"),
        ("missing-primes", cmd_missing_primes, "missing-prime candidates"),
        ("table1", cmd_table1, "a_ij table against the printed one"),
    ):
        sub.add_parser(name, parents=[common], help=help_text).set_defaults(handler=handler)

    ids = sub.add_parser("identities", parents=[common], help="identity and isometry suite")
    ids.add_argument("--n-max", type=int, default=IDENTITY_N_MAX)
    ids.add_argument("--m-max", type=int, default=LEM13_M_MAX)
    ids.add_argument("--jones-max", type=int, default=JONES_N_MAX)
    ids.set_defaults(handler=cmd_identities)

    bnd = sub.add_parser("bounds", parents=[common], help="u_k / v_k table and derived c bounds")
    bnd.add_argument("--b-max", type=int, default=1000)
    bnd.set_defaults(handler=cmd_bounds)

    uni = sub.add_parser("universal", parents=[common], help="Liouville and Gauss universality")
    uni.add_argument("--n-max", type=int, default=UNIVERSALITY_N_MAX)
    uni.set_defaults(handler=cmd_universal)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(SCAN_CONFIG["log_dir"], args.verbose)
    try:
        config = get_run_config(limit=args.limit, c_max=args.c_max, max_depth=args.max_depth, jobs=args.jobs,
                                format=args.format, cache_path=args.cache, escalate_limit=args.escalate_limit)
        logger.info(f"Running {args.command} with {config}")
        return args.handler(args, config)
    except (ValueError, OverflowError) as e:
        logger.error(f"{args.command}: {e}")
        print_fail(f"Error: {e}")
        return EXIT_USAGE
    except (StabilizationError, WitnessNotFoundError) as e:
        logger.error(f"{args.command}: {e}")
        print_fail(f"Error: {e}")
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
