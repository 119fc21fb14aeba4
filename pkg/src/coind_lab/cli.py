from __future__ import annotations

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional

from .action import scf_action_violation, trivial_action
from .catalog import get_group
from .coinduction import coinduce, t_infinity
from .config import Budget
from .errors import BudgetExceeded, InternalConsistencyError, SpecFileError, ValidationError
from .filtration import lower_central_series
from .logging_config import configure_logging
from .oracles import oracle_lower_central_series, oracle_max_subfiltration
from .report import VerificationReport, render, write_report
from .spec_loader import BUNDLED_SPEC, SpecFile, parse_spec, split_entry
from .top_coinduction import t_top_infinity
from .verify import SUITES, run_suite, verify_scf_adjunction, verify_top_adjunction

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _spec(args: argparse.Namespace, budget: Budget) -> SpecFile:
    return parse_spec(args.spec, budget)


def cmd_validate(args: argparse.Namespace, budget: Budget) -> VerificationReport:
    path = args.path or args.spec
    spec = parse_spec(path, budget)
    report = VerificationReport(suite="validate")
    for section, count in spec.summary().items():
        report.add(section, "loaded", True, count=count)
    for name, point in spec.points.items():
        report.add(f"points/{name}", "certified", point.certified)
    return report


def cmd_lcs(args: argparse.Namespace, budget: Budget) -> VerificationReport:
    spec = _spec(args, budget)
    if args.group in spec.groups:
        G = spec.groups[args.group]
    else:
        try:
            G = get_group(args.group)
        except KeyError as e:
            raise SpecFileError(f"unknown group '{args.group}': not in the spec or the catalog") from e
    lcs = lower_central_series(G)
    oracle = tuple(len(t) for t in oracle_lower_central_series(G))
    report = VerificationReport(suite="lcs")
    report.add(
        G.label,
        "lower-central-series",
        lcs.orders == oracle,
        orders=list(lcs.orders),
        levels=[G.describe(level.members) for level in lcs.levels],
    )
    return report


def cmd_t_infinity(args: argparse.Namespace, budget: Budget) -> VerificationReport:
    spec = _spec(args, budget)
    entry = spec.lookup("actions", args.action)
    if entry.actor_f is None or entry.target_f is None:
        raise SpecFileError(f"actions.{args.action}: t-infinity needs both filtrations")
    tower = t_infinity(entry.actor_f, entry.target_f, entry.action, budget)
    report = VerificationReport(suite="t-infinity")
    for k, level in enumerate(tower.levels):
        report.add(f"{args.action}/t{k}", "level", True, orders=list(level.orders))
    report.add(
        args.action,
        "limit",
        True,
        orders=list(tower.limit.orders),
        levels=len(tower.levels),
        iterations=tower.iterations,
        already_certified=scf_action_violation(entry.action, entry.actor_f, entry.target_f) is None,
    )
    return report


def cmd_coinduce(args: argparse.Namespace, budget: Budget) -> VerificationReport:
    spec = _spec(args, budget)
    alpha, E_f, B_f = split_entry(spec.lookup("morphisms", args.alpha), f"morphisms.{args.alpha}")
    Y = spec.lookup("points", args.point)
    if Y.actor_f != E_f:
        raise SpecFileError(f"points.{args.point}: actor filtration does not match the source of {args.alpha}")
    coinduced = coinduce(alpha, B_f, Y, budget)
    report = VerificationReport(suite="coinduce")
    report.add(f"{args.alpha}/{args.point}", "coinduced", coinduced.point.certified, **coinduced.record())
    return report


def cmd_verify_adjunction(args: argparse.Namespace, budget: Budget) -> VerificationReport:
    spec = _spec(args, budget)
    alpha, E_f, B_f = split_entry(spec.lookup("morphisms", args.alpha), f"morphisms.{args.alpha}")
    X = spec.lookup("points", args.X)
    Y = spec.lookup("points", args.Y)
    if X.actor_f != B_f:
        raise SpecFileError(f"points.{args.X}: actor filtration does not match the target of {args.alpha}")
    if Y.actor_f != E_f:
        raise SpecFileError(f"points.{args.Y}: actor filtration does not match the source of {args.alpha}")
    return verify_scf_adjunction(
        alpha, X, Y, budget, seed=args.seed, instance=f"{args.alpha}/{args.X}/{args.Y}"
    )


def _top_action(spec: SpecFile, args: argparse.Namespace):
    B = spec.lookup("topgroups", args.B)
    G = spec.lookup("topgroups", args.G)
    if args.action:
        a = spec.lookup("actions", args.action).action
    else:
        a = trivial_action(B.group, G.group)
    return B, G, a


def cmd_top_coinduce(args: argparse.Namespace, budget: Budget) -> VerificationReport:
    spec = _spec(args, budget)
    B, G, a = _top_action(spec, args)
    tower = t_top_infinity(B, G, a, budget)
    report = VerificationReport(suite="top-coinduce")
    for k, level in enumerate(tower.levels):
        report.add(
            f"{args.B}/{args.G}/t{k}",
            "level",
            True,
            members=list(level.subgroup.members),
            discrete=level.topology.is_discrete(),
            indiscrete=level.topology.is_indiscrete(),
        )
    limit = tower.limit
    report.add(
        f"{args.B}/{args.G}",
        "limit",
        limit.jointly_continuous,
        order=limit.target.order,
        levels=len(tower.levels),
        iterations=tower.iterations,
    )
    return report


def cmd_verify_top(args: argparse.Namespace, budget: Budget) -> VerificationReport:
    spec = _spec(args, budget)
    B, G, a = _top_action(spec, args)
    return verify_top_adjunction(B, G, a, budget=budget, instance=f"{args.B}/{args.G}")


def cmd_oracle(args: argparse.Namespace, budget: Budget) -> VerificationReport:
    spec = _spec(args, budget)
    entry = spec.lookup("actions", args.action)
    if entry.actor_f is None or entry.target_f is None:
        raise SpecFileError(f"actions.{args.action}: oracle needs both filtrations")
    tower = t_infinity(entry.actor_f, entry.target_f, entry.action, budget)
    oracle = oracle_max_subfiltration(entry.actor_f, entry.target_f, entry.action, budget=budget)
    report = VerificationReport(suite="oracle")
    report.add(
        args.action,
        "maximal",
        tower.limit == oracle,
        witness=None if tower.limit == oracle else [tower.limit.as_lists(), oracle.as_lists()],
        limit=list(tower.limit.orders),
        oracle=list(oracle.orders),
    )
    return report


def cmd_suite(args: argparse.Namespace, budget: Budget) -> VerificationReport:
    return run_suite(args.name, seed=args.seed, budget=budget, count=args.count)


COMMANDS: Dict[str, Callable[[argparse.Namespace, Budget], VerificationReport]] = {
    "validate": cmd_validate,
    "lcs": cmd_lcs,
    "t-infinity": cmd_t_infinity,
    "coinduce": cmd_coinduce,
    "verify-adjunction": cmd_verify_adjunction,
    "top-coinduce": cmd_top_coinduce,
    "verify-top": cmd_verify_top,
    "oracle": cmd_oracle,
    "suite": cmd_suite,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", default=BUNDLED_SPEC, help="Spec file (default: bundled examples)")
    common.add_argument("--budget", type=int, default=None, help="Maximum candidate maps per enumeration")
    common.add_argument("--seed", type=int, default=0, help="Seed for sampled instances")
    common.add_argument("--format", choices=("human", "machine"), default=None, help="Report format")
    common.add_argument("--out", default=None, help="Write the report here (.jsonl, .csv or text)")
    common.add_argument("--log-dir", default=None, help="Directory for the rotating log file")
    common.add_argument("-v", "--verbose", action="store_true", help="Log at DEBUG level")

    parser = argparse.ArgumentParser(
        prog="coind-lab", description="Co-induction workbench for strongly central filtrations"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="Load and certify a spec file")
    p.add_argument("path", nargs="?", default=None)

    p = sub.add_parser("lcs", parents=[common], help="Lower central series of a group")
    p.add_argument("group", help="Group name from the spec or the catalog")

    p = sub.add_parser("t-infinity", parents=[common], help="Transport tower of a filtered action")
    p.add_argument("action")

    p = sub.add_parser("coinduce", parents=[common], help="Co-induce a point along a morphism")
    p.add_argument("alpha")
    p.add_argument("point")

    p = sub.add_parser("verify-adjunction", parents=[common], help="Check Hom(α*X, Y) ≅ Hom(X, α_!Y)")
    p.add_argument("alpha")
    p.add_argument("X")
    p.add_argument("Y")

    for name, text in (("top-coinduce", "Topological transport tower"), ("verify-top", "Topological adjunction")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("B")
        p.add_argument("G")
        p.add_argument("action", nargs="?", default=None, help="Action name (default: trivial)")

    p = sub.add_parser("oracle", parents=[common], help="Compare t-infinity with exhaustive search")
    p.add_argument("action")

    p = sub.add_parser("suite", parents=[common], help="Run a seeded verification suite")
    p.add_argument("name", choices=sorted(SUITES))
    p.add_argument("--count", type=int, default=None, help="Number of instances (default: suite minimum)")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_dir, verbose=args.verbose)

    try:
        budget = Budget.from_env()
        if args.budget is not None:
            budget = budget.with_candidates(args.budget)
        report = COMMANDS[args.command](args, budget)
    except (SpecFileError, ValidationError, BudgetExceeded, ValueError) as e:
        logger.info("%s rejected its input: %s", args.command, e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InternalConsistencyError as e:
        logger.error("%s: internal consistency failure: %s", args.command, e)
        print(f"verification failed: {e}", file=sys.stderr)
        return EXIT_FAILED

    if args.out:
        write_report(report, args.out, args.format)
        print(f"Wrote {len(report.checks)} checks to {args.out} ({'passed' if report.passed else 'FAILED'})")
    else:
        sys.stdout.write(render(report, args.format or "human"))
    for failure in report.failures[:5]:
        logger.warning("%s %s failed, witness %s", failure.instance, failure.check, failure.witness)
    return EXIT_OK if report.passed else EXIT_FAILED


if __name__ == "__main__":
    raise SystemExit(main())
