"""Command line entry point: validate, atomize, plan, compose, mock-serve.

Exit codes:
  0  success (plan found / execution completed / all files valid)
  1  invalid input, I/O or configuration error
  2  no plan exists
  3  search truncated by the depth limit before any plan was found
  4  plan execution failed
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .atomizer import AtomizationMode, build_problem
from .planner import PlanningError, RankingWeights, SearchLimits, rank_plans, search
from .services import (
    MockServer,
    ServiceConfigError,
    ThresholdRule,
    execute_plan,
    load_bindings,
    load_threshold,
)
from .shop_syntax import (
    PAtom,
    ShopSyntaxError,
    parse_domain,
    parse_problem,
    plan_to_json,
    print_plan,
    print_problem,
    read_one,
)
from .thing_model import (
    CloudServiceDescription,
    SawsdlError,
    ThingDescription,
    ThingModelError,
    JsonSyntaxError,
    description_to_dict,
    expand_thing,
    parse_json_preserving,
    parse_sawsdl,
    validate_cloud,
    validate_description,
)
from .vocab import Vocabulary, VocabularyError, bundled_vocabulary, load_vocabulary

EXIT_OK, EXIT_INVALID, EXIT_NO_PLAN, EXIT_TRUNCATED, EXIT_EXEC_FAILED = 0, 1, 2, 3, 4

DEFAULT_RULE = ThresholdRule(low=18.0, high=26.0, on_value=100.0, off_value=0.0)

log = logging.getLogger("iotcompose")


class StageError(Exception):
    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"{stage}: {message}")


def _vocab(args) -> Vocabulary:
    if args.vocab is None:
        return bundled_vocabulary()
    try:
        return load_vocabulary(Path(args.vocab).read_text("utf-8"))
    except (OSError, VocabularyError) as exc:
        raise StageError("vocabulary", str(exc)) from None


def load_description(path: str | Path, vocab: Vocabulary) -> ThingDescription | CloudServiceDescription:
    """Parse a ``.wsdl`` cloud descriptor or a JSON-LD thing annotation."""
    path = Path(path)
    text = path.read_text("utf-8")
    if path.suffix.lower() in (".wsdl", ".xml"):
        return parse_sawsdl(text)
    return expand_thing(parse_json_preserving(text), vocab)


def _load_all(paths: Sequence[str], vocab: Vocabulary):
    things, clouds = [], []
    for p in paths:
        try:
            d = load_description(p, vocab)
        except OSError as exc:
            raise StageError("load", f"{p}: {exc.strerror or exc}") from None
        except (JsonSyntaxError, ThingModelError, SawsdlError) as exc:
            raise StageError("parse", f"{p}: {exc}") from None
        (clouds if isinstance(d, CloudServiceDescription) else things).append(d)
    return things, clouds


def _tasks(exprs: Sequence[str]) -> list[PAtom]:
    tasks = []
    for expr in exprs:
        try:
            task = PAtom.parse(expr) if isinstance(read_one(expr), list) else None
        except ShopSyntaxError as exc:
            raise StageError("task", f"{expr!r}: {exc}") from None
        if task is None or not task.is_ground:
            raise StageError("task", f"{expr!r} is not a ground atom")
        tasks.append(task)
    return tasks


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.output:
        Path(args.output).write_text(text, "utf-8")
    else:
        sys.stdout.write(text)


def _read_shop(path: str, parser, stage: str):
    try:
        return parser(Path(path).read_text("utf-8"))
    except OSError as exc:
        raise StageError(stage, f"{path}: {exc.strerror or exc}") from None
    except ShopSyntaxError as exc:
        raise StageError(stage, f"{path}: {exc}") from None


def _mode(name: str) -> AtomizationMode:
    return AtomizationMode(name)


# ---------------------------------------------------------------------------

def cmd_validate(args) -> int:
    vocab = _vocab(args)
    failures = 0
    dumps = []
    for p in args.paths:
        try:
            d = load_description(p, vocab)
        except OSError as exc:
            print(f"{p}: I/O error: {exc.strerror or exc}", file=sys.stderr)
            failures += 1
            continue
        except (JsonSyntaxError, ThingModelError, SawsdlError) as exc:
            print(f"{p}: {exc}", file=sys.stderr)
            failures += 1
            continue
        diags = validate_cloud(d, vocab) if isinstance(d, CloudServiceDescription) else validate_description(d, vocab)
        for diag in diags:
            print(f"{p}: {diag}", file=sys.stderr)
        failures += bool(diags)
        dumps.append(description_to_dict(d))
    if args.dump:
        _emit(args, json.dumps(dumps if len(args.paths) != 1 else dumps[0] if dumps else [],
                               indent=2, ensure_ascii=False))
    return EXIT_INVALID if failures else EXIT_OK


def cmd_atomize(args) -> int:
    vocab = _vocab(args)
    things, clouds = _load_all(args.inputs, vocab)
    problem = build_problem(args.problem_name, args.domain_name, things, clouds,
                            _tasks(args.task), _mode(args.mode))
    _emit(args, print_problem(problem))
    return EXIT_OK


def _format_ranked(ranked, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(
            [{**plan_to_json(r.plan), "score": r.score, "score_breakdown": r.score_breakdown} for r in ranked],
            indent=2,
        )
    lines = []
    for i, r in enumerate(ranked, start=1):
        parts = ", ".join(f"{k} {v:g}" for k, v in r.score_breakdown.items())
        lines.append(f"plan {i}: cost {r.plan.total_cost:g} score {r.score:.1f} ({parts})")
        lines += [f"  {step}" for step in r.plan.steps]
    return "\n".join(lines)


def _limits(args) -> SearchLimits:
    try:
        return SearchLimits(max_depth=args.max_depth, max_plans=args.max_plans)
    except ValueError as exc:
        raise StageError("plan", str(exc)) from None


def _plan(domain, problem, args):
    try:
        result = search(domain, problem, _limits(args))
    except PlanningError as exc:
        raise StageError("plan", str(exc)) from None
    log.debug("search: %d plan(s), truncated=%s", len(result.plans), result.truncated)
    if not result.plans:
        return None, (EXIT_TRUNCATED if result.truncated else EXIT_NO_PLAN)
    return result.plans, EXIT_OK


def cmd_plan(args) -> int:
    domain = _read_shop(args.domain, parse_domain, "domain")
    problem = _read_shop(args.problem, parse_problem, "problem")
    plans, code = _plan(domain, problem, args)
    if plans is None:
        print("search truncated by depth limit" if code == EXIT_TRUNCATED else "no plan", file=sys.stderr)
        return code
    fmt = "json" if args.json else args.format
    if args.rank:
        weights = RankingWeights(args.security_weight, args.protocol_weight)
        _emit(args, _format_ranked(rank_plans(plans, problem, weights), fmt))
    elif fmt == "json":
        _emit(args, json.dumps([plan_to_json(p) for p in plans], indent=2))
    else:
        _emit(args, "\n".join(print_plan(p) for p in plans))
    return EXIT_OK


def cmd_compose(args) -> int:
    vocab = _vocab(args)
    things, clouds = _load_all(args.inputs, vocab)
    for thing in things:
        diags = validate_description(thing, vocab)
        if diags:
            raise StageError("validate", f"{thing.name or thing.thing_id}: {'; '.join(diags)}")
    tasks = _tasks(args.task)
    if not tasks:
        raise StageError("task", "at least one --task is required")
    domain = _read_shop(args.domain, parse_domain, "domain")
    problem = build_problem("problem", domain.name, things, clouds, tasks, _mode(args.mode))
    log.debug("problem: %d state atoms, %d task(s)", len(problem.initial_state), len(problem.task_list))

    plans, code = _plan(domain, problem, args)
    if plans is None:
        print("search truncated by depth limit" if code == EXIT_TRUNCATED else "no plan", file=sys.stderr)
        return code
    ranked = rank_plans(plans, problem, RankingWeights(args.security_weight, args.protocol_weight))
    if args.dry_run:
        _emit(args, _format_ranked(ranked, args.format))
        return EXIT_OK

    if not args.bindings:
        raise StageError("execute", "--bindings is required unless --dry-run is given")
    try:
        bindings = load_bindings(args.bindings, args.base_url)
        rule = load_threshold(args.threshold) if args.threshold else DEFAULT_RULE
    except (OSError, ValueError, ServiceConfigError) as exc:
        raise StageError("execute", f"configuration: {exc}") from None

    best = ranked[0].plan
    log.debug("executing best plan (score %s)", ranked[0].score)
    report = execute_plan(best, bindings, rule, things)
    if args.format == "json":
        _emit(args, json.dumps({"plan": plan_to_json(best), **report.to_dict()}, indent=2, default=str))
    else:
        lines = [f"plan: {' '.join(str(s) for s in best.steps)}"]
        for rec in report.records:
            outcome = rec.error or f"-> {rec.response_status if rec.response_status is not None else 'ok'}"
            lines.append("  " + " ".join(x for x in (str(rec.step), rec.role, rec.endpoint, outcome) if x))
        lines.append(f"status: {report.status}")
        _emit(args, "\n".join(lines))
    return EXIT_OK if report.completed else EXIT_EXEC_FAILED


def cmd_mock_serve(args) -> int:
    sensors = {}
    for item in args.seed:
        name, _, value = item.partition("=")
        try:
            sensors[name] = float(value)
        except ValueError:
            raise StageError("mock-serve", f"--seed expects NAME=NUMBER, got {item!r}") from None
    server = MockServer(args.host, args.port, sensors)
    print(f"mock server listening on {server.url}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--vocab", help="vocabulary file (default: bundled)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("-o", "--output", help="write output here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    search_opts = argparse.ArgumentParser(add_help=False)
    search_opts.add_argument("--max-plans", type=int, default=8)
    search_opts.add_argument("--max-depth", type=int, default=64)
    search_opts.add_argument("--security-weight", type=float, default=1.0)
    search_opts.add_argument("--protocol-weight", type=float, default=1.0)

    modes = [m.value for m in AtomizationMode]
    head, _, exit_codes = __doc__.partition("\n\n")
    parser = argparse.ArgumentParser(prog="iotcompose", description=head, epilog=exit_codes,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="parse and validate descriptions")
    p.add_argument("paths", nargs="+")
    p.add_argument("--dump", action="store_true", help="print canonical JSON of each description")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("atomize", parents=[common], help="emit a planning problem from descriptions")
    p.add_argument("inputs", nargs="+", help=".jsonld thing or .wsdl cloud descriptions")
    p.add_argument("--mode", choices=modes, default="general")
    p.add_argument("--task", action="append", default=[], help="ground task, e.g. '(composeIoTServices A B)'")
    p.add_argument("--domain-name", default="iot")
    p.add_argument("--problem-name", default="problem")
    p.set_defaults(func=cmd_atomize)

    p = sub.add_parser("plan", parents=[common, search_opts], help="solve a domain/problem pair")
    p.add_argument("--domain", required=True)
    p.add_argument("--problem", required=True)
    p.add_argument("--rank", action="store_true")
    p.add_argument("--json", action="store_true", help="same as --format json")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("compose", parents=[common, search_opts], help="atomize, plan, rank and execute")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--domain", required=True)
    p.add_argument("--task", action="append", default=[])
    p.add_argument("--mode", choices=modes, default="general")
    p.add_argument("--bindings")
    p.add_argument("--threshold")
    p.add_argument("--base-url", help="override the base URL of every binding endpoint")
    p.add_argument("--dry-run", action="store_true", help="stop after ranking")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("mock-serve", parents=[common], help="run the mock device/cloud server")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--seed", action="append", default=[], metavar="NAME=VALUE")
    p.set_defaults(func=cmd_mock_serve)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except StageError as exc:
        print(f"error [{exc}]", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
