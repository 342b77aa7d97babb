"""Command-line interface.

Exit codes: 0 success, 1 usage or I/O problems (including malformed
documents and bad overrides), 2 scenario validation failures.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Sequence

from .engine import World, events_csv, metrics_csv, write_text_atomic
from .errors import ScenarioError, UnknownIdError
from .hierarchy import atomic_leaves, propagate_value_connection
from .scenario import build_scenario
from .state import init_agent_state
from .validate import validate_scenario


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; this CLI reserves 2 for
    # validation failures, so remap to 1.
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageError(message)


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


def _load_document(path: str) -> dict[str, Any]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be an object")
    return doc


def _parse_override(token: str) -> tuple[str, Any]:
    key, sep, raw = token.partition("=")
    if not sep or not key:
        raise _UsageError(f"override must look like key=value, got {token!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def _build_with_overrides(path: str, overrides: Sequence[str]):
    doc = _load_document(path)
    if overrides:
        merged = dict(doc.get("globals", {}))
        for token in overrides:
            key, value = _parse_override(token)
            merged[key] = value
        doc = {**doc, "globals": merged}
    return build_scenario(doc, check_refs=False)


def _report(violations) -> None:
    for v in violations:
        print(f"{v.kind.value}: {v.message}")


def _cmd_validate(args) -> int:
    try:
        scenario = _build_with_overrides(args.scenario, ())
    except (OSError, json.JSONDecodeError, ScenarioError) as exc:
        return _fail(str(exc))
    violations = validate_scenario(scenario)
    if violations:
        _report(violations)
        return 2
    print("OK")
    return 0


def _write_run_outputs(out: Path, events: list, metrics: list, atomic_ids,
                       force: bool) -> str | None:
    out.mkdir(parents=True, exist_ok=True)
    events_path = out / "events.csv"
    metrics_path = out / "metrics.csv"
    if not force:
        existing = [p for p in (events_path, metrics_path) if p.exists()]
        if existing:
            return f"refusing to overwrite {existing[0]} (use --force)"
    write_text_atomic(events_csv(events), events_path)
    write_text_atomic(metrics_csv(metrics, atomic_ids), metrics_path)
    return None


def _cmd_run(args) -> int:
    if args.ticks < 0:
        return _fail("--ticks must be non-negative")
    try:
        scenario = _build_with_overrides(args.scenario, args.override)
    except (OSError, json.JSONDecodeError, ScenarioError) as exc:
        return _fail(str(exc))
    violations = validate_scenario(scenario)
    if violations:
        _report(violations)
        return 2
    world = World(scenario, args.seed, validate=False)
    events, metrics = world.run(args.ticks)
    problem = _write_run_outputs(Path(args.out), events, metrics,
                                 scenario.index.atomic_ids, args.force)
    if problem:
        return _fail(problem)
    final_fraction = metrics[-1].habitual_fraction if metrics else 0.0
    print(
        f"ticks={args.ticks} agents={len(scenario.index.agent_ids)} "
        f"final_habitual_fraction={final_fraction:.6f}"
    )
    return 0


def _cmd_infer(args) -> int:
    try:
        scenario = _build_with_overrides(args.scenario, ())
    except (OSError, json.JSONDecodeError, ScenarioError) as exc:
        return _fail(str(exc))
    violations = validate_scenario(scenario)
    if violations:
        _report(violations)
        return 2
    try:
        if args.op == "leaves":
            for leaf in sorted(atomic_leaves(args.activity, scenario)):
                print(leaf)
        else:
            if not args.value or not args.agent:
                return _fail("--op propagate needs --value and --agent")
            if args.agent not in scenario.index.agent_specs:
                return _fail(f"unknown agent: {args.agent!r}")
            state = init_agent_state(scenario, args.agent)
            result = propagate_value_connection(state, args.value, args.activity, scenario)
            print(f"{args.activity} {args.value} {result:.6f}")
    except UnknownIdError as exc:
        return _fail(str(exc))
    return 0


def _cmd_sweep(args) -> int:
    grid: list[tuple[str, list[str]]] = []
    for token in args.param:
        key, sep, raw = token.partition("=")
        if not sep or not key or not raw:
            return _fail(f"--param must look like name=v1,v2,..., got {token!r}")
        grid.append((key, raw.split(",")))
    out = Path(args.out)
    sweep_path = out / "sweep.csv"
    if sweep_path.exists() and not args.force:
        return _fail(f"refusing to overwrite {sweep_path} (use --force)")

    names = [k for k, _ in grid]
    combos = list(itertools.product(*(vals for _, vals in grid)))

    def one(combo: tuple[str, ...]):
        overrides = [f"{k}={v}" for k, v in zip(names, combo)]
        scenario = _build_with_overrides(args.scenario, overrides)
        violations = validate_scenario(scenario)
        if violations:
            raise ScenarioError([f"{v.kind.value}: {v.message}" for v in violations])
        world = World(scenario, args.seed, validate=False)
        return world.run(args.ticks), scenario.index.atomic_ids

    try:
        if args.jobs > 1:
            with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(one, combos))
        else:
            results = [one(c) for c in combos]
    except (OSError, json.JSONDecodeError, ScenarioError) as exc:
        return _fail(str(exc))

    rows = [",".join(["run"] + names + ["final_habitual_fraction", "final_mean_strength"])]
    for i, (combo, ((events, metrics), atomic_ids)) in enumerate(zip(combos, results)):
        label = f"run_{i:03d}"
        problem = _write_run_outputs(out / label, events, metrics, atomic_ids, args.force)
        if problem:
            return _fail(problem)
        fraction = metrics[-1].habitual_fraction if metrics else 0.0
        strength = metrics[-1].mean_strength if metrics else 0.0
        rows.append(",".join([label, *combo, f"{fraction:.6f}", f"{strength:.6f}"]))
    out.mkdir(parents=True, exist_ok=True)
    write_text_atomic("\n".join(rows) + "\n", sweep_path)
    print(f"runs={len(combos)} out={out}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="sopra", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scenario document")
    p.add_argument("scenario")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("run", help="simulate and write event/metrics CSVs")
    p.add_argument("--scenario", required=True)
    p.add_argument("--ticks", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="./out")
    p.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                   help="override a globals entry (repeatable)")
    p.add_argument("--force", action="store_true", help="overwrite existing outputs")
    p.set_defaults(fn=_cmd_run)

    p = sub.add_parser("infer", help="query the activity hierarchy")
    p.add_argument("--scenario", required=True)
    p.add_argument("--op", choices=("leaves", "propagate"), required=True)
    p.add_argument("--activity", required=True)
    p.add_argument("--value")
    p.add_argument("--agent")
    p.set_defaults(fn=_cmd_infer)

    p = sub.add_parser("sweep", help="run a cartesian grid of overrides")
    p.add_argument("--scenario", required=True)
    p.add_argument("--ticks", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="./out")
    p.add_argument("--param", action="append", default=[], metavar="NAME=V1,V2",
                   help="values to sweep for one globals entry (repeatable)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--force", action="store_true")
    p.set_defaults(fn=_cmd_sweep)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except _UsageError:
        return 1


if __name__ == "__main__":
    sys.exit(main())
