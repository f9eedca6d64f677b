"""Command-line front end.

Exit status: 0 success, 1 input or validation error, 2 usage error,
3 ``recognize`` finished and at least one alert was raised.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .artifact import (
    ModelArtifact,
    atomic_write,
    parse_events,
    parse_weights,
    render_report,
)
from .context import parse_context, parse_reference_times
from .engine import Engine, EngineConfig, OutputKind, Timestamp
from .errors import KidModelError
from .fca import enumerate_concepts, format_concept
from .space import DimensionWeights

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_ALERT = 3


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        atomic_write(out, text)


def cmd_learn(args) -> int:
    context = parse_context(_read(args.context), name=args.context)
    reftimes = parse_reference_times(_read(args.reftimes), context, name=args.reftimes)
    weights = parse_weights(_read(args.weights), source=args.weights) if args.weights else None
    artifact = ModelArtifact(context, reftimes, weights or DimensionWeights())
    artifact.memory()  # validates weights against the context
    atomic_write(args.out, artifact.to_json())
    print(f"learned {context.n_activities} activities over a {context.n_attributes}-attribute basis")
    return EXIT_OK


def cmd_recognize(args) -> int:
    artifact = ModelArtifact.from_json(_read(args.model), source=args.model)
    events = parse_events(_read(args.events), artifact.context, source=args.events)
    config = EngineConfig(theta=args.theta, tick_seconds=args.tick_seconds)
    engine = Engine(artifact.memory(), artifact.reftimes, config)
    if args.horizon is not None:
        horizon = Timestamp.parse(args.horizon)
    elif events:
        horizon = events[-1].at.end_of_day()
    else:
        horizon = None
    outputs = engine.run_stream(events, horizon) if horizon is not None else []
    _emit(render_report(outputs), args.out)
    if any(o.kind is OutputKind.ALERT for o in outputs):
        return EXIT_ALERT
    return EXIT_OK


def cmd_lattice(args) -> int:
    context = parse_context(_read(args.context), name=args.context)
    lines = [format_concept(context, c) for c in enumerate_concepts(context)]
    _emit("".join(line + "\n" for line in lines), args.out)
    return EXIT_OK


def cmd_inspect(args) -> int:
    artifact = ModelArtifact.from_json(_read(args.model), source=args.model)
    ctx = artifact.context
    entry = artifact.memory().entry(args.activity)
    concept = entry.concept
    lines = [
        f"activity: {entry.activity}",
        f"extent: {', '.join(ctx.ordered_acts(concept.extent)) or '-'}",
        f"positive: {', '.join(str(a) for a in ctx.ordered_attrs(concept.positive_intent)) or '-'}",
        f"negative: {', '.join(str(a) for a in ctx.ordered_attrs(concept.negative_intent)) or '-'}",
        "vector:",
    ]
    if entry.vector is None:
        lines.append("  (undefined: no contributing attribute)")
    else:
        width = max(len(str(a)) for a in ctx.attributes)
        lines += [f"  {str(a):<{width}}  {c:.9f}" for a, c in zip(ctx.attributes, entry.vector.coords)]
    print("\n".join(lines))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kidmodel", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="build a model artifact from a context and reference times")
    p.add_argument("--context", required=True)
    p.add_argument("--reftimes", required=True)
    p.add_argument("--weights", help="JSON object of dimension -> positive weight (default: all 1)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("recognize", help="replay an event stream and write a report")
    p.add_argument("--model", required=True)
    p.add_argument("--events", required=True)
    p.add_argument("--theta", type=float, default=0.6)
    p.add_argument("--tick-seconds", type=int, default=60)
    p.add_argument("--horizon", help="D:HH:MM:SS (default: end of the last event's day)")
    p.add_argument("--out", help="report path (default: stdout)")
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("lattice", help="print every formal concept of a context")
    p.add_argument("--context", required=True)
    p.add_argument("--out", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("inspect", help="show an activity's three-way concept and state vector")
    p.add_argument("--model", required=True)
    p.add_argument("activity")
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (KidModelError, ValueError, OSError) as exc:
        print(f"kidmodel {args.command}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
