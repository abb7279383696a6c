"""Command-line entry point.

Exit codes are a stable contract:
  0  verified / proved / success
  1  usage, I/O or input-validation error
  2  refuted (verify)
  3  iteration budget exhausted (loop)

With ``--output json`` stdout carries only machine-readable documents;
human-readable notes go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .errors import ParseError, PathproofError, WorkspaceError
from .gcode import MachineState
from .loop import DEFAULT_MAX_ITERS, GeneratorHandle, run_loop, verify_once
from .workspace import (
    emit_generator_context,
    load_workspace,
    normalize_tool_id,
    workspace_from_json,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_REFUTED = 2
EXIT_EXHAUSTED = 3


def _parse_start(text: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("--start must be x,y,z in mm")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathproof",
        description="Separation-logic safety verifier for G-code toolpaths.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="prove or refute one G-code program")
    p_verify.add_argument("-w", "--workspace", required=True)
    p_verify.add_argument("-g", "--gcode", required=True)
    p_verify.add_argument("--start", type=_parse_start, default=None, metavar="X,Y,Z")
    p_verify.add_argument("--tool", default=None, help="initially mounted tool id")
    p_verify.add_argument("--strict", action="store_true")
    p_verify.add_argument("--cross-check", action="store_true")
    p_verify.add_argument("--output", choices=("text", "json"), default="text")

    p_loop = sub.add_parser("loop", help="run the generate-verify-repair loop")
    p_loop.add_argument("-w", "--workspace", required=True)
    p_loop.add_argument("--intent", required=True)
    p_loop.add_argument("--generator", required=True, help="external generator command")
    p_loop.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    p_loop.add_argument("--tool", default=None)
    p_loop.add_argument("--timeout", type=float, default=60.0)
    p_loop.add_argument("-o", "--transcript", default=None, help="write transcript JSON here")

    p_ctx = sub.add_parser("context", help="print the generator constraint document")
    p_ctx.add_argument("-w", "--workspace", required=True)
    p_ctx.add_argument("--tool", required=True)

    p_ing = sub.add_parser(
        "extract-ingest",
        help="wrap an extractor obstacle fragment into a validated workspace",
    )
    p_ing.add_argument("--fragment", required=True)
    p_ing.add_argument("-o", "--out", required=True)
    p_ing.add_argument("--margin", type=float, default=50.0, help="machine-limit margin (mm)")
    p_ing.add_argument("--resolution", type=float, default=1.0)
    p_ing.add_argument("--epsilon", type=float, default=2.0)
    p_ing.add_argument("--safe-z", type=float, default=50.0)
    p_ing.add_argument(
        "--tool",
        default="T01=5.0,30.0",
        help="tool table entry as ID=radius_mm,length_mm",
    )
    return parser


def _cmd_verify(args) -> int:
    try:
        w = load_workspace(args.workspace, strict=args.strict)
    except WorkspaceError as exc:
        print(f"workspace error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    try:
        with open(args.gcode, "r", encoding="utf-8") as fh:
            gcode_text = fh.read()
    except OSError as exc:
        print(f"cannot read G-code file: {exc}", file=sys.stderr)
        return EXIT_ERROR

    start_pos = args.start if args.start is not None else (0.0, 0.0, w.safe_z_mm)
    tool = normalize_tool_id(args.tool) if args.tool else None
    start = MachineState(position=start_pos, active_tool=tool)
    try:
        outcome, report = verify_once(w, gcode_text, start, cross_check=args.cross_check)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except PathproofError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    if args.output == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        if outcome.verified:
            print(f"VERIFIED: {outcome.steps} motion step(s) proven disjoint")
        else:
            print(report["feedback_text"], end="")
        if "cross_check" in report:
            print(f"cross-check: {report['cross_check']}", file=sys.stderr)
    return EXIT_OK if outcome.verified else EXIT_REFUTED


def _cmd_loop(args) -> int:
    try:
        w = load_workspace(args.workspace)
        gen = GeneratorHandle(command=args.generator, timeout_s=args.timeout)
        tool = normalize_tool_id(args.tool) if args.tool else None
        transcript = run_loop(w, args.intent, gen, max_iters=args.max_iters, active_tool=tool)
    except (PathproofError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    text = transcript.to_json()
    if args.transcript:
        with open(args.transcript, "w", encoding="utf-8") as fh:
            fh.write(text)
    print(text, end="")
    print(f"terminal: {transcript.terminal} after {len(transcript.iterations)} iteration(s)", file=sys.stderr)
    if transcript.terminal == "proved":
        return EXIT_OK
    if transcript.terminal == "exhausted":
        return EXIT_EXHAUSTED
    return EXIT_ERROR


def _cmd_context(args) -> int:
    try:
        w = load_workspace(args.workspace)
        print(emit_generator_context(w, normalize_tool_id(args.tool)), end="")
    except PathproofError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def _cmd_extract_ingest(args) -> int:
    try:
        with open(args.fragment, "r", encoding="utf-8") as fh:
            fragment = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read fragment: {exc}", file=sys.stderr)
        return EXIT_ERROR
    obstacles = fragment.get("obstacles", [])
    if not obstacles:
        print("fragment contains no obstacles", file=sys.stderr)

    try:
        tool_id, spec = args.tool.split("=", 1)
        radius, length = (float(v) for v in spec.split(","))
    except ValueError:
        print("--tool must look like T01=radius,length", file=sys.stderr)
        return EXIT_ERROR

    # Machine limits wrap every obstacle with the requested margin.
    lo = [0.0, 0.0, 0.0]
    hi = [args.margin, args.margin, max(args.safe_z, args.margin)]
    doc = {
        "machine_limits": {},
        "grid_resolution_mm": args.resolution,
        "epsilon_mm": args.epsilon,
        "safe_z_mm": args.safe_z,
        "tools": {normalize_tool_id(tool_id): {"radius_mm": radius, "length_mm": length}},
        "obstacles": obstacles,
    }
    try:
        from .shapes import shape_from_json

        for entry in obstacles:
            slo, shi = shape_from_json(entry["shape"]).aabb()
            for a in range(3):
                lo[a] = min(lo[a], slo[a] - args.margin)
                hi[a] = max(hi[a], shi[a] + args.margin)
        for a, name in enumerate(("x", "y", "z")):
            doc["machine_limits"][name] = [lo[a], hi[a]]
        w = workspace_from_json(doc)
    except (WorkspaceError, KeyError, TypeError) as exc:
        print(f"fragment does not validate: {exc}", file=sys.stderr)
        return EXIT_ERROR

    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(
        f"wrapped {len(obstacles)} obstacle(s) into {args.out} "
        f"({len(w.obstacles)} validated)",
        file=sys.stderr,
    )
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "verify": _cmd_verify,
        "loop": _cmd_loop,
        "context": _cmd_context,
        "extract-ingest": _cmd_extract_ingest,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
