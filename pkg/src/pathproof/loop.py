"""The generate-verify-repair loop and the single-shot verification pass.

The generator is pluggable: an external process that receives one JSON
document on stdin (context, intent, history) and writes raw G-code to
stdout, or an in-process scripted mock for tests and demos.  Each failed
iteration appends a structured feedback signal to the history; the loop
stops on the first formal proof or when the iteration budget runs out.
"""

from __future__ import annotations

import json
import shlex
import subprocess
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

from . import oracle
from .errors import ParseError, PathproofError, UnknownToolError
from .feedback import render_signal
from .gcode import MachineState, parse_program
from .prover import ProofOutcome, initial_proof_state, prove_program
from .workspace import WorkspaceTopology, emit_generator_context

Point = Tuple[float, float, float]

DEFAULT_MAX_ITERS = 5


@dataclass(frozen=True)
class GeneratorHandle:
    """How to obtain candidate G-code: an external command or a script."""

    command: Optional[str] = None  # external process, shell-style string
    script: Optional[Sequence[str]] = None  # canned responses, one per iteration
    timeout_s: float = 60.0

    def __post_init__(self) -> None:
        if (self.command is None) == (self.script is None):
            raise ValueError("exactly one of command/script must be set")


class GeneratorFailure(PathproofError):
    """External generator timed out, crashed or exited nonzero."""


@dataclass(frozen=True)
class Iteration:
    gcode_text: str
    outcome: str  # "verified" | "refuted" | "parse_error"
    feedback: Optional[Dict] = None  # machine payload sent back to the generator


@dataclass(frozen=True)
class LoopTranscript:
    iterations: List[Iteration] = field(default_factory=list)
    terminal: str = "exhausted"  # "proved" | "exhausted" | "generator_error"
    error: Optional[str] = None

    def to_json(self) -> str:
        doc = {
            "terminal": self.terminal,
            "error": self.error,
            "iterations": [
                {
                    "gcode": it.gcode_text,
                    "outcome": it.outcome,
                    "feedback": it.feedback,
                }
                for it in self.iterations
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _invoke(gen: GeneratorHandle, payload: Dict, iteration: int) -> str:
    if gen.script is not None:
        index = min(iteration - 1, len(gen.script) - 1)
        return gen.script[index]
    try:
        proc = subprocess.run(
            shlex.split(gen.command),
            input=json.dumps(payload).encode("utf-8"),
            capture_output=True,
            timeout=gen.timeout_s,
        )
    except (OSError, subprocess.TimeoutExpired) as exc:
        raise GeneratorFailure(f"generator invocation failed: {exc}") from exc
    if proc.returncode != 0:
        raise GeneratorFailure(
            f"generator exited with status {proc.returncode}: "
            f"{proc.stderr.decode('utf-8', 'replace').strip()}"
        )
    return proc.stdout.decode("utf-8")


def verify_once(
    w: WorkspaceTopology,
    gcode_text: str,
    start: Optional[MachineState] = None,
    iteration: int = 1,
    cross_check: bool = False,
) -> Tuple[ProofOutcome, Dict]:
    """One full parse -> footprint -> prove pass, plus the JSON report.

    Parse errors and unknown tools propagate as exceptions; the report is
    machine-readable and embeds the rendered feedback signal on refutation.
    """
    if start is None:
        start = MachineState(position=(0.0, 0.0, w.safe_z_mm))
    cmds = parse_program(gcode_text, start)
    state, placement = initial_proof_state(
        w, start.position, active_tool=start.active_tool
    )
    if placement is not None:
        first_n = next((c.line_no for c in cmds if c.line_no is not None), 5)
        placement = replace(placement, window=("N000", f"N{first_n:03d}"))
        outcome = ProofOutcome(verified=False, steps=0, conflict=placement)
    else:
        outcome = prove_program(cmds, state, w)

    report: Dict = {
        "outcome": "verified" if outcome.verified else "refuted",
        "steps_verified": outcome.steps,
        "per_step": [
            {
                "line": s.source_line,
                "n_word": s.line_no,
                "kind": s.kind,
                "footprint_voxels": s.footprint_size,
                "stock_removed_voxels": s.stock_removed,
            }
            for s in outcome.step_stats
        ],
    }
    if outcome.conflict is not None:
        signal = render_signal(outcome.conflict, w.grid, iteration, w.safe_z_mm)
        report["feedback"] = signal.machine_payload
        report["feedback_text"] = signal.human_text
    if cross_check:
        sim = oracle.simulate(cmds, w, start)
        report["cross_check"] = {
            "oracle_collisions": len(sim.collisions),
            # unsound would mean: we proved it safe, the simulator crashed it
            "sound": not (outcome.verified and not sim.clean),
            "prover_stricter": (not outcome.verified) and sim.clean,
        }
    return outcome, report


def run_loop(
    w: WorkspaceTopology,
    intent: str,
    gen: GeneratorHandle,
    max_iters: int = DEFAULT_MAX_ITERS,
    active_tool: Optional[str] = None,
    start: Optional[MachineState] = None,
) -> LoopTranscript:
    """Drive the generator until a proof of safety or the iteration budget.

    Iteration ``i`` sends the constraint context, the user intent and the
    full (gcode, feedback) history; a Refuted proof appends the rendered
    feedback and continues.  Generated code that fails to parse re-enters
    the loop as a parse diagnostic rather than aborting.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    if active_tool is None:
        if len(w.tools) != 1:
            raise UnknownToolError("run_loop needs --tool when several tools are defined")
        active_tool = next(iter(w.tools))
    context = emit_generator_context(w, active_tool)
    if start is None:
        start = MachineState(position=(0.0, 0.0, w.safe_z_mm))

    iterations: List[Iteration] = []
    history: List[Dict] = []
    for i in range(1, max_iters + 1):
        payload = {
            "context": context,
            "intent": intent,
            "history": history,
            "iteration": i,
        }
        try:
            gcode_text = _invoke(gen, payload, i)
        except GeneratorFailure as exc:
            return LoopTranscript(iterations, "generator_error", str(exc))

        try:
            outcome, _ = verify_once(w, gcode_text, start, iteration=i)
        except ParseError as exc:
            feedback = {
                "error": "parse_error",
                "iteration": i,
                "line": exc.line,
                "message": exc.message,
                "directive": "Re-emit the program using only G00/G01/G90 motion words.",
            }
            iterations.append(Iteration(gcode_text, "parse_error", feedback))
            history.append({"gcode": gcode_text, "feedback": feedback})
            continue

        if outcome.verified:
            iterations.append(Iteration(gcode_text, "verified"))
            return LoopTranscript(iterations, "proved")

        signal = render_signal(outcome.conflict, w.grid, i, w.safe_z_mm)
        iterations.append(Iteration(gcode_text, "refuted", signal.machine_payload))
        history.append({"gcode": gcode_text, "feedback": signal.machine_payload})

    return LoopTranscript(iterations, "exhausted")
