"""RS-274 subset parser with modal state resolution.

Supported words: G00/G0, G01/G1, G90, T (tool change), F/S/M (passive).
Comments are ``( ... )`` inline and ``;`` to end of line.  Every motion
command carries a fully resolved absolute 3D target; unspecified axes
inherit the modal position.  Anything with motion semantics outside the
subset (G02/G03 arcs, G91 incremental, G28 homing) is rejected loudly.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, replace
from enum import Enum
from typing import List, Optional, Sequence, Tuple

from .errors import DiagnosticWarning, ParseError
from .workspace import normalize_tool_id

Point = Tuple[float, float, float]

_WORD_RE = re.compile(r"([A-Za-z])\s*([+-]?(?:\d+\.?\d*|\.\d+))")

_REJECTED_G = {2, 3, 28, 91}
_SUPPORTED_G = {0, 1, 90}


class Kind(Enum):
    RAPID = "G00"
    LINEAR = "G01"
    TOOL_CHANGE = "T"
    PASSIVE = "passive"


@dataclass(frozen=True)
class GCodeCommand:
    kind: Kind
    source_line: int
    text: str
    line_no: Optional[int] = None
    target: Optional[Point] = None  # motion kinds only
    tool: Optional[str] = None  # tool-change kind only

    @property
    def is_motion(self) -> bool:
        return self.kind in (Kind.RAPID, Kind.LINEAR)


@dataclass(frozen=True)
class MachineState:
    """Modal parser state; positioning is always absolute (G90)."""

    position: Point = (0.0, 0.0, 0.0)
    active_tool: Optional[str] = None
    modal_motion: Optional[int] = None  # last G-group-1 word (0 or 1)


def strip_comments(line: str) -> str:
    line = line.split(";", 1)[0]
    return re.sub(r"\([^)]*\)", " ", line)


def tokenize_line(line: str, source_line: int) -> List[Tuple[str, str]]:
    """Split a source line into (letter, number-text) words."""
    bare = strip_comments(line).strip()
    if not bare or bare == "%":
        return []
    words = []
    pos = 0
    for m in _WORD_RE.finditer(bare):
        between = bare[pos : m.start()].strip()
        if between:
            raise ParseError(source_line, f"malformed word {between!r}")
        words.append((m.group(1).upper(), m.group(2)))
        pos = m.end()
    trailing = bare[pos:].strip()
    if trailing:
        raise ParseError(source_line, f"malformed word {trailing!r}")
    return words


def _parse_int(letter: str, text: str, source_line: int) -> int:
    value = float(text)
    if value != int(value):
        raise ParseError(source_line, f"{letter}-word requires an integer, got {text!r}")
    return int(value)


def resolve_modal(
    words: Sequence[Tuple[str, str]], state: MachineState, source_line: int = 0, text: str = ""
) -> Tuple[GCodeCommand, MachineState]:
    """Resolve one line's words against the modal state.

    Returns the command plus the successor state; pure, no hidden mutation.
    Unknown tool ids are deferred to the prover (the parser is table-agnostic).
    """
    line_no: Optional[int] = None
    motion: Optional[int] = None
    tool: Optional[str] = None
    axes = {}
    unknown = []

    for letter, num in words:
        if letter == "N":
            line_no = _parse_int(letter, num, source_line)
        elif letter == "G":
            code = _parse_int(letter, num, source_line)
            if code in _REJECTED_G:
                raise ParseError(source_line, f"unsupported motion word G{code:02d}")
            if code not in _SUPPORTED_G:
                raise ParseError(source_line, f"unsupported word G{code:02d}")
            if code in (0, 1):
                if motion is not None and motion != code:
                    raise ParseError(source_line, "conflicting motion words on one line")
                motion = code
        elif letter in ("X", "Y", "Z"):
            if letter in axes:
                raise ParseError(source_line, f"duplicate {letter} word")
            axes[letter] = float(num)
        elif letter == "T":
            tool = normalize_tool_id(num)
        elif letter in ("F", "S", "M"):
            pass  # passive: feeds, speeds, machine functions
        else:
            unknown.append(letter + num)

    if unknown:
        if axes or motion is not None:
            raise ParseError(
                source_line, f"unsupported word {unknown[0]} on a motion line"
            )
        for word in unknown:
            warnings.warn(
                f"ignoring unknown word {word} at line {source_line}",
                DiagnosticWarning,
                stacklevel=2,
            )

    if tool is not None:
        if motion is not None or axes:
            raise ParseError(source_line, "tool change must not share a line with motion")
        cmd = GCodeCommand(Kind.TOOL_CHANGE, source_line, text, line_no, tool=tool)
        return cmd, replace(state, active_tool=tool)

    if axes:
        effective = motion if motion is not None else state.modal_motion
        if effective is None:
            raise ParseError(source_line, "axis word without an active motion mode")
        px, py, pz = state.position
        target = (axes.get("X", px), axes.get("Y", py), axes.get("Z", pz))
        kind = Kind.RAPID if effective == 0 else Kind.LINEAR
        cmd = GCodeCommand(kind, source_line, text, line_no, target=target)
        return cmd, replace(state, position=target, modal_motion=effective)

    # No axis words: a bare G00/G01 only arms the modal group.
    new_state = state if motion is None else replace(state, modal_motion=motion)
    return GCodeCommand(Kind.PASSIVE, source_line, text, line_no), new_state


def parse_program(text: str, initial: MachineState) -> List[GCodeCommand]:
    """Parse a full program into modally resolved commands.

    Pure function of (text, initial); source_line strictly increases across
    the returned sequence.  Blank and comment-only lines produce nothing.
    """
    commands: List[GCodeCommand] = []
    state = initial
    for i, raw in enumerate(text.splitlines(), start=1):
        words = tokenize_line(raw, i)
        if not words:
            continue
        cmd, state = resolve_modal(words, state, i, raw.strip())
        commands.append(cmd)
    return commands
