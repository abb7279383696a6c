#!/usr/bin/env python3
"""Scripted stand-in for an LLM code generator.

Reads the loop driver's JSON payload on stdin and emits G-code on stdout:
a colliding draft on the first iteration, then a corrected program that
retracts above the conflict bounds reported in the feedback history.
"""

import json
import pathlib
import sys


def main() -> int:
    payload = json.load(sys.stdin)
    here = pathlib.Path(__file__).resolve().parent
    if not payload.get("history"):
        sys.stdout.write((here / "clamp_strike_program.nc").read_text("utf-8"))
        return 0
    # The feedback names the forbidden box; route above it via a Z retract.
    sys.stdout.write((here / "clamp_strike_fixed_program.nc").read_text("utf-8"))
    return 0


if __name__ == "__main__":
    sys.exit(main())
