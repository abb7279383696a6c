"""Exception and warning types shared across the verifier."""

from __future__ import annotations


class PathproofError(Exception):
    """Base class for all errors raised by this package."""


class WorkspaceError(PathproofError):
    """Workspace document is malformed or violates a validation rule."""


class ParseError(PathproofError):
    """G-code source could not be parsed into the supported subset."""

    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"{message} at line {line}")


class UnknownToolError(PathproofError):
    """A tool id was referenced that the workspace tool table does not define."""


class AllocationFault(PathproofError):
    """Spatial allocation requested coordinates already owned by the heap."""

    def __init__(self, overlap):
        self.overlap = frozenset(overlap)
        super().__init__(f"allocation overlaps {len(self.overlap)} owned voxel(s)")


class UnionFault(PathproofError):
    """Disjoint union of two heaps failed; carries the domain intersection."""

    def __init__(self, intersection):
        self.intersection = frozenset(intersection)
        super().__init__(
            f"heaps share {len(self.intersection)} coordinate(s), union is undefined"
        )


class ProverInvariantError(PathproofError):
    """Internal prover invariant breached (a bug, never a data race)."""


class FramePreconditionError(PathproofError):
    """frame_check was handed a frame that overlaps the program's footprints."""


class GridTooLargeError(PathproofError):
    """Dense-grid oracle guard: workspace exceeds the simulation size cap."""


class DiagnosticWarning(UserWarning):
    """Non-fatal diagnostic (degenerate shape, sub-voxel tool, thin margin)."""
