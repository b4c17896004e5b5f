"""Shared diagnostic records emitted by every pipeline stage."""

from __future__ import annotations

from dataclasses import dataclass

WARNING = "warning"
ERROR = "error"


@dataclass(frozen=True, slots=True, order=True)
class Diagnostic:
    """A user-facing problem report tied to a source position.

    Field order doubles as the sort order (path, then line, then column),
    which is the order diagnostics are printed in.
    """

    path: str
    line: int
    column: int
    severity: str
    message: str

    def render(self) -> str:
        return f"{self.path}:{self.line}:{self.column}: {self.severity}: {self.message}"
