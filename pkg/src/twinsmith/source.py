"""Project file discovery and byte-offset arithmetic over source text.

All positions in the pipeline are 0-based byte offsets into a file's UTF-8
encoding, end-exclusive. Line numbers are 1-based. Byte offsets keep anchor
ids cheap and unambiguous; identifiers are ASCII so offsets and character
positions coincide everywhere names can occur.
"""

from __future__ import annotations

import os
from bisect import bisect_right
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path, PurePosixPath

from .diagnostics import WARNING, Diagnostic


@dataclass(frozen=True, slots=True, order=True)
class Span:
    """Half-open byte range [start, end) within one source file."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"invalid span ({self.start}, {self.end})")

    @property
    def length(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class SourceFile:
    """Immutable source text plus the byte offsets where lines begin."""

    rel_path: str
    text: str
    data: bytes
    line_starts: tuple[int, ...]

    @classmethod
    def from_bytes(cls, rel_path: str, raw: bytes) -> "SourceFile":
        """Decode and index a file; raises UnicodeDecodeError on bad UTF-8."""
        text = raw.decode("utf-8")
        starts = [0]
        pos = raw.find(b"\n")
        while pos != -1:
            starts.append(pos + 1)
            pos = raw.find(b"\n", pos + 1)
        return cls(rel_path=rel_path, text=text, data=raw, line_starts=tuple(starts))

    @classmethod
    def from_text(cls, rel_path: str, text: str) -> "SourceFile":
        return cls.from_bytes(rel_path, text.encode("utf-8"))

    def __len__(self) -> int:
        return len(self.data)

    def line_of(self, offset: int) -> int:
        """1-based line containing the given byte offset (end offset allowed)."""
        if offset < 0 or offset > len(self.data):
            raise ValueError(f"offset {offset} out of range for {self.rel_path!r}")
        return bisect_right(self.line_starts, offset)

    def column_of(self, offset: int) -> int:
        """1-based byte column of the given offset within its line."""
        return offset - self.line_starts[self.line_of(offset) - 1] + 1

    def slice(self, span: Span) -> str:
        """Exact text of the span; the span must lie on character boundaries."""
        if span.end > len(self.data):
            raise ValueError(f"span {span} out of range for {self.rel_path!r}")
        return self.data[span.start : span.end].decode("utf-8")


@dataclass(frozen=True)
class ProjectSource:
    """All discovered files of one project, ordered by rel_path."""

    root: Path
    files: tuple[SourceFile, ...]

    @cached_property
    def by_path(self) -> dict[str, SourceFile]:
        return {f.rel_path: f for f in self.files}

    def file(self, rel_path: str) -> SourceFile:
        return self.by_path[rel_path]


def _extension(name: str) -> str:
    if "." not in name:
        return ""
    return name.rsplit(".", 1)[1]


def _position_of(raw: bytes, offset: int) -> tuple[int, int]:
    # Line/column for a byte offset of a file that may not decode.
    line = raw.count(b"\n", 0, offset) + 1
    last_nl = raw.rfind(b"\n", 0, offset)
    return line, offset - (last_nl + 1) + 1


def scan_project(
    root: str | Path, extensions: set[str] | frozenset[str]
) -> tuple[ProjectSource, list[Diagnostic]]:
    """Collect all matching regular files under root, sorted by rel_path.

    Hidden directories (leading dot) are pruned and symbolic links are not
    followed. Files that cannot be read or are not valid UTF-8 get a
    per-file diagnostic and are excluded; a missing or unreadable root is
    fatal and raises the underlying OSError.
    """
    root = Path(root)
    if not root.is_dir():
        raise NotADirectoryError(f"project root is not a directory: {root}")

    wanted = {ext.lstrip(".") for ext in extensions}
    files: list[SourceFile] = []
    diagnostics: list[Diagnostic] = []
    for dirpath, dirnames, filenames in os.walk(root, followlinks=False):
        dirnames[:] = sorted(d for d in dirnames if not d.startswith("."))
        for name in sorted(filenames):
            if _extension(name) not in wanted:
                continue
            path = Path(dirpath) / name
            if path.is_symlink():
                continue
            rel = PurePosixPath(path.relative_to(root)).as_posix()
            try:
                raw = path.read_bytes()
            except OSError as exc:
                diagnostics.append(
                    Diagnostic(rel, 1, 1, WARNING, f"cannot read file: {exc.strerror or exc}")
                )
                continue
            try:
                files.append(SourceFile.from_bytes(rel, raw))
            except UnicodeDecodeError as exc:
                line, col = _position_of(raw, exc.start)
                diagnostics.append(
                    Diagnostic(rel, line, col, WARNING, "file is not valid UTF-8; skipped")
                )

    files.sort(key=lambda f: f.rel_path.encode("utf-8"))
    return ProjectSource(root=root, files=tuple(files)), diagnostics
