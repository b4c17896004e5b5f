"""Whole-project orchestration shared by the CLI and the test corpora."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .binding import BindingModel, build_module_graph, resolve
from .diagnostics import WARNING, Diagnostic
from .htmlgen import HtmlPage, emit_page, plan_events
from .minispec import (
    LexError,
    ParseError,
    SpecAst,
    Token,
    expected_module_path,
    lex,
    occurrences,
    parse,
)
from .source import ProjectSource, SourceFile
from .sitegen import SiteConfig


@dataclass(frozen=True)
class Analysis:
    """Everything derived from a project's sources before page emission."""

    project: ProjectSource
    asts: Mapping[str, SpecAst]
    tokens: Mapping[str, list[Token]]
    degraded: frozenset[str]
    model: BindingModel
    diagnostics: tuple[Diagnostic, ...]


def _parse_diagnostic(file: SourceFile, error: LexError | ParseError) -> Diagnostic:
    offset = min(error.offset, len(file.data))
    return Diagnostic(
        file.rel_path,
        file.line_of(offset),
        file.column_of(offset),
        WARNING,
        f"syntax error: {error.message}; file rendered as plain text",
    )


def analyze(project: ProjectSource, diagnostics: list[Diagnostic] | None = None) -> Analysis:
    """Parse all files, build the module graph and resolve all names.

    Files that fail to lex or parse are marked degraded and excluded from
    binding; each failure becomes a warning diagnostic.
    """
    diags = list(diagnostics or [])
    asts: dict[str, SpecAst] = {}
    tokens: dict[str, list[Token]] = {}
    degraded: set[str] = set()
    for file in project.files:
        try:
            file_tokens = lex(file)
            ast = parse(file, file_tokens)
        except (LexError, ParseError) as exc:
            degraded.add(file.rel_path)
            diags.append(_parse_diagnostic(file, exc))
            continue
        asts[file.rel_path] = ast
        tokens[file.rel_path] = file_tokens
        expected = expected_module_path(file.rel_path)
        if ast.module_decl.name != expected:
            span = ast.module_decl.span
            diags.append(
                Diagnostic(
                    file.rel_path,
                    file.line_of(span.start),
                    file.column_of(span.start),
                    WARNING,
                    f"module path {ast.module_decl.name} does not match "
                    f"file path (expected {expected})",
                )
            )

    graph, graph_diags = build_module_graph(project, asts)
    diags.extend(graph_diags)
    model, resolve_diags = resolve(project, asts, graph)
    diags.extend(resolve_diags)
    diags.sort()
    return Analysis(
        project=project,
        asts=asts,
        tokens=tokens,
        degraded=frozenset(degraded),
        model=model,
        diagnostics=tuple(diags),
    )


def render_pages(analysis: Analysis, config: SiteConfig) -> dict[str, HtmlPage]:
    """One page body per source file; degraded files get an event-free page."""
    pages: dict[str, HtmlPage] = {}
    for file in analysis.project.files:
        if file.rel_path in analysis.degraded:
            pages[file.rel_path] = emit_page(file, [])
            continue
        events = plan_events(
            file,
            analysis.tokens[file.rel_path],
            occurrences(analysis.asts[file.rel_path]),
            analysis.model,
            config,
        )
        pages[file.rel_path] = emit_page(file, events)
    return pages
