"""Cross-file name binding: import graph, resolution and the reverse index.

Sorts are resolved against every declaration of the same name whose module
lies in the reflexive-transitive import closure of the referencing module.
Module references (import entries) resolve globally by full path. A
production left-hand side declares and references at the same span; the
reference part never targets its own declaration.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .diagnostics import WARNING, Diagnostic
from .minispec import NameOccurrence, Namespace, Role, SpecAst, occurrences
from .source import ProjectSource, Span


@dataclass(frozen=True, slots=True, order=True)
class DeclId:
    """Stable identity of a declaration: owning file plus byte span."""

    path: str
    start: int
    end: int


@dataclass(frozen=True, slots=True)
class Declaration:
    decl_id: DeclId
    name: str
    namespace: Namespace
    line: int


@dataclass(frozen=True, slots=True, order=True)
class SiteRef:
    """One referencing site, as stored in the reverse index."""

    path: str
    start: int
    end: int
    line: int


@dataclass(frozen=True, slots=True)
class Reference:
    path: str
    name: str
    span: Span
    namespace: Namespace
    role: Role
    line: int
    targets: tuple[DeclId, ...]


@dataclass(frozen=True)
class BindingModel:
    declarations: tuple[Declaration, ...]
    references: tuple[Reference, ...]
    back_refs: Mapping[DeclId, tuple[SiteRef, ...]]
    unresolved: tuple[Reference, ...]
    module_graph: Mapping[str, tuple[str, ...]]

    @cached_property
    def declarations_by_id(self) -> dict[DeclId, Declaration]:
        return {d.decl_id: d for d in self.declarations}

    @cached_property
    def _references_by_site(self) -> dict[tuple[str, int, int], Reference]:
        return {(r.path, r.span.start, r.span.end): r for r in self.references}

    def declaration(self, decl_id: DeclId) -> Declaration:
        return self.declarations_by_id[decl_id]

    def declaration_at(self, path: str, span: Span) -> Declaration | None:
        return self.declarations_by_id.get(DeclId(path, span.start, span.end))

    def reference_at(self, path: str, span: Span) -> Reference | None:
        return self._references_by_site.get((path, span.start, span.end))

    def is_unreferenced(self, decl_id: DeclId) -> bool:
        """True iff nothing resolves to this declaration."""
        if decl_id not in self.back_refs:
            raise ValueError(f"unknown declaration {decl_id}")
        return not self.back_refs[decl_id]


def build_module_graph(
    project: ProjectSource, asts: Mapping[str, SpecAst]
) -> tuple[dict[str, tuple[str, ...]], list[Diagnostic]]:
    """Node per parsed module, edge per import of a known module.

    Unknown imports and duplicate module declarations become warning
    diagnostics; duplicates are kept and their import edges merged.
    """
    diagnostics: list[Diagnostic] = []
    declared: dict[str, str] = {}  # module name -> first declaring file
    for rel_path in sorted(asts, key=lambda p: p.encode("utf-8")):
        decl = asts[rel_path].module_decl
        if decl.name in declared:
            file = project.file(rel_path)
            diagnostics.append(
                Diagnostic(
                    rel_path,
                    file.line_of(decl.span.start),
                    file.column_of(decl.span.start),
                    WARNING,
                    f"duplicate module {decl.name}, also declared in {declared[decl.name]}",
                )
            )
        else:
            declared[decl.name] = rel_path

    edges: dict[str, set[str]] = {name: set() for name in declared}
    for rel_path in sorted(asts, key=lambda p: p.encode("utf-8")):
        ast = asts[rel_path]
        file = project.file(rel_path)
        for occ in occurrences(ast):
            if occ.namespace is not Namespace.MODULE or occ.role is not Role.REF:
                continue
            if occ.name in declared:
                edges[ast.module_decl.name].add(occ.name)
            else:
                diagnostics.append(
                    Diagnostic(
                        rel_path,
                        file.line_of(occ.span.start),
                        file.column_of(occ.span.start),
                        WARNING,
                        f"unresolved import {occ.name}",
                    )
                )
    graph = {name: tuple(sorted(targets)) for name, targets in edges.items()}
    return graph, diagnostics


def import_closure(module: str, graph: Mapping[str, tuple[str, ...]]) -> frozenset[str]:
    """Reflexive-transitive closure over import edges; safe on cycles."""
    if module not in graph:
        raise ValueError(f"unknown module {module!r}")
    seen = {module}
    stack = [module]
    while stack:
        for target in graph.get(stack.pop(), ()):
            if target not in seen:
                seen.add(target)
                stack.append(target)
    return frozenset(seen)


def resolve(
    project: ProjectSource,
    asts: Mapping[str, SpecAst],
    graph: Mapping[str, tuple[str, ...]],
) -> tuple[BindingModel, list[Diagnostic]]:
    """Resolve every reference and build the reverse index.

    Returns the model plus warning diagnostics for unresolved sort
    references. Unresolved imports are diagnosed by build_module_graph, and
    a production LHS without a second declaration site is legitimate, so
    neither is warned here (both still appear in model.unresolved).
    """
    paths = sorted(asts, key=lambda p: p.encode("utf-8"))
    module_of: dict[str, str] = {p: asts[p].module_decl.name for p in paths}

    declarations: list[Declaration] = []
    by_ns_name: dict[tuple[Namespace, str], list[tuple[str, Declaration]]] = {}
    raw_refs: list[tuple[str, NameOccurrence]] = []
    for path in paths:
        file = project.file(path)
        for occ in occurrences(asts[path]):
            if occ.role in (Role.DECL, Role.BOTH):
                decl = Declaration(
                    DeclId(path, occ.span.start, occ.span.end),
                    occ.name,
                    occ.namespace,
                    file.line_of(occ.span.start),
                )
                declarations.append(decl)
                by_ns_name.setdefault((occ.namespace, occ.name), []).append(
                    (module_of[path], decl)
                )
            if occ.role in (Role.REF, Role.BOTH):
                raw_refs.append((path, occ))

    closures = {name: import_closure(name, graph) for name in graph}

    diagnostics: list[Diagnostic] = []
    references: list[Reference] = []
    for path, occ in raw_refs:
        file = project.file(path)
        candidates = by_ns_name.get((occ.namespace, occ.name), [])
        if occ.namespace is Namespace.MODULE:
            visible = candidates
        else:
            reachable = closures[module_of[path]]
            visible = [(m, d) for (m, d) in candidates if m in reachable]
        own = DeclId(path, occ.span.start, occ.span.end)
        targets = tuple(sorted(d.decl_id for (_, d) in visible if d.decl_id != own))
        line = file.line_of(occ.span.start)
        references.append(
            Reference(path, occ.name, occ.span, occ.namespace, occ.role, line, targets)
        )
        if not targets and occ.role is Role.REF and occ.namespace is Namespace.SORT:
            diagnostics.append(
                Diagnostic(
                    path,
                    line,
                    file.column_of(occ.span.start),
                    WARNING,
                    f"unresolved reference to sort {occ.name}",
                )
            )

    back: dict[DeclId, list[SiteRef]] = {d.decl_id: [] for d in declarations}
    for ref in references:
        site = SiteRef(ref.path, ref.span.start, ref.span.end, ref.line)
        for target in ref.targets:
            back[target].append(site)
    back_refs = {decl_id: tuple(sorted(sites)) for decl_id, sites in back.items()}

    model = BindingModel(
        declarations=tuple(declarations),
        references=tuple(references),
        back_refs=back_refs,
        unresolved=tuple(r for r in references if not r.targets),
        module_graph=dict(graph),
    )
    return model, diagnostics


def _decl_id_json(decl_id: DeclId) -> dict[str, object]:
    return {"file": decl_id.path, "start": decl_id.start, "end": decl_id.end}


def to_json_dict(model: BindingModel) -> dict[str, object]:
    """JSON-ready view of the model (the --dump-binding document)."""
    return {
        "module_graph": {name: list(model.module_graph[name]) for name in sorted(model.module_graph)},
        "declarations": [
            {
                "file": d.decl_id.path,
                "start": d.decl_id.start,
                "end": d.decl_id.end,
                "line": d.line,
                "name": d.name,
                "namespace": d.namespace.value,
            }
            for d in model.declarations
        ],
        "references": [
            {
                "file": r.path,
                "start": r.span.start,
                "end": r.span.end,
                "line": r.line,
                "name": r.name,
                "namespace": r.namespace.value,
                "role": r.role.value,
                "targets": [_decl_id_json(t) for t in r.targets],
            }
            for r in model.references
        ],
        "back_refs": [
            {
                "declaration": _decl_id_json(decl_id),
                "references": [
                    {"file": s.path, "start": s.start, "end": s.end, "line": s.line}
                    for s in model.back_refs[decl_id]
                ],
            }
            for decl_id in sorted(model.back_refs)
        ],
        "unresolved": [_decl_id_json(DeclId(r.path, r.span.start, r.span.end)) for r in model.unresolved],
    }


def all_unreferenced(model: BindingModel) -> Iterable[DeclId]:
    """Declarations with an empty reverse-index entry, in (path, span) order."""
    return (d.decl_id for d in model.declarations if not model.back_refs[d.decl_id])
