"""Per-file HTML emission: escaped verbatim text plus interleaved tags.

A page body is built in one left-to-right pass over the source bytes.
Planned tag events are sorted by offset; at equal offsets every close
precedes every open, and when a highlight span and a name anchor share a
range the highlight stays outside the anchor. Stripping all tags from a
body and decoding &lt; &gt; &amp; reproduces the source text exactly.
"""

from __future__ import annotations

import posixpath
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .binding import BindingModel, Declaration, Reference
from .minispec import NameOccurrence, Role, Token
from .source import SourceFile, Span

UNRESOLVED_TITLE = "Undeclared"
NOT_REFERENCED_TITLE = "Not referenced locally, nor via imports"

_TEXT_TABLE = str.maketrans({"&": "&amp;", "<": "&lt;", ">": "&gt;"})
_ATTR_TABLE = str.maketrans({"&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;"})

# Tie-break ranks for events at the same offset.
_CLOSE_INNER = 0
_CLOSE_OUTER = 1
_OPEN_OUTER = 2
_OPEN_INNER = 3


def escape(text: str) -> str:
    """Replace < > & by their entities in a single pass."""
    return text.translate(_TEXT_TABLE)


def escape_attr(text: str) -> str:
    return text.translate(_ATTR_TABLE)


def anchor_id(name: str, span: Span) -> str:
    return f"{name}_{span.start}_{span.end}"


def page_path(rel_path: str) -> str:
    """Output path of the page generated for a source file."""
    return rel_path + ".html"


def rel_href(from_page: str, to_page: str) -> str:
    """Relative URL from one output page to another; empty for self-links."""
    if from_page == to_page:
        return ""
    return posixpath.relpath(to_page, posixpath.dirname(from_page) or ".")


def _display_path(href: str) -> str:
    return href[: -len(".html")] if href.endswith(".html") else href


def _grouped_lines(
    sites: Iterable[tuple[str, int]], current_file: str
) -> list[tuple[str, list[int]]]:
    # Group (path, line) pairs by path, preserving order; current file last.
    groups: list[tuple[str, list[int]]] = []
    local: list[int] = []
    for path, line in sites:
        if path == current_file:
            local.append(line)
        elif groups and groups[-1][0] == path:
            groups[-1][1].append(line)
        else:
            groups.append((path, [line]))
    if local:
        groups.append((current_file, local))
    return groups


def _format_site_list(
    prefix: str, sites: Iterable[tuple[str, int]], current_file: str
) -> str:
    current_page = page_path(current_file)
    parts = []
    for path, lines in _grouped_lines(sites, current_file):
        lines_text = ", ".join(str(line) for line in lines)
        if path == current_file:
            parts.append(f"line {lines_text}")
        else:
            shown = _display_path(rel_href(current_page, page_path(path)))
            parts.append(f"{shown} line {lines_text}")
    return prefix + "; ".join(parts)


def defined_at_title(ref: Reference, model: BindingModel, current_file: str) -> str:
    """Tooltip listing the declaration sites a reference resolves to."""
    if not ref.targets:
        raise ValueError("defined_at_title requires a resolved reference")
    sites = [(t.path, model.declaration(t).line) for t in ref.targets]
    return _format_site_list("Defined at ", sites, current_file)


def referenced_at_title(decl: Declaration, model: BindingModel, current_file: str) -> str:
    """Tooltip listing the sites referencing a declaration."""
    sites = model.back_refs[decl.decl_id]
    if not sites:
        return NOT_REFERENCED_TITLE
    return _format_site_list(
        "Referenced at ", [(s.path, s.line) for s in sites], current_file
    )


@dataclass(frozen=True, slots=True)
class OpenTag:
    element: str
    attributes: tuple[tuple[str, str], ...]


@dataclass(frozen=True, slots=True)
class CloseTag:
    element: str


@dataclass(frozen=True, slots=True)
class EmitEvent:
    offset: int
    order_key: int
    payload: Union[OpenTag, CloseTag]


@dataclass(frozen=True)
class HtmlPage:
    page_rel_path: str
    body: str
    anchor_ids: frozenset[str]
    links: tuple[str, ...]


def _check_occurrence_nesting(tokens: Sequence[Token], occ: NameOccurrence) -> None:
    for token in tokens:
        if token.span.start >= occ.span.end:
            break
        if token.span.end <= occ.span.start:
            continue
        if not (token.span.start <= occ.span.start and occ.span.end <= token.span.end):
            raise ValueError(
                f"occurrence {occ.name!r} at {occ.span} overlaps token at {token.span}"
            )


def plan_events(
    file: SourceFile,
    tokens: Sequence[Token],
    occs: Sequence[NameOccurrence],
    model: BindingModel,
    config,
) -> list[EmitEvent]:
    """Tag events for one page: highlight spans plus name anchors/links.

    config provides .styles (keyed by TokenKind.css_name) and .class_prefix
    (see sitegen.SiteConfig).
    """
    events: list[EmitEvent] = []
    prefix = config.class_prefix
    for token in tokens:
        if token.kind.css_name not in config.styles:
            continue
        cls = prefix + token.kind.css_name
        events.append(
            EmitEvent(token.span.start, _OPEN_OUTER, OpenTag("span", (("class", cls),)))
        )
        events.append(EmitEvent(token.span.end, _CLOSE_OUTER, CloseTag("span")))

    current_page = page_path(file.rel_path)
    for occ in occs:
        _check_occurrence_nesting(tokens, occ)
        own_id = anchor_id(occ.name, occ.span)
        attrs: list[tuple[str, str]] = []
        if occ.role is Role.DECL:
            decl = model.declaration_at(file.rel_path, occ.span)
            element = "span"
            attrs = [("id", own_id), ("title", referenced_at_title(decl, model, file.rel_path))]
        elif occ.role is Role.REF:
            ref = model.reference_at(file.rel_path, occ.span)
            if ref.targets:
                first = ref.targets[0]
                target_decl = model.declaration(first)
                href = (
                    rel_href(current_page, page_path(first.path))
                    + "#"
                    + anchor_id(target_decl.name, Span(first.start, first.end))
                )
                element = "a"
                attrs = [
                    ("href", href),
                    ("id", own_id),
                    ("title", defined_at_title(ref, model, file.rel_path)),
                ]
            else:
                element = "span"
                attrs = [
                    ("id", own_id),
                    ("class", prefix + "Unresolved"),
                    ("title", UNRESOLVED_TITLE),
                ]
        else:  # Role.BOTH: anchor for the declaration, link to the next site
            decl = model.declaration_at(file.rel_path, occ.span)
            ref = model.reference_at(file.rel_path, occ.span)
            element = "a"
            if ref.targets:
                first = ref.targets[0]
                target_decl = model.declaration(first)
                href = (
                    rel_href(current_page, page_path(first.path))
                    + "#"
                    + anchor_id(target_decl.name, Span(first.start, first.end))
                )
                attrs.append(("href", href))
            attrs.append(("id", own_id))
            attrs.append(("title", referenced_at_title(decl, model, file.rel_path)))
        events.append(EmitEvent(occ.span.start, _OPEN_INNER, OpenTag(element, tuple(attrs))))
        events.append(EmitEvent(occ.span.end, _CLOSE_INNER, CloseTag(element)))

    events.sort(key=lambda e: (e.offset, e.order_key))
    return events


def _render_open(tag: OpenTag) -> str:
    attrs = "".join(f' {name}="{escape_attr(value)}"' for name, value in tag.attributes)
    return f"<{tag.element}{attrs}>"


def emit_page(file: SourceFile, events: Sequence[EmitEvent]) -> HtmlPage:
    """Interleave escaped source text with tag events into a page body."""
    parts: list[str] = ["<pre><code>"]
    pos = 0
    stack: list[str] = []
    ids: set[str] = set()
    links: list[str] = []
    for event in events:
        if event.offset < pos or event.offset > len(file.data):
            raise ValueError(f"event offset {event.offset} out of order in {file.rel_path!r}")
        parts.append(escape(file.data[pos : event.offset].decode("utf-8")))
        pos = event.offset
        payload = event.payload
        if isinstance(payload, OpenTag):
            parts.append(_render_open(payload))
            stack.append(payload.element)
            for name, value in payload.attributes:
                if name == "id":
                    if value in ids:
                        raise ValueError(f"duplicate anchor id {value!r} in {file.rel_path!r}")
                    ids.add(value)
                elif name == "href":
                    links.append(value)
        else:
            if not stack or stack[-1] != payload.element:
                raise ValueError(f"unbalanced </{payload.element}> in {file.rel_path!r}")
            stack.pop()
            parts.append(f"</{payload.element}>")
    if stack:
        raise ValueError(f"unclosed tags at end of {file.rel_path!r}: {stack}")
    parts.append(escape(file.data[pos:].decode("utf-8")))
    parts.append("</code></pre>")
    return HtmlPage(
        page_rel_path=page_path(file.rel_path),
        body="".join(parts),
        anchor_ids=frozenset(ids),
        links=tuple(links),
    )
