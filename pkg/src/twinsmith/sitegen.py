"""Website assembly: stylesheet, navigation tree, full pages, link checks."""

from __future__ import annotations

import json
import posixpath
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

from .binding import BindingModel
from .htmlgen import HtmlPage, escape, escape_attr, rel_href
from .minispec import STYLE_KINDS
from .source import ProjectSource


class ConfigError(Exception):
    """Invalid site configuration (bad key, kind, or value type)."""


@dataclass(frozen=True, slots=True)
class Style:
    color: str | None = None
    bold: bool = False
    italic: bool = False


DEFAULT_STYLES: Mapping[str, Style] = MappingProxyType(
    {
        "Keyword": Style(color="#00348f", bold=True),
        "Constructor": Style(color="#2a2aa5", bold=True),
        "String": Style(color="#1a7a3c"),
        "CharClass": Style(color="#8a4500"),
        "Comment": Style(color="#707070", italic=True),
    }
)


@dataclass(frozen=True)
class SiteConfig:
    site_title: str = "Hyperlinked Twin"
    class_prefix: str = "cons_"
    styles: Mapping[str, Style] = DEFAULT_STYLES
    extensions: frozenset[str] = frozenset({"mspec"})
    strict: bool = False


_CONFIG_KEYS = {"site_title", "class_prefix", "styles", "extensions", "strict"}
_STYLE_KEYS = {"color", "bold", "italic"}


def _parse_styles(raw: object) -> dict[str, Style]:
    if not isinstance(raw, dict):
        raise ConfigError("styles must be an object keyed by token kind")
    styles: dict[str, Style] = {}
    for kind, value in raw.items():
        if kind not in STYLE_KINDS:
            valid = ", ".join(sorted(STYLE_KINDS))
            raise ConfigError(f"unknown token kind {kind!r} in styles (valid kinds: {valid})")
        if not isinstance(value, dict):
            raise ConfigError(f"style for {kind!r} must be an object")
        for prop in value:
            if prop not in _STYLE_KEYS:
                raise ConfigError(f"unknown style property {prop!r} for {kind!r}")
        styles[kind] = Style(
            color=value.get("color"),
            bold=bool(value.get("bold", False)),
            italic=bool(value.get("italic", False)),
        )
    return styles


def load_config(path: str | Path) -> SiteConfig:
    """Read a JSON SiteConfig; every key optional, unknown keys rejected."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    for key in raw:
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown configuration key: {key!r}")
    kwargs: dict[str, object] = {}
    if "site_title" in raw:
        kwargs["site_title"] = str(raw["site_title"])
    if "class_prefix" in raw:
        kwargs["class_prefix"] = str(raw["class_prefix"])
    if "styles" in raw:
        kwargs["styles"] = _parse_styles(raw["styles"])
    if "extensions" in raw:
        exts = raw["extensions"]
        if not isinstance(exts, list) or not all(isinstance(e, str) for e in exts):
            raise ConfigError("extensions must be a list of strings")
        kwargs["extensions"] = frozenset(e.lstrip(".") for e in exts)
    if "strict" in raw:
        kwargs["strict"] = bool(raw["strict"])
    return SiteConfig(**kwargs)


_BASE_CSS = """\
body {{ margin: 0; font-family: system-ui, sans-serif; display: flex; }}
nav.sitenav {{ min-width: 16em; padding: 1em; border-right: 1px solid #ccc; }}
nav.sitenav ul {{ list-style: none; padding-left: 1em; margin: 0.2em 0; }}
nav.sitenav .site-title {{ font-weight: bold; }}
main {{ padding: 1em; overflow-x: auto; }}
p.breadcrumb {{ color: #555; }}
pre, code {{ font-family: "DejaVu Sans Mono", Consolas, monospace; }}
a {{ color: inherit; text-decoration: none; }}
a[href]:hover {{ text-decoration: underline; }}
a[href] {{ color: #0645ad; }}
.{prefix}Unresolved {{ color: #b00020; border-bottom: 1px dotted #b00020; }}
"""


def css_for(config: SiteConfig) -> str:
    """Stylesheet: fixed base rules plus one rule per styled token kind."""
    for kind in config.styles:
        if kind not in STYLE_KINDS:
            valid = ", ".join(sorted(STYLE_KINDS))
            raise ConfigError(f"unknown token kind {kind!r} in styles (valid kinds: {valid})")
    lines = [_BASE_CSS.format(prefix=config.class_prefix)]
    for kind in sorted(config.styles):
        style = config.styles[kind]
        decls = []
        if style.color is not None:
            decls.append(f"color: {style.color};")
        if style.bold:
            decls.append("font-weight: bold;")
        if style.italic:
            decls.append("font-style: italic;")
        rule_body = " " + " ".join(decls) + " " if decls else " "
        lines.append(f".{config.class_prefix}{kind} {{{rule_body}}}")
    return "\n".join(lines) + "\n"


@dataclass
class NavTree:
    """Directory tree over the project's rel_paths; children kept sorted."""

    name: str = ""
    dirs: dict[str, "NavTree"] = field(default_factory=dict)
    files: list[str] = field(default_factory=list)  # full rel_paths

    @classmethod
    def from_paths(cls, rel_paths: Iterable[str]) -> "NavTree":
        root = cls()
        for rel_path in sorted(rel_paths):
            node = root
            parts = rel_path.split("/")
            for part in parts[:-1]:
                node = node.dirs.setdefault(part, cls(name=part))
            node.files.append(rel_path)
        return root

    def render(self, from_page: str) -> str:
        """Nested list markup with links relative to from_page."""
        entries: list[tuple[str, int, str]] = []
        for name, sub in self.dirs.items():
            entries.append((name, 0, f"<li>{escape(name)}/{sub.render(from_page)}</li>"))
        for rel_path in self.files:
            label = rel_path.rsplit("/", 1)[-1]
            href = rel_href(from_page, rel_path + ".html") or "#"
            entries.append(
                (label, 1, f'<li><a href="{escape_attr(href)}">{escape(label)}</a></li>')
            )
        entries.sort()
        return "<ul>" + "".join(markup for _, _, markup in entries) + "</ul>"


def _breadcrumb(rel_path: str, index_href: str, site_title: str) -> str:
    crumbs = [f'<a href="{escape_attr(index_href)}">{escape(site_title)}</a>']
    crumbs.extend(escape(part) for part in rel_path.split("/"))
    return '<p class="breadcrumb">' + " / ".join(crumbs) + "</p>"


def _document(
    rel_path: str, body: str, nav: NavTree, config: SiteConfig
) -> str:
    page = rel_path + ".html"
    css_href = rel_href(page, "style.css")
    index_href = rel_href(page, "index.html")
    title = escape(f"{rel_path} — {config.site_title}")
    return (
        "<!DOCTYPE html>\n"
        '<html lang="en">\n'
        "<head>\n"
        '<meta charset="utf-8">\n'
        f"<title>{title}</title>\n"
        f'<link rel="stylesheet" href="{escape_attr(css_href)}">\n'
        "</head>\n"
        "<body>\n"
        '<nav class="sitenav">\n'
        f'<p class="site-title"><a href="{escape_attr(index_href)}">'
        f"{escape(config.site_title)}</a></p>\n"
        f"{nav.render(page)}\n"
        "</nav>\n"
        "<main>\n"
        f"{_breadcrumb(rel_path, index_href, config.site_title)}\n"
        f"{body}\n"
        "</main>\n"
        "</body>\n"
        "</html>\n"
    )


def _index_document(nav: NavTree, config: SiteConfig) -> str:
    return (
        "<!DOCTYPE html>\n"
        '<html lang="en">\n'
        "<head>\n"
        '<meta charset="utf-8">\n'
        f"<title>{escape(config.site_title)}</title>\n"
        '<link rel="stylesheet" href="style.css">\n'
        "</head>\n"
        "<body>\n"
        "<main>\n"
        f"<h1>{escape(config.site_title)}</h1>\n"
        f'{nav.render("index.html")}\n'
        "</main>\n"
        "</body>\n"
        "</html>\n"
    )


@dataclass(frozen=True, slots=True)
class SiteReport:
    pages: int
    links: int
    unresolved: int
    diagnostics: int

    def summary(self) -> str:
        return (
            f"{self.pages} pages, {self.links} links, "
            f"{self.unresolved} unresolved, {self.diagnostics} diagnostics"
        )


def generate_site(
    project: ProjectSource,
    pages: Mapping[str, HtmlPage],
    model: BindingModel,
    config: SiteConfig,
    out_dir: str | Path,
    diagnostic_count: int = 0,
) -> SiteReport:
    """Write the full site (pages, style.css, index.html) under out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    nav = NavTree.from_paths(pages)
    (out / "style.css").write_text(css_for(config), encoding="utf-8")
    (out / "index.html").write_text(_index_document(nav, config), encoding="utf-8")
    for rel_path in sorted(pages):
        page = pages[rel_path]
        target = out / page.page_rel_path
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(_document(rel_path, page.body, nav, config), encoding="utf-8")
    return SiteReport(
        pages=len(pages),
        links=sum(len(p.links) for p in pages.values()),
        unresolved=len(model.unresolved),
        diagnostics=diagnostic_count,
    )


@dataclass(frozen=True, slots=True)
class Finding:
    page: str
    href: str
    reason: str

    def render(self) -> str:
        return f"{self.page}: broken link {self.href!r}: {self.reason}"


def validate_site(pages: Iterable[HtmlPage]) -> list[Finding]:
    """Check that every fragment link lands on an existing page anchor."""
    page_list = sorted(pages, key=lambda p: p.page_rel_path)
    by_path = {p.page_rel_path: p for p in page_list}
    findings: list[Finding] = []
    for page in page_list:
        base_dir = posixpath.dirname(page.page_rel_path)
        for href in page.links:
            if "#" not in href:
                continue
            base, fragment = href.split("#", 1)
            if base:
                target_path = posixpath.normpath(posixpath.join(base_dir, base))
            else:
                target_path = page.page_rel_path
            target = by_path.get(target_path)
            if target is None:
                findings.append(Finding(page.page_rel_path, href, "target page does not exist"))
            elif fragment not in target.anchor_ids:
                findings.append(
                    Finding(
                        page.page_rel_path,
                        href,
                        f"no anchor {fragment!r} in {target_path}",
                    )
                )
    return findings
