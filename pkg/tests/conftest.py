from __future__ import annotations

from pathlib import Path

import pytest

from twinsmith.pipeline import Analysis, analyze, render_pages
from twinsmith.sitegen import SiteConfig, Style
from twinsmith.source import ProjectSource, SourceFile, scan_project

CORPUS_DIR = Path(__file__).parent / "corpus"
FIG1_DIR = CORPUS_DIR / "fig1"
FIG1_CONFIG_PATH = CORPUS_DIR / "fig1-config.json"
GOLDEN_DIR = Path(__file__).parent / "golden"


def make_project(files: dict[str, str]) -> ProjectSource:
    """In-memory project from {rel_path: text}, sorted like scan_project."""
    sources = sorted(
        (SourceFile.from_text(rel, text) for rel, text in files.items()),
        key=lambda f: f.rel_path.encode("utf-8"),
    )
    return ProjectSource(root=Path("<memory>"), files=tuple(sources))


def fig1_site_config() -> SiteConfig:
    return SiteConfig(
        site_title="Demo Language",
        styles={
            "Constructor": Style(color="#2a2aa5", bold=True),
            "String": Style(color="#2a8f2a"),
        },
    )


@pytest.fixture(scope="session")
def fig1_project() -> ProjectSource:
    project, diagnostics = scan_project(FIG1_DIR, {"mspec"})
    assert not diagnostics
    return project


@pytest.fixture(scope="session")
def fig1_analysis(fig1_project) -> Analysis:
    return analyze(fig1_project)


@pytest.fixture(scope="session")
def fig1_pages(fig1_analysis):
    return render_pages(fig1_analysis, fig1_site_config())
