"""Command-line entry point: scan, parse, bind, emit, write the site.

Exit codes: 0 success; 1 usage or configuration error; 2 diagnostics under
--strict or broken links under --check-links; 3 I/O failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import binding, pipeline, sitegen
from .diagnostics import Diagnostic
from .source import scan_project

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FINDINGS = 2
EXIT_IO = 3


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit code 1, not argparse's 2
        raise _UsageError(message)


def build_arg_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="twinsmith",
        description=(
            "Generate a hyperlinked-twin website from a MiniSpec project: "
            "one page per source file, verbatim text with anchors, links, "
            "tooltips and highlighting."
        ),
    )
    parser.add_argument("root", help="project directory to scan")
    parser.add_argument("-o", "--out", required=True, help="output directory for the site")
    parser.add_argument("--config", help="JSON site configuration file")
    parser.add_argument(
        "--extensions",
        help="comma-separated file extensions to include (overrides config)",
    )
    parser.add_argument(
        "--strict", action="store_true", help="treat any diagnostic as fatal (exit 2)"
    )
    parser.add_argument(
        "--check-links",
        action="store_true",
        help="validate fragment links across generated pages and fail on findings",
    )
    parser.add_argument("--dump-binding", metavar="FILE", help="write the binding model as JSON")
    parser.add_argument("--quiet", action="store_true", help="suppress the report summary")
    return parser


def _print_diagnostics(diagnostics: tuple[Diagnostic, ...]) -> None:
    for diag in diagnostics:
        print(diag.render(), file=sys.stderr)


def run(argv: list[str] | None = None) -> int:
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"twinsmith: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    try:
        config = sitegen.load_config(args.config) if args.config else sitegen.SiteConfig()
    except sitegen.ConfigError as exc:
        print(f"twinsmith: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.extensions is not None:
        exts = frozenset(e.strip().lstrip(".") for e in args.extensions.split(",") if e.strip())
        if not exts:
            print("twinsmith: error: --extensions needs at least one extension", file=sys.stderr)
            return EXIT_USAGE
        config = dataclasses.replace(config, extensions=exts)
    strict = args.strict or config.strict

    try:
        project, scan_diags = scan_project(args.root, config.extensions)
    except OSError as exc:
        print(f"twinsmith: error: {exc}", file=sys.stderr)
        return EXIT_IO

    analysis = pipeline.analyze(project, scan_diags)
    pages = pipeline.render_pages(analysis, config)

    try:
        if args.dump_binding:
            dump = json.dumps(binding.to_json_dict(analysis.model), indent=2, sort_keys=False)
            Path(args.dump_binding).write_text(dump + "\n", encoding="utf-8")
        report = sitegen.generate_site(
            project, pages, analysis.model, config, args.out, len(analysis.diagnostics)
        )
    except OSError as exc:
        print(f"twinsmith: error: {exc}", file=sys.stderr)
        return EXIT_IO

    findings = sitegen.validate_site(pages.values()) if args.check_links else []

    _print_diagnostics(analysis.diagnostics)
    for finding in findings:
        print(finding.render(), file=sys.stderr)
    if not args.quiet:
        print(report.summary())

    if strict and analysis.diagnostics:
        return EXIT_FINDINGS
    if args.check_links and findings:
        return EXIT_FINDINGS
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
