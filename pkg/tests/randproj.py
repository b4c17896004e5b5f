"""Deterministic random MiniSpec projects for corpus-level tests."""

from __future__ import annotations

import random
from pathlib import Path

from twinsmith.source import ProjectSource, SourceFile

_DIRS = ["core", "syntax", "expr", "names", "lex", "util"]
_SORT_WORDS = [
    "Exp", "Term", "Factor", "Atom", "Stmt", "Decl", "Type",
    "Name", "Lit", "Value", "Item", "Prim", "Block", "Unit",
]
_LITERALS = ['"+"', '"-"', '"*"', '"<"', '">"', '"&&"', '"("', '")"', '".super."']
_CHAR_CLASSES = ["[a-z]", "[A-Z]", "[0-9]", "[a-zA-Z0-9]", "[\\]x]"]


def random_project(
    rng: random.Random,
    max_modules: int = 10,
    max_names: int = 30,
    allow_unknown_imports: bool = True,
) -> ProjectSource:
    """A small project of valid files with random imports and references.

    Import graphs may contain self-edges and cycles; an unknown import is
    mixed in occasionally when allowed.
    """
    n_modules = rng.randint(1, max_modules)
    paths = []
    for i in range(n_modules):
        segments = [rng.choice(_DIRS) for _ in range(rng.randint(0, 2))]
        paths.append("/".join(segments + [f"Mod{i}"]))

    pool = [f"{rng.choice(_SORT_WORDS)}{i}" for i in range(rng.randint(1, max_names))]

    files = []
    for idx, module in enumerate(paths):
        lines = []
        if rng.random() < 0.5:
            lines.append(f"// generated module {idx}")
        lines.append(f"module {module}")

        others = [p for p in paths if p != module]
        imports = rng.sample(others, rng.randint(0, min(3, len(others))))
        if rng.random() < 0.15:
            imports.append(module)
        if allow_unknown_imports and rng.random() < 0.2:
            imports.append("missing/Ghost")
        if imports:
            lines.append("imports")
            lines.extend(f"  {imp}" for imp in imports)

        declared = rng.sample(pool, rng.randint(0, min(6, len(pool))))
        if declared:
            lines.append("sorts")
            lines.extend(f"  {name}" for name in declared)

        if rng.random() < 0.4:
            lines.append("lexical syntax")
            for _ in range(rng.randint(0, 3)):
                lines.append(f"  {rng.choice(pool)} = {rng.choice(_CHAR_CLASSES)}")

        lines.append("context-free syntax")
        for prod in range(rng.randint(0, 6)):
            symbols = [
                rng.choice(pool) if rng.random() < 0.7 else rng.choice(_LITERALS)
                for _ in range(rng.randint(0, 3))
            ]
            lines.append(f"  {rng.choice(pool)}.C{idx}x{prod} = {' '.join(symbols)}".rstrip())
            if rng.random() < 0.2:
                lines.append(f"  // note {prod}")

        files.append(SourceFile.from_text(module + ".mspec", "\n".join(lines) + "\n"))

    files.sort(key=lambda f: f.rel_path.encode("utf-8"))
    return ProjectSource(root=Path("<generated>"), files=tuple(files))
