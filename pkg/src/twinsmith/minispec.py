"""Lexer, parser and name-occurrence extraction for MiniSpec.

MiniSpec is the small grammar meta-language this tool understands:

    file    := "module" ModulePath section*
    section := "imports" ModulePath+
             | "sorts" SortId+
             | "lexical" "syntax" lexrule*
             | "context-free" "syntax" production*
    lexrule    := SortId "=" CharClass
    production := SortId "." ConsId "=" symbol*
    symbol     := SortId | StringLit

ModulePath is SegId ("/" SegId)* with no internal whitespace; SortId,
ConsId and SegId are an ASCII letter followed by letters or digits.
StringLit is double-quoted with no embedded quote or newline, CharClass is
"[...]" with no unescaped "]", and "//" starts a comment running to the end
of the line. Whitespace between tokens is insignificant. The six keywords
(module, imports, sorts, lexical, syntax, context-free) are reserved.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union

from .source import SourceFile, Span

KEYWORDS = frozenset({"module", "imports", "sorts", "lexical", "syntax", "context-free"})


class TokenKind(Enum):
    KEYWORD = "Keyword"
    SORT_NAME = "SortName"
    CONS_NAME = "ConsName"
    MODULE_NAME = "ModuleName"
    STRING_LIT = "StringLit"
    CHAR_CLASS = "CharClass"
    OPERATOR = "Operator"
    COMMENT = "Comment"

    @property
    def css_name(self) -> str:
        """Name used for style configuration and CSS classes."""
        return _CSS_NAMES.get(self, self.value)


_CSS_NAMES = {TokenKind.CONS_NAME: "Constructor", TokenKind.STRING_LIT: "String"}

STYLE_KINDS = frozenset(kind.css_name for kind in TokenKind)


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    span: Span
    text: str


class Namespace(Enum):
    MODULE = "Module"
    SORT = "Sort"
    CONSTRUCTOR = "Constructor"


class Role(Enum):
    DECL = "Decl"
    REF = "Ref"
    BOTH = "Both"


@dataclass(frozen=True, slots=True)
class NameOccurrence:
    name: str
    span: Span
    namespace: Namespace
    role: Role


class LexError(Exception):
    def __init__(self, offset: int, message: str) -> None:
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset
        self.message = message


class ParseError(Exception):
    def __init__(self, offset: int, line: int, message: str) -> None:
        super().__init__(f"{message} (line {line})")
        self.offset = offset
        self.line = line
        self.message = message


def _is_letter(b: int) -> bool:
    return 0x41 <= b <= 0x5A or 0x61 <= b <= 0x7A


def _is_alnum(b: int) -> bool:
    return _is_letter(b) or 0x30 <= b <= 0x39


_WS = frozenset(b" \t\r\n")


def lex(file: SourceFile) -> list[Token]:
    """Tokenize a file; every non-whitespace byte lands in exactly one token.

    Identifier-shaped lexemes are classified in a second pass: idents after
    a "module"/"imports" keyword are module paths, an ident right after "."
    is a constructor name, everything else is a sort name. Multi-segment
    paths (a/B) are single tokens, so the classification never needs the
    parser.
    """
    data = file.data
    n = len(data)
    i = 0
    raw: list[tuple[TokenKind | None, Span]] = []  # None marks unclassified idents
    while i < n:
        b = data[i]
        if b in _WS:
            i += 1
            continue
        if b == 0x2F and i + 1 < n and data[i + 1] == 0x2F:  # //
            j = data.find(b"\n", i)
            j = n if j == -1 else j
            raw.append((TokenKind.COMMENT, Span(i, j)))
            i = j
            continue
        if _is_letter(b):
            j = i + 1
            while j < n and _is_alnum(data[j]):
                j += 1
            lexeme = data[i:j]
            if (
                lexeme == b"context"
                and data[j : j + 5] == b"-free"
                and (j + 5 == n or not _is_alnum(data[j + 5]))
            ):
                raw.append((TokenKind.KEYWORD, Span(i, j + 5)))
                i = j + 5
                continue
            continues_as_path = j + 1 < n and data[j] == 0x2F and _is_letter(data[j + 1])
            if not continues_as_path and lexeme.decode("ascii") in KEYWORDS:
                raw.append((TokenKind.KEYWORD, Span(i, j)))
                i = j
                continue
            while j + 1 < n and data[j] == 0x2F and _is_letter(data[j + 1]):
                j += 1
                while j < n and _is_alnum(data[j]):
                    j += 1
            raw.append((None, Span(i, j)))
            i = j
            continue
        if b == 0x22:  # double quote
            j = i + 1
            while j < n and data[j] not in (0x22, 0x0A):
                j += 1
            if j >= n or data[j] != 0x22:
                raise LexError(i, "unterminated string literal")
            raw.append((TokenKind.STRING_LIT, Span(i, j + 1)))
            i = j + 1
            continue
        if b == 0x5B:  # [
            j = i + 1
            while j < n and data[j] not in (0x5D, 0x0A):
                j += 2 if data[j] == 0x5C else 1  # backslash escapes the next byte
            if j >= n or data[j] != 0x5D:
                raise LexError(i, "unterminated character class")
            raw.append((TokenKind.CHAR_CLASS, Span(i, j + 1)))
            i = j + 1
            continue
        if b in (0x2E, 0x3D):  # . =
            raw.append((TokenKind.OPERATOR, Span(i, i + 1)))
            i += 1
            continue
        char = data[i : i + 4].decode("utf-8", errors="replace")[0]
        raise LexError(i, f"illegal character {char!r}")

    tokens: list[Token] = []
    in_path_section = False
    prev: Token | None = None  # last non-comment token
    for kind, span in raw:
        text = file.slice(span)
        if kind is None:
            if in_path_section:
                kind = TokenKind.MODULE_NAME
            elif prev is not None and prev.kind is TokenKind.OPERATOR and prev.text == ".":
                kind = TokenKind.CONS_NAME
            else:
                kind = TokenKind.SORT_NAME
        elif kind is TokenKind.KEYWORD:
            in_path_section = text in ("module", "imports")
        token = Token(kind, span, text)
        tokens.append(token)
        if kind is not TokenKind.COMMENT:
            prev = token
    return tokens


@dataclass(frozen=True, slots=True)
class LexRule:
    span: Span
    lhs: NameOccurrence
    char_class: Token


@dataclass(frozen=True, slots=True)
class Production:
    span: Span
    lhs: NameOccurrence
    constructor: NameOccurrence
    symbols: tuple[Union[NameOccurrence, Token], ...]


@dataclass(frozen=True, slots=True)
class ImportsSection:
    span: Span
    modules: tuple[NameOccurrence, ...]


@dataclass(frozen=True, slots=True)
class SortsSection:
    span: Span
    sorts: tuple[NameOccurrence, ...]


@dataclass(frozen=True, slots=True)
class LexicalSection:
    span: Span
    rules: tuple[LexRule, ...]


@dataclass(frozen=True, slots=True)
class ContextFreeSection:
    span: Span
    productions: tuple[Production, ...]


Section = Union[ImportsSection, SortsSection, LexicalSection, ContextFreeSection]


@dataclass(frozen=True, slots=True)
class SpecAst:
    module_decl: NameOccurrence
    sections: tuple[Section, ...]
    span: Span


def expected_module_path(rel_path: str) -> str:
    """Module path a file at rel_path is expected to declare."""
    if "." in rel_path.rsplit("/", 1)[-1]:
        return rel_path.rsplit(".", 1)[0]
    return rel_path


class _Parser:
    def __init__(self, file: SourceFile, tokens: list[Token]) -> None:
        self.file = file
        self.tokens = [t for t in tokens if t.kind is not TokenKind.COMMENT]
        self.pos = 0

    def la(self, k: int = 0) -> Token | None:
        idx = self.pos + k
        return self.tokens[idx] if idx < len(self.tokens) else None

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str) -> ParseError:
        tok = self.la()
        offset = tok.span.start if tok is not None else len(self.file.data)
        return ParseError(offset, self.file.line_of(offset), message)

    def expect_keyword(self, word: str) -> Token:
        tok = self.la()
        if tok is None or tok.kind is not TokenKind.KEYWORD or tok.text != word:
            raise self.fail(f"expected '{word}'")
        return self.advance()

    def expect_operator(self, op: str) -> Token:
        tok = self.la()
        if tok is None or tok.kind is not TokenKind.OPERATOR or tok.text != op:
            raise self.fail(f"expected '{op}'")
        return self.advance()

    def expect_kind(self, kind: TokenKind, what: str) -> Token:
        tok = self.la()
        if tok is None or tok.kind is not kind:
            raise self.fail(f"expected {what}")
        return self.advance()

    def at_keyword(self, *words: str) -> bool:
        tok = self.la()
        return tok is not None and tok.kind is TokenKind.KEYWORD and tok.text in words

    def parse_file(self) -> SpecAst:
        start = self.expect_keyword("module")
        header = self.expect_kind(TokenKind.MODULE_NAME, "module path")
        module_decl = NameOccurrence(header.text, header.span, Namespace.MODULE, Role.DECL)
        sections: list[Section] = []
        while self.la() is not None:
            sections.append(self.parse_section())
        end = sections[-1].span.end if sections else header.span.end
        return SpecAst(module_decl, tuple(sections), Span(start.span.start, end))

    def parse_section(self) -> Section:
        tok = self.la()
        if tok is None or tok.kind is not TokenKind.KEYWORD:
            raise self.fail("expected section keyword")
        if tok.text == "imports":
            return self.parse_imports()
        if tok.text == "sorts":
            return self.parse_sorts()
        if tok.text == "lexical":
            return self.parse_lexical()
        if tok.text == "context-free":
            return self.parse_context_free()
        raise self.fail(f"unexpected keyword '{tok.text}'")

    def parse_imports(self) -> ImportsSection:
        kw = self.advance()
        modules: list[NameOccurrence] = []
        while self.la() is not None and self.la().kind is TokenKind.MODULE_NAME:
            tok = self.advance()
            modules.append(NameOccurrence(tok.text, tok.span, Namespace.MODULE, Role.REF))
        if not modules:
            raise self.fail("expected module path after 'imports'")
        return ImportsSection(Span(kw.span.start, modules[-1].span.end), tuple(modules))

    def parse_sorts(self) -> SortsSection:
        kw = self.advance()
        sorts: list[NameOccurrence] = []
        while self.la() is not None and self.la().kind is TokenKind.SORT_NAME:
            tok = self.advance()
            sorts.append(NameOccurrence(tok.text, tok.span, Namespace.SORT, Role.DECL))
        if not sorts:
            raise self.fail("expected sort name after 'sorts'")
        return SortsSection(Span(kw.span.start, sorts[-1].span.end), tuple(sorts))

    def parse_lexical(self) -> LexicalSection:
        kw = self.advance()
        self.expect_keyword("syntax")
        rules: list[LexRule] = []
        while self.la() is not None and self.la().kind is TokenKind.SORT_NAME:
            lhs_tok = self.advance()
            lhs = NameOccurrence(lhs_tok.text, lhs_tok.span, Namespace.SORT, Role.DECL)
            self.expect_operator("=")
            cc = self.expect_kind(TokenKind.CHAR_CLASS, "character class")
            rules.append(LexRule(Span(lhs.span.start, cc.span.end), lhs, cc))
        self.check_section_end()
        end = rules[-1].span.end if rules else self.tokens[self.pos - 1].span.end
        return LexicalSection(Span(kw.span.start, end), tuple(rules))

    def parse_context_free(self) -> ContextFreeSection:
        kw = self.advance()
        self.expect_keyword("syntax")
        productions: list[Production] = []
        while self.at_production_start():
            productions.append(self.parse_production())
        self.check_section_end()
        end = productions[-1].span.end if productions else self.tokens[self.pos - 1].span.end
        return ContextFreeSection(Span(kw.span.start, end), tuple(productions))

    def at_production_start(self) -> bool:
        tok, dot = self.la(), self.la(1)
        return (
            tok is not None
            and tok.kind is TokenKind.SORT_NAME
            and dot is not None
            and dot.kind is TokenKind.OPERATOR
            and dot.text == "."
        )

    def parse_production(self) -> Production:
        lhs_tok = self.advance()
        lhs = NameOccurrence(lhs_tok.text, lhs_tok.span, Namespace.SORT, Role.BOTH)
        self.expect_operator(".")
        cons_tok = self.expect_kind(TokenKind.CONS_NAME, "constructor name")
        constructor = NameOccurrence(
            cons_tok.text, cons_tok.span, Namespace.CONSTRUCTOR, Role.DECL
        )
        eq = self.expect_operator("=")
        symbols: list[NameOccurrence | Token] = []
        while True:
            tok = self.la()
            if tok is None or tok.kind is TokenKind.KEYWORD or self.at_production_start():
                break
            if tok.kind is TokenKind.SORT_NAME:
                self.advance()
                symbols.append(NameOccurrence(tok.text, tok.span, Namespace.SORT, Role.REF))
            elif tok.kind is TokenKind.STRING_LIT:
                symbols.append(self.advance())
            else:
                raise self.fail("expected sort name or string literal")
        end = symbols[-1].span.end if symbols else eq.span.end
        return Production(Span(lhs.span.start, end), lhs, constructor, tuple(symbols))

    def check_section_end(self) -> None:
        tok = self.la()
        if tok is not None and tok.kind is not TokenKind.KEYWORD:
            raise self.fail("expected section keyword")


def parse(file: SourceFile, tokens: list[Token] | None = None) -> SpecAst:
    """Parse one file into a position-carrying AST.

    Raises LexError or ParseError on the first problem; callers treat such
    files as degraded (rendered as a plain escaped page). Pre-lexed tokens
    may be passed to avoid lexing twice.
    """
    return _Parser(file, lex(file) if tokens is None else tokens).parse_file()


def occurrences(ast: SpecAst) -> list[NameOccurrence]:
    """All name occurrences of a parsed file, in span order."""
    occs: list[NameOccurrence] = [ast.module_decl]
    for section in ast.sections:
        if isinstance(section, ImportsSection):
            occs.extend(section.modules)
        elif isinstance(section, SortsSection):
            occs.extend(section.sorts)
        elif isinstance(section, LexicalSection):
            occs.extend(rule.lhs for rule in section.rules)
        else:
            for prod in section.productions:
                occs.append(prod.lhs)
                occs.append(prod.constructor)
                occs.extend(s for s in prod.symbols if isinstance(s, NameOccurrence))
    assert all(a.span.start < b.span.start for a, b in zip(occs, occs[1:]))
    return occs
