from __future__ import annotations

import pytest

from twinsmith.minispec import (
    ContextFreeSection,
    LexError,
    NameOccurrence,
    Namespace,
    ParseError,
    Role,
    SortsSection,
    Token,
    TokenKind,
    expected_module_path,
    lex,
    occurrences,
    parse,
)
from twinsmith.source import SourceFile

from conftest import FIG1_DIR


def lex_text(text: str) -> list[Token]:
    return lex(SourceFile.from_text("t.mspec", text))


def kinds(tokens: list[Token]) -> list[str]:
    return [t.kind.value for t in tokens]


class TestLex:
    def test_sorts_line(self):
        tokens = lex_text("sorts Exp")
        assert [(t.kind, t.text) for t in tokens] == [
            (TokenKind.KEYWORD, "sorts"),
            (TokenKind.SORT_NAME, "Exp"),
        ]

    def test_production_line(self):
        # Hand-lexed oracle for the grammar: SortName '.' ConsName '='
        # SortName StringLit SortName.
        tokens = lex_text('Exp.Add = Exp "+" Exp')
        assert kinds(tokens) == [
            "SortName", "Operator", "ConsName", "Operator",
            "SortName", "StringLit", "SortName",
        ]
        assert [t.text for t in tokens] == ["Exp", ".", "Add", "=", "Exp", '"+"', "Exp"]

    def test_unterminated_char_class(self):
        with pytest.raises(LexError) as excinfo:
            lex_text("x = [")
        assert excinfo.value.offset == 4
        assert "character class" in excinfo.value.message

    def test_unterminated_string(self):
        with pytest.raises(LexError) as excinfo:
            lex_text('x = "abc')
        assert excinfo.value.offset == 4

    def test_string_may_not_span_lines(self):
        with pytest.raises(LexError):
            lex_text('x = "a\nb"')

    def test_illegal_character(self):
        with pytest.raises(LexError) as excinfo:
            lex_text("sorts !")
        assert excinfo.value.offset == 6

    def test_escaped_bracket_in_char_class(self):
        tokens = lex_text("X = [\\]a]")
        assert tokens[-1].kind is TokenKind.CHAR_CLASS
        assert tokens[-1].text == "[\\]a]"

    def test_context_free_is_one_keyword(self):
        tokens = lex_text("context-free syntax")
        assert [(t.kind, t.text) for t in tokens] == [
            (TokenKind.KEYWORD, "context-free"),
            (TokenKind.KEYWORD, "syntax"),
        ]

    def test_contextfree_is_an_identifier(self):
        tokens = lex_text("sorts contextfree")
        assert tokens[1].kind is TokenKind.SORT_NAME

    def test_module_path_is_single_token(self):
        tokens = lex_text("module a/A2/Bx")
        assert [(t.kind, t.text) for t in tokens] == [
            (TokenKind.KEYWORD, "module"),
            (TokenKind.MODULE_NAME, "a/A2/Bx"),
        ]

    def test_keyword_segment_in_path(self):
        tokens = lex_text("imports lexical/Identifiers")
        assert tokens[1].kind is TokenKind.MODULE_NAME
        assert tokens[1].text == "lexical/Identifiers"

    def test_imports_classify_until_next_keyword(self):
        tokens = lex_text("imports a b/C sorts X")
        assert kinds(tokens) == ["Keyword", "ModuleName", "ModuleName", "Keyword", "SortName"]

    def test_comment_token(self):
        tokens = lex_text("sorts X // trailing note\nsorts Y")
        comment = [t for t in tokens if t.kind is TokenKind.COMMENT]
        assert len(comment) == 1
        assert comment[0].text == "// trailing note"

    def test_totality_on_corpus(self):
        # Concatenating token slices and the skipped gaps reproduces the
        # file, and the gaps are pure whitespace.
        for path in sorted(FIG1_DIR.rglob("*.mspec")):
            file = SourceFile.from_text(str(path), path.read_text())
            tokens = lex(file)
            pos = 0
            for token in tokens:
                gap = file.text[pos : token.span.start]
                assert gap.strip() == ""
                assert file.slice(token.span) == token.text
                pos = token.span.end
            assert file.text[pos:].strip() == ""


class TestParse:
    def test_minimal_file(self):
        file = SourceFile.from_text("a/A.mspec", "module a/A\nsorts X\n")
        ast = parse(file)
        assert ast.module_decl == NameOccurrence(
            "a/A", ast.module_decl.span, Namespace.MODULE, Role.DECL
        )
        assert len(ast.sections) == 1
        section = ast.sections[0]
        assert isinstance(section, SortsSection)
        assert [(s.name, s.role) for s in section.sorts] == [("X", Role.DECL)]

    def test_fig1_production_shape(self):
        text = (
            "module a/A\n"
            "context-free syntax\n"
            '  FieldAccess.QSuperField = TypeName ".super." Id\n'
        )
        ast = parse(SourceFile.from_text("a/A.mspec", text))
        (section,) = ast.sections
        assert isinstance(section, ContextFreeSection)
        (prod,) = section.productions
        assert (prod.lhs.name, prod.lhs.namespace, prod.lhs.role) == (
            "FieldAccess", Namespace.SORT, Role.BOTH,
        )
        assert (prod.constructor.name, prod.constructor.namespace, prod.constructor.role) == (
            "QSuperField", Namespace.CONSTRUCTOR, Role.DECL,
        )
        shapes = [
            (s.name, s.role) if isinstance(s, NameOccurrence) else ("literal", s.text)
            for s in prod.symbols
        ]
        assert shapes == [
            ("TypeName", Role.REF),
            ("literal", '".super."'),
            ("Id", Role.REF),
        ]

    def test_imports_without_paths(self):
        file = SourceFile.from_text("a/A.mspec", "module a/A\nimports")
        with pytest.raises(ParseError) as excinfo:
            parse(file)
        assert excinfo.value.offset == len(file.data)
        assert excinfo.value.line == 2

    def test_missing_module_header(self):
        with pytest.raises(ParseError):
            parse(SourceFile.from_text("a.mspec", "sorts X\n"))

    def test_stray_token_after_section(self):
        with pytest.raises(ParseError):
            parse(SourceFile.from_text("a.mspec", 'module a\nlexical syntax\nX = [a] "str"\n'))

    def test_empty_production_body(self):
        text = "module a\ncontext-free syntax\n  X.Empty =\n  Y.Full = X\n"
        ast = parse(SourceFile.from_text("a.mspec", text))
        (section,) = ast.sections
        assert [p.constructor.name for p in section.productions] == ["Empty", "Full"]
        assert section.productions[0].symbols == ()

    def test_node_spans_nested_and_ordered(self):
        for path in sorted(FIG1_DIR.rglob("*.mspec")):
            file = SourceFile.from_text(str(path), path.read_text())
            ast = parse(file)
            spans = [s.span for s in ast.sections]
            for span in spans:
                assert ast.span.start <= span.start <= span.end <= ast.span.end
            for left, right in zip(spans, spans[1:]):
                assert left.end <= right.start
            for section in ast.sections:
                for child in getattr(section, "productions", getattr(section, "rules", ())):
                    assert section.span.start <= child.span.start
                    assert child.span.end <= section.span.end

    def test_deterministic(self):
        text = FIG1_DIR.joinpath("names/Names.mspec").read_text()
        file = SourceFile.from_text("names/Names.mspec", text)
        assert parse(file) == parse(file)


class TestOccurrences:
    def test_extraction_rules(self):
        text = "module a/A\nsorts X\ncontext-free syntax\nX.C = X\n"
        ast = parse(SourceFile.from_text("a/A.mspec", text))
        occs = [(o.name, o.namespace.value, o.role.value) for o in occurrences(ast)]
        assert occs == [
            ("a/A", "Module", "Decl"),
            ("X", "Sort", "Decl"),
            ("X", "Sort", "Both"),
            ("C", "Constructor", "Decl"),
            ("X", "Sort", "Ref"),
        ]

    def test_header_only(self):
        ast = parse(SourceFile.from_text("a.mspec", "module a\n"))
        occs = occurrences(ast)
        assert len(occs) == 1
        assert occs[0].namespace is Namespace.MODULE

    def test_lexrule_and_imports_roles(self):
        text = "module a\nimports b c\nlexical syntax\nW = [a-z]\n"
        ast = parse(SourceFile.from_text("a.mspec", text))
        occs = [(o.name, o.namespace.value, o.role.value) for o in occurrences(ast)]
        assert occs == [
            ("a", "Module", "Decl"),
            ("b", "Module", "Ref"),
            ("c", "Module", "Ref"),
            ("W", "Sort", "Decl"),
        ]

    def test_every_occurrence_coincides_with_a_token(self):
        for path in sorted(FIG1_DIR.rglob("*.mspec")):
            file = SourceFile.from_text(str(path), path.read_text())
            token_spans = {t.span for t in lex(file)}
            for occ in occurrences(parse(file)):
                assert occ.span in token_spans
                assert file.slice(occ.span) == occ.name


def test_expected_module_path():
    assert expected_module_path("names/Names.mspec") == "names/Names"
    assert expected_module_path("a.mspec") == "a"
    assert expected_module_path("dir.v2/plain") == "dir.v2/plain"
