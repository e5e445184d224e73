import pytest

from tamefill import format_presentation, parse_presentation_file, preset
from tamefill.error import ParseError

HEADER = "generators: a A b B\ninverses: a A, b B\n"


class TestParse:
    def test_rules_give_the_rewriting_presentation(self) -> None:
        text = HEADER + "rule: a A ->\nrule: b a -> a b  # commute\n"
        p, rs = parse_presentation_file(text)
        assert rs is not None
        assert len(rs.rules) == 2
        assert p.alphabet.parse("b a B A") in p

    def test_relators_take_precedence(self) -> None:
        text = "# torus\n" + HEADER + "rule: b a -> a b\nrelator: a a\n"
        p, rs = parse_presentation_file(text)
        assert rs is not None
        assert p.alphabet.parse("a a") in p
        assert p.alphabet.parse("b a B A") not in p

    def test_relators_only(self) -> None:
        p, rs = parse_presentation_file(HEADER + "relator: a b A B\n")
        assert rs is None
        assert len(p.relators) == 8

    def test_no_relators_or_rules_is_free(self) -> None:
        p, rs = parse_presentation_file(HEADER)
        assert rs is None
        assert p.relators == ()

    def test_involution(self) -> None:
        p, _ = parse_presentation_file("generators: s\ninverses: s s\nrelator: s s\n")
        assert p.alphabet.inverse(0) == 0


class TestParseErrors:
    def test_unknown_letter_reports_its_line(self) -> None:
        with pytest.raises(ParseError) as exc_info:
            parse_presentation_file(HEADER + "relator: a c\n")

        assert exc_info.value.line == 3
        assert exc_info.value.message.startswith("line 3: ")

    def test_unknown_directive(self) -> None:
        with pytest.raises(ParseError) as exc_info:
            parse_presentation_file("foo: x\n")

        assert exc_info.value.line == 1

    def test_missing_generators(self) -> None:
        with pytest.raises(ParseError) as exc_info:
            parse_presentation_file("# nothing here\n")

        assert exc_info.value.line == 0
        assert exc_info.value.message == "generators required"

    def test_missing_inverses(self) -> None:
        with pytest.raises(ParseError) as exc_info:
            parse_presentation_file("generators: a A\n")

        assert exc_info.value.message == "inverses required"

    @pytest.mark.parametrize(
        ("text", "line"),
        [
            ("inverses: a A\n", 1),
            (HEADER + "generators: a A\n", 3),
            (HEADER + "rule: a b\n", 3),
            (HEADER + "rule: -> a\n", 3),
            (HEADER + "relator:\n", 3),
            ("generators: a A\ninverses: a\n", 2),
            ("generators: a A b\ninverses: a A\n", 2),
        ],
    )
    def test_line_numbers(self, text: str, line: int) -> None:
        with pytest.raises(ParseError) as exc_info:
            parse_presentation_file(text)

        assert exc_info.value.line == line

    def test_duplicate_rules(self) -> None:
        with pytest.raises(ParseError) as exc_info:
            parse_presentation_file(HEADER + "rule: b a -> a b\nrule: b a -> a b\n")

        assert exc_info.value.line == 0


class TestFormat:
    def test_rules_only_omit_relators(self) -> None:
        z2 = preset("Z2")
        text = format_presentation(z2.presentation, z2.rewriting)
        assert "rule: a A ->\n" in text
        assert "rule: b a -> a b\n" in text
        assert "relator:" not in text
        assert text.startswith("generators: a A b B\ninverses: a A, b B\n")

    @pytest.mark.parametrize("name", ["Z2", "Z3", "S3", "F1"])
    def test_parses_back(self, name: str) -> None:
        entry = preset(name)
        p, rs = parse_presentation_file(format_presentation(entry.presentation, entry.rewriting))
        assert p == entry.presentation
        assert rs is not None
        assert entry.rewriting is not None
        assert rs.rules == entry.rewriting.rules

    def test_presentation_without_rules(self) -> None:
        p, _ = parse_presentation_file(HEADER + "relator: a b A B\n")
        text = format_presentation(p)
        assert text.count("relator:") == 8
        assert parse_presentation_file(text)[0] == p
