from dataclasses import replace

import pytest

from tamefill import (
    Alphabet,
    Rule,
    RewritingSystem,
    check_minimal,
    check_unique_normal_forms,
    critical_pairs,
    gamma,
    gamma_prefix,
    gamma_table,
    normal_form,
    normal_form_trace,
    prefix_rewrite_sequence,
    preset,
    rewrite_once,
    rewriting_presentation,
)
from tamefill import rewriting
from tamefill.error import BudgetExceeded, ParseError
from tamefill.rewriting import is_irreducible, longest_rule, successors

AB = Alphabet.standard(2)
A1 = Alphabet.standard(1)


@pytest.fixture
def z2() -> RewritingSystem:
    rs = preset("Z2").rewriting
    assert rs is not None
    return rs


def render(rs: RewritingSystem, words: list[tuple[int, ...]]) -> list[str]:
    return [rs.alphabet.render(w) for w in words]


class TestRule:
    def test_rejects_empty_left_side(self) -> None:
        with pytest.raises(ParseError) as exc_info:
            Rule((), (0,))

        assert "nonempty" in exc_info.value.message

    def test_rejects_identical_sides(self) -> None:
        with pytest.raises(ParseError):
            Rule((0,), (0,))

    def test_length_is_longer_side(self) -> None:
        assert Rule((0, 0, 0), (1,)).length == 3

    def test_system_rejects_duplicate_rules(self) -> None:
        with pytest.raises(ParseError):
            RewritingSystem.from_rules(AB, [("b a", "a b"), ("b a", "a b")])


class TestNormalForm:
    def test_commutes_letters(self, z2: RewritingSystem) -> None:
        assert z2.alphabet.render(normal_form(z2, z2.alphabet.parse("b a a"))) == "a a b"

    def test_cancels(self, z2: RewritingSystem) -> None:
        assert normal_form(z2, z2.alphabet.parse("b a B A")) == ()

    def test_rewrite_once_is_leftmost(self, z2: RewritingSystem) -> None:
        step = rewrite_once(z2, z2.alphabet.parse("b a a"))
        assert step is not None
        assert z2.alphabet.render(step) == "a b a"
        assert rewrite_once(z2, z2.alphabet.parse("a b")) is None

    def test_trace_records_every_step(self, z2: RewritingSystem) -> None:
        trace = normal_form_trace(z2, z2.alphabet.parse("b a a"))
        assert render(z2, trace) == ["b a a", "a b a", "a a b"]

    def test_prefix_sequence_reaches_same_normal_form(self, z2: RewritingSystem) -> None:
        w = z2.alphabet.parse("B b a B a")
        assert prefix_rewrite_sequence(z2, w)[-1] == normal_form(z2, w)

    def test_longest_left_side_wins_ties(self) -> None:
        rs = RewritingSystem.from_rules(A1, [("a", "A"), ("a a", "")])
        assert rewrite_once(rs, (0, 0)) == ()

    def test_budget_exceeded_on_nonterminating_system(self) -> None:
        rs = RewritingSystem.from_rules(A1, [("a", "A"), ("A", "a")], step_budget=10)

        with pytest.raises(BudgetExceeded) as exc_info:
            normal_form(rs, (0,))

        assert exc_info.value.budget == 10
        assert exc_info.value.exit_code == 3

    def test_replaced_budget_applies(self) -> None:
        rs = RewritingSystem.from_rules(A1, [("a", "A"), ("A", "a")])
        with pytest.raises(BudgetExceeded):
            normal_form(replace(rs, step_budget=3), (0,))

    def test_oracle_is_normal_form(self, z2: RewritingSystem) -> None:
        w = z2.alphabet.parse("B a b")
        assert z2.oracle()(w) == normal_form(z2, w)

    def test_cache_is_bounded(self, z2: RewritingSystem, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setattr(rewriting, "NORMAL_FORM_CACHE_SIZE", 2)
        rs = replace(z2)
        words = [z2.alphabet.parse(text) for text in ("b a", "B a", "b A", "b a")]
        forms = [z2.alphabet.render(normal_form(rs, w)) for w in words]
        assert forms == ["a b", "a B", "A b", "a b"]
        assert rs.cached_normal_forms == 2

    def test_fresh_system_has_an_empty_cache(self, z2: RewritingSystem) -> None:
        rs = replace(z2, step_budget=50)
        assert rs.cached_normal_forms == 0
        normal_form(rs, z2.alphabet.parse("b a"))
        assert rs.cached_normal_forms == 1


class TestChecks:
    def test_presets_are_minimal_and_complete(self, z2: RewritingSystem) -> None:
        assert check_minimal(z2) == []
        assert critical_pairs(z2) == []

    def test_reducible_factor_of_left_side(self) -> None:
        rs = RewritingSystem.from_rules(A1, [("a a a", ""), ("a a", "A")])
        violations = check_minimal(rs)
        assert len(violations) == 1
        assert violations[0].factor == (0, 0)
        assert violations[0].reason == "proper factor of left side reducible"

    def test_reducible_right_side(self) -> None:
        rs = RewritingSystem.from_rules(A1, [("A", "a a"), ("a a", "A")])
        reasons = [v.reason for v in check_minimal(rs)]
        assert "right side reducible" in reasons

    def test_overlap_gives_critical_pair(self) -> None:
        rs = RewritingSystem.from_rules(AB, [("a b", "b"), ("b a", "a")])
        pairs = critical_pairs(rs)
        assert pairs[0].overlap == AB.parse("a b a")
        assert {pairs[0].left, pairs[0].right} == {AB.parse("a"), AB.parse("a a")}

    def test_unique_normal_forms(self) -> None:
        rs = RewritingSystem.from_rules(AB, [("a b", "b"), ("b a", "a")])
        assert check_unique_normal_forms(rs, 2) == []
        ambiguous = check_unique_normal_forms(rs, 3)
        assert AB.parse("a b a") in ambiguous
        assert AB.parse("b a b") in ambiguous

    def test_unique_normal_forms_budget(self, z2: RewritingSystem) -> None:
        with pytest.raises(BudgetExceeded):
            check_unique_normal_forms(z2, 4, node_budget=5)

    def test_irreducible_and_successors(self, z2: RewritingSystem) -> None:
        assert is_irreducible(z2, z2.alphabet.parse("a a B"))
        assert successors(z2, z2.alphabet.parse("b a A")) == {(2,), (0, 2, 1)}


class TestGrowth:
    def test_z2_growth_is_linear(self, z2: RewritingSystem) -> None:
        assert gamma_table(z2, 7) == list(range(8))
        assert gamma(z2, 5) == 5

    def test_lengthening_rule(self) -> None:
        rs = RewritingSystem.from_rules(
            A1, [("a A", ""), ("A a", ""), ("a a a", "A A A A")]
        )
        assert gamma_table(rs, 3) == [0, 1, 2, 4]
        assert gamma_prefix(rs, 3) == 4

    def test_budget(self, z2: RewritingSystem) -> None:
        with pytest.raises(BudgetExceeded):
            gamma(z2, 4, node_budget=10)


class TestRewritingPresentation:
    def test_z2_commutators(self, z2: RewritingSystem) -> None:
        p = rewriting_presentation(z2)
        assert len(p.relators) == 8
        assert p.longest_relator == 4
        assert z2.alphabet.parse("b a B A") in p

    def test_longest_rule(self, z2: RewritingSystem) -> None:
        assert longest_rule(z2) == 2
        assert len(z2.rules) == 8
