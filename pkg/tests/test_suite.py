import pytest

from tamefill import Presentation, build_ball, preset, rewriting_flow
from tamefill.filling import NDiagramBuilder
from tamefill.presets import BS_ALPHABET, bs1p_nf_member
from tamefill.suite import (
    CRITERIA,
    CriterionResult,
    audit,
    flow_suite,
    predicate_mismatches,
    run_all,
)


class TestCriterionResult:
    def test_line(self) -> None:
        assert CriterionResult(3, "flow_verification", True, "ok").line() == (
            " 3 PASS flow_verification: ok"
        )
        assert CriterionResult(11, "predicates", False, "x0").line() == (
            "11 FAIL predicates: x0"
        )


class TestAudit:
    def test_flow_suite_is_clean(self) -> None:
        rs = preset("Z2").rewriting
        assert rs is not None
        ball = build_ball(rs.oracle(), rs.alphabet, 4)
        suite = flow_suite(ball, NDiagramBuilder(rewriting_flow(rs, ball)), 4)
        assert len(suite.combings) == 8
        assert audit(suite.combings, suite.presentation) == []

    def test_reports_the_word(self) -> None:
        rs = preset("Z2").rewriting
        assert rs is not None
        ball = build_ball(rs.oracle(), rs.alphabet, 4)
        suite = flow_suite(ball, NDiagramBuilder(rewriting_flow(rs, ball)), 4)
        failures = audit(suite.combings[:1], Presentation(ball.alphabet, ()))
        assert failures
        assert failures[0].startswith(ball.alphabet.render(suite.combings[0].word) + ": ")


class TestRunAll:
    @pytest.fixture(scope="class")
    def results(self) -> list[CriterionResult]:
        return run_all()

    def test_every_criterion_reports(self, results: list[CriterionResult]) -> None:
        assert [r.number for r in results] == list(range(1, len(CRITERIA) + 1))

    def test_every_criterion_passes(self, results: list[CriterionResult]) -> None:
        assert [r.line() for r in results if not r.passed] == []


class TestPredicateMismatches:
    def test_both_bases_agree_with_the_reference(self) -> None:
        mismatches, checked = predicate_mismatches()
        assert mismatches == []
        words = sum(4**n for n in range(6))
        assert checked == 3 * words

    def test_base_three_is_compared(self) -> None:
        _, only_two = predicate_mismatches(5, (2,))
        _, both = predicate_mismatches(5, (2, 3))
        assert both - only_two == sum(4**n for n in range(6))

    def test_base_three_separates_words_base_two_accepts(self) -> None:
        w = BS_ALPHABET.parse("T a a a t")
        assert bs1p_nf_member(w, 2)
        assert not bs1p_nf_member(w, 3)
