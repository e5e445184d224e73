import pytest

from tamefill import Panic, TaggedError, UnhandledException, is_panic, panic
from tamefill.error import (
    BallTooSmall,
    BudgetExceeded,
    ConfigError,
    NotAlmostConvex,
    OracleFailure,
    ParseError,
    RadiusExceeded,
    UnknownPreset,
    WrongAlphabet,
)


class StuckWord(TaggedError):
    __slots__ = ("word",)

    TAG: str = "StuckWord"

    def __init__(self, word: str) -> None:
        self.word = word
        super().__init__(f"No rule applies to {word}")


class LostEdge(TaggedError):
    __slots__ = ("edge",)

    TAG: str = "LostEdge"

    def __init__(self, edge: tuple[int, int]) -> None:
        self.edge = edge
        super().__init__(f"Edge {edge} left the ball")



class TestTaggedError:
    class TestConstruction:
        def test_has_tag_discriminator(self) -> None:
            assert StuckWord("b a").tag == "StuckWord"
            assert LostEdge((0, 1)).tag == "LostEdge"
            assert BallTooSmall("x", 2).tag == "BallTooSmall"

        def test_sets_message(self) -> None:
            assert StuckWord("b a").message == "No rule applies to b a"
            assert str(LostEdge((3, 0))) == "Edge (3, 0) left the ball"

        def test_preserves_custom_properties(self) -> None:
            assert StuckWord("b a").word == "b a"
            assert LostEdge((3, 0)).edge == (3, 0)
            assert RadiusExceeded(2, 5).requested == 5

        def test_chains_cause_via_dunder_cause(self) -> None:
            cause = ValueError("root cause")

            class Wrapped(TaggedError):
                __slots__ = ()

                TAG: str = "Wrapped"

                def __init__(self) -> None:
                    super().__init__("wrapper", cause)

            error = Wrapped()
            assert error.__cause__ is cause
            assert error.cause is cause
            assert error.message == "wrapper"

        def test_keeps_plain_object_cause(self) -> None:
            error = NotAlmostConvex("too far", (4, 7))
            assert error.cause == (4, 7)
            assert error.__cause__ is None
            assert error.pair == (4, 7)

        def test_missing_tag_is_a_defect(self) -> None:
            with pytest.raises(Panic) as exc_info:

                class Untagged(TaggedError):  # pyright: ignore[reportUnusedClass]
                    pass

            assert "must define TAG" in exc_info.value.message

    class TestExitCodes:
        def test_input_errors_exit_2(self) -> None:
            assert ParseError("bad", 3).exit_code == 2
            assert UnknownPreset("Z9").exit_code == 2
            assert WrongAlphabet(("a", "A"), ("x",)).exit_code == 2
            assert ConfigError("bad").exit_code == 2

        def test_budget_errors_exit_3(self) -> None:
            assert BudgetExceeded("slow", 10).exit_code == 3
            assert OracleFailure("slow").exit_code == 3

        def test_check_failures_exit_1(self) -> None:
            assert BallTooSmall("small", 1).exit_code == 1
            assert StuckWord("b").exit_code == 1

        def test_panic_exits_70(self) -> None:
            assert Panic("broken").exit_code == 70

    class TestReport:
        def test_reports_tag_message_and_exit_code(self) -> None:
            assert UnknownPreset("Z9").report() == {
                "status": "err",
                "tag": "UnknownPreset",
                "message": "Unknown preset: Z9",
                "exit_code": 2,
            }

        def test_parse_error_prefixes_line(self) -> None:
            assert ParseError("unknown letter", 4).message == "line 4: unknown letter"
            assert ParseError("generators required").message == "generators required"
            assert ParseError("x", 4).line == 4

        def test_budget_message_names_budget(self) -> None:
            error = BudgetExceeded("rewriting did not finish", 500)
            assert error.message == "rewriting did not finish (budget 500)"
            assert error.budget == 500

    class TestIsTaggedError:
        def test_returns_true_for_tagged_errors(self) -> None:
            assert TaggedError.is_tagged_error(StuckWord("b"))
            assert TaggedError.is_tagged_error(BallTooSmall("x", 1))

        def test_returns_false_for_plain_exceptions(self) -> None:
            assert not TaggedError.is_tagged_error(ValueError("test"))

        def test_returns_false_for_non_exceptions(self) -> None:
            assert not TaggedError.is_tagged_error(123)
            assert not TaggedError.is_tagged_error("test")


class TestUnhandledException:
    def test_wraps_exception_cause(self) -> None:
        cause = ValueError("root cause")
        error = UnhandledException(cause)
        assert error.__cause__ is cause
        assert error.message == "Unhandled exception: root cause"

    def test_wraps_non_error_cause(self) -> None:
        error = UnhandledException("root cause")
        assert error.cause == "root cause"
        assert error.message == "Unhandled exception: root cause"

    def test_handles_none_cause(self) -> None:
        error = UnhandledException(None)
        assert error.cause is None
        assert error.message == "Unhandled exception: None"


class TestPanic:
    def test_panic_raises(self) -> None:
        with pytest.raises(Panic) as exc_info:
            panic("gluing identified different elements", (1, 2))

        assert exc_info.value.cause == (1, 2)
        assert is_panic(exc_info.value)

    def test_is_panic_rejects_other_errors(self) -> None:
        assert not is_panic(StuckWord("a"))
        assert not is_panic(ValueError("a"))
