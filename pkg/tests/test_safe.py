import pytest

from tamefill import Panic, UnhandledException, grow, growth_config, safe
from tamefill.error import BallTooSmall, NotIdentity, RadiusExceeded
from tamefill.safe import next_radius


class TestSafe:
    class TestSimpleThunk:
        def test_returns_ok_on_success(self) -> None:
            result = safe(lambda: 42)
            assert result.is_ok()
            assert result.unwrap() == 42

        def test_returns_tagged_error_as_itself(self) -> None:
            def fill() -> int:
                raise NotIdentity("'a' does not represent the identity")

            result = safe(fill)
            assert result.is_err()
            assert isinstance(result.unwrap_err(), NotIdentity)

        def test_wraps_foreign_exception(self) -> None:
            result = safe(lambda: int("bad"))
            error = result.unwrap_err()
            assert isinstance(error, UnhandledException)
            assert error.tag == "UnhandledException"
            assert isinstance(error.__cause__, ValueError)

        def test_does_not_capture_panic(self) -> None:
            def broken() -> int:
                raise Panic("gluing mismatch")

            with pytest.raises(Panic):
                safe(broken)


class TestNextRadius:
    def test_constant(self) -> None:
        assert [next_radius(2, a, 1, "constant") for a in range(3)] == [3, 4, 5]

    def test_linear(self) -> None:
        assert [next_radius(2, a, 1, "linear") for a in range(3)] == [3, 5, 8]

    def test_exponential(self) -> None:
        assert [next_radius(2, a, 1, "exponential") for a in range(3)] == [3, 5, 9]

    def test_step_scales(self) -> None:
        assert next_radius(0, 1, 3, "constant") == 6


class TestGrow:
    def test_grows_until_build_fits(self) -> None:
        radii: list[int] = []

        def build(radius: int) -> int:
            radii.append(radius)
            if radius < 4:
                raise BallTooSmall("needs radius 4", radius)
            return radius

        result = grow(build, growth_config(start=1, times=5))
        assert result.unwrap() == 4
        assert radii == [1, 2, 3, 4]

    def test_returns_last_error_after_all_retries(self) -> None:
        def build(radius: int) -> int:
            raise RadiusExceeded(radius, radius + 1)

        result = grow(build, growth_config(start=0, times=2, step=2))
        error = result.unwrap_err()
        assert isinstance(error, RadiusExceeded)
        assert error.radius == 4

    def test_no_retry_when_success(self) -> None:
        calls: list[int] = []

        def build(radius: int) -> int:
            calls.append(radius)
            return radius

        assert grow(build, growth_config(start=3, times=4)).unwrap() == 3
        assert calls == [3]

    def test_does_not_retry_other_errors_by_default(self) -> None:
        calls: list[int] = []

        def build(radius: int) -> int:
            calls.append(radius)
            raise NotIdentity("not trivial")

        result = grow(build, growth_config(start=1, times=3))
        assert isinstance(result.unwrap_err(), NotIdentity)
        assert calls == [1]

    def test_respects_should_retry_predicate(self) -> None:
        calls: list[int] = []

        def build(radius: int) -> int:
            calls.append(radius)
            raise NotIdentity("not trivial")

        grow(build, growth_config(start=1, times=2, should_retry=lambda e: True))
        assert calls == [1, 2, 3]

    def test_raises_panic_when_should_retry_throws(self) -> None:
        def predicate(_: object) -> bool:
            raise RuntimeError("predicate failed")

        def build(radius: int) -> int:
            raise BallTooSmall("small", radius)

        with pytest.raises(Panic):
            grow(build, growth_config(start=1, times=2, should_retry=predicate))
