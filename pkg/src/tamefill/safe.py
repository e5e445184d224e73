import logging
from typing import Callable, Literal, TypeAlias, TypedDict, TypeVar, cast

from .error import (
    BallTooSmall,
    Panic,
    RadiusExceeded,
    TaggedError,
    UnhandledException,
)
from .result import Err, Ok, Result, try_or_panic

logger = logging.getLogger(__name__)

A = TypeVar("A")

Backoff: TypeAlias = Literal["constant", "linear", "exponential"]

# Predicate deciding whether a failed build is worth retrying on a larger ball.
ShouldGrowCallable: TypeAlias = Callable[[TaggedError], bool]


class GrowthConfig(TypedDict, total=False):
    """Radius schedule for ``grow``.

    Attributes:
        start: Radius of the first attempt.
        times: Number of retries after the first attempt.
        step: Radius increment unit.
        backoff: How the increment scales with the attempt number.
        should_retry: Predicate on the error; defaults to ball-size errors.
    """

    start: int
    times: int
    step: int
    backoff: Backoff
    should_retry: ShouldGrowCallable


def growth_config(
    *,
    start: int,
    times: int,
    step: int = 1,
    backoff: Backoff = "constant",
    should_retry: ShouldGrowCallable | None = None,
) -> GrowthConfig:
    """Helper to build a ``GrowthConfig`` with defaults filled in."""
    cfg: GrowthConfig = {
        "start": start,
        "times": times,
        "step": step,
        "backoff": backoff,
    }
    if should_retry is not None:
        cfg["should_retry"] = should_retry
    return cfg


def safe(thunk: Callable[[], A]) -> Result[A, TaggedError]:
    """Runs a unit of work and captures its failure as an ``Err``.

    Domain errors come back as themselves; anything else is wrapped in
    ``UnhandledException``. ``Panic`` is never captured.

    Args:
        thunk: Function to execute.

    Returns:
        Result containing value or error.

    Raises:
        Panic: If the work panics.

    Example:
        >>> safe(lambda: normal_form(rs, parse("b a")))
        Ok((0, 2))
        >>> safe(lambda: preset("Z9")).is_err()
        True
    """
    try:
        return Ok(thunk())
    except Panic:
        raise
    except TaggedError as e:
        return Err(e)
    except Exception as e:
        return Err(UnhandledException(e))


def _is_ball_error(error: TaggedError) -> bool:
    return isinstance(error, (BallTooSmall, RadiusExceeded))


def next_radius(start: int, attempt: int, step: int, backoff: Backoff) -> int:
    """Radius used for retry number ``attempt`` (0-based)."""
    if backoff == "constant":
        return start + step * (attempt + 1)
    if backoff == "linear":
        return start + step * (attempt + 1) * (attempt + 2) // 2
    return start + step * (2 ** (attempt + 1) - 1)


def grow[T](build: Callable[[int], T], config: GrowthConfig) -> Result[T, TaggedError]:
    """Runs ``build(radius)`` on ever larger balls until it stops failing.

    Mirrors a retry loop: the first attempt uses ``start``; after a failure
    accepted by ``should_retry`` the radius grows according to ``step`` and
    ``backoff``, for at most ``times`` retries.

    Args:
        build: Builder parametrised by ball radius.
        config: Radius schedule.

    Returns:
        The first successful result, or the last error.

    Raises:
        Panic: If ``should_retry`` throws.

    Example:
        >>> grow(lambda r: seashell_on_ball(w, r), growth_config(start=2, times=3))
    """
    start = config.get("start", 0)
    times = config.get("times", 0)
    step = config.get("step", 1)
    backoff: Backoff = config.get("backoff", "constant")
    should_retry: ShouldGrowCallable = config.get("should_retry", _is_ball_error)

    radius = start
    result = safe(lambda: build(radius))
    for attempt in range(times):
        if result.is_ok():
            break
        error = result.unwrap_err()
        should_continue = try_or_panic(
            lambda: should_retry(error), "should_retry predicate threw"
        )
        if not should_continue:
            break
        radius = next_radius(start, attempt, step, backoff)
        logger.info("retrying at radius %d after %s", radius, error.tag)
        result = safe(lambda: build(radius))
    return cast(Result[T, TaggedError], result)
