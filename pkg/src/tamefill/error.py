from abc import ABC
from typing import ClassVar, NoReturn, Optional

_NOT_SET = object()


class TaggedError(ABC, Exception):
    """Base class for tamefill errors, tagged for reporting.

    Every subclass declares a ``TAG`` and the CLI exit code it maps to.
    The cause may be another exception (chained through ``__cause__``) or
    any plain object, such as a witness pair or an offending word.

    Example:
        >>> class Stuck(TaggedError):
        ...     TAG = "Stuck"
        >>> raise Stuck("no rule applies", cause=(0, 1))
    """

    __slots__ = ("_message", "_non_exception_cause")

    _message: str
    _non_exception_cause: Optional[object]

    TAG: ClassVar[str]
    exit_code: ClassVar[int] = 1

    @property
    def tag(self) -> str:
        return self.TAG

    @property
    def message(self) -> str:
        return self._message

    def __init_subclass__(cls) -> None:
        if "TAG" not in cls.__dict__:
            panic(f"Subclass {cls.__name__} must define TAG class attribute")

    def __init__(self, message: str, cause: Optional[object] = None) -> None:
        """Initialize tagged error with message and optional cause.

        Args:
            message: Error message.
            cause: Optional cause (exception or any object).
        """
        super().__init__(message)
        self._message = message

        if isinstance(cause, BaseException):
            self._non_exception_cause = _NOT_SET
            self.__cause__ = cause
        else:
            self._non_exception_cause = cause
            self.__cause__ = None

    @property
    def cause(self) -> Optional[object]:
        """The cause given at construction, exception or not."""
        if self._non_exception_cause is not _NOT_SET:
            return self._non_exception_cause
        return self.__cause__

    def __str__(self) -> str:
        return self._message

    def report(self) -> dict[str, object]:
        """Machine-readable failure record used by the CLI."""
        return {
            "status": "err",
            "tag": self.TAG,
            "message": self._message,
            "exit_code": self.exit_code,
        }

    @staticmethod
    def is_tagged_error(value: object) -> bool:
        return isinstance(value, TaggedError)


class UnhandledException(TaggedError):
    """Wraps an exception that escaped into a ``safe`` boundary."""

    TAG = "UnhandledException"

    def __init__(self, cause: object) -> None:
        super().__init__(f"Unhandled exception: {cause}", cause)


class Panic(TaggedError):
    """An internal invariant was broken. Never caught by library code."""

    TAG = "Panic"
    exit_code = 70


def is_panic(value: object) -> bool:
    return isinstance(value, Panic)


def panic(message: str, cause: Optional[object] = None) -> NoReturn:
    """Raises a Panic exception.

    Raises:
        Panic: Always raises.
    """
    raise Panic(message, cause)


# Input errors (exit code 2)


class ParseError(TaggedError):
    """A presentation file or word could not be parsed."""

    __slots__ = ("line",)

    TAG = "ParseError"
    exit_code = 2

    def __init__(self, message: str, line: int = 0) -> None:
        self.line = line
        prefix = f"line {line}: " if line else ""
        super().__init__(prefix + message)


class UnknownPreset(TaggedError):
    __slots__ = ("name",)

    TAG = "UnknownPreset"
    exit_code = 2

    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"Unknown preset: {name}")


class WrongAlphabet(TaggedError):
    __slots__ = ("expected",)

    TAG = "WrongAlphabet"
    exit_code = 2

    def __init__(self, expected: tuple[str, ...], got: tuple[str, ...]) -> None:
        self.expected = expected
        super().__init__(
            f"Expected alphabet {' '.join(expected)}, got {' '.join(got)}"
        )


class ConfigError(TaggedError):
    TAG = "ConfigError"
    exit_code = 2


# Budget errors (exit code 3)


class BudgetExceeded(TaggedError):
    __slots__ = ("budget",)

    TAG = "BudgetExceeded"
    exit_code = 3

    def __init__(self, message: str, budget: int) -> None:
        self.budget = budget
        super().__init__(f"{message} (budget {budget})")


class OracleFailure(TaggedError):
    TAG = "OracleFailure"
    exit_code = 3


# Check failures (exit code 1)


class InconsistentOracle(TaggedError):
    TAG = "InconsistentOracle"


class RadiusExceeded(TaggedError):
    __slots__ = ("radius", "requested")

    TAG = "RadiusExceeded"

    def __init__(self, radius: int, requested: int) -> None:
        self.radius = radius
        self.requested = requested
        super().__init__(f"Radius {requested} requested from a ball of radius {radius}")


class BallTooSmall(TaggedError):
    __slots__ = ("radius",)

    TAG = "BallTooSmall"

    def __init__(self, message: str, radius: int) -> None:
        self.radius = radius
        super().__init__(f"{message} (ball radius {radius})")


class DanglingEdge(TaggedError):
    TAG = "DanglingEdge"


class NoApplicableRule(TaggedError):
    TAG = "NoApplicableRule"


class NotAlmostConvex(TaggedError):
    __slots__ = ("pair",)

    TAG = "NotAlmostConvex"

    def __init__(self, message: str, pair: tuple[int, int]) -> None:
        self.pair = pair
        super().__init__(message, pair)


class CycleDetected(TaggedError):
    TAG = "CycleDetected"


class NotIdentity(TaggedError):
    TAG = "NotIdentity"


class NonSimpleNormalForm(TaggedError):
    TAG = "NonSimpleNormalForm"


class CatalogIncomplete(TaggedError):
    TAG = "CatalogIncomplete"


class FellowTravelerViolation(TaggedError):
    TAG = "FellowTravelerViolation"


class MissingDiagram(TaggedError):
    TAG = "MissingDiagram"


class RangeExceeded(TaggedError):
    TAG = "RangeExceeded"
