from abc import ABC, abstractmethod
from typing import (
    Callable,
    Generic,
    Iterable,
    Literal,
    Never,
    NoReturn,
    Optional,
    TypedDict,
    TypeVar,
    cast,
)

from .error import Panic, TaggedError, panic


"""
Type variable for method parameters
"""
T = TypeVar("T")

"""
Type variable for the success value
"""
A = TypeVar("A", covariant=True)

"""
Type variable for a transformed success value
"""
B = TypeVar("B")

"""
Type variable for the error value
"""
E = TypeVar("E", covariant=True)

"""
Type variable for a transformed error value
"""
F = TypeVar("F")


class Matcher(TypedDict, Generic[A, B, E, F]):
    """Handlers for both Result variants."""

    ok: Callable[[A], B]
    err: Callable[[E], F]


class Result(Generic[A, E], ABC):
    """Outcome of one unit of work inside a batch: ``Ok`` or ``Err``.

    Library operations raise; batch drivers (tameness suites, the
    acceptance harness, the CLI) wrap each unit with ``safe`` and work with
    Results so one failing word does not abort the whole run.

    Example:
        >>> Result.ok((0, 1)).map(len)
        Ok(2)
    """

    __slots__ = ()

    @property
    @abstractmethod
    def status(self) -> Literal["ok", "err"]: ...

    @staticmethod
    def ok(value: T) -> "Ok[T, Never]":
        return Ok(value)

    @staticmethod
    def err(value: T) -> "Err[Never, T]":
        return Err(value)

    def is_ok(self) -> bool:
        return self.status == "ok"

    def is_err(self) -> bool:
        return self.status == "err"

    @abstractmethod
    def map(self, fn: Callable[[A], B]) -> "Result[B, E]": ...

    @abstractmethod
    def unwrap(self, message: Optional[str] = None) -> A: ...

    @abstractmethod
    def unwrap_err(self, message: Optional[str] = None) -> E: ...

    @abstractmethod
    def and_then(self, fn: Callable[[A], "Result[B, F]"]) -> "Result[B, E | F]": ...

    @abstractmethod
    def match(self, cases: Matcher[A, B, E, F]) -> B | F: ...

    @abstractmethod
    def serialize(self) -> dict[str, object]: ...

    @staticmethod
    def partition[PA, PE](
        results: Iterable["Result[PA, PE]"],
    ) -> tuple[list[PA], list[PE]]:
        """Splits Results into the list of ok values and the list of errors.

        Example:
            >>> built, failed = Result.partition(safe(lambda: seashell(w, s)) for w in words)
        """
        oks: list[PA] = []
        errs: list[PE] = []
        for result in results:
            if result.is_ok():
                oks.append(result.unwrap())
            else:
                errs.append(result.unwrap_err())
        return (oks, errs)


class Ok(Result[A, E]):
    """Successful result variant."""

    __slots__ = ("value",)
    __match_args__ = ("value",)

    def __init__(self, value: A) -> None:
        self.value: A = value

    @property
    def status(self) -> Literal["ok"]:
        return "ok"

    def map(self, fn: Callable[[A], B]) -> "Ok[B, E]":
        """Transforms the value.

        Raises:
            Panic: If fn throws.
        """
        return try_or_panic(lambda: Ok(fn(self.value)), "Ok.map failed")

    def unwrap(self, message: Optional[str] = None) -> A:
        return self.value

    def unwrap_err(self, message: Optional[str] = None) -> NoReturn:
        panic(message or f"unwrap_err called on Ok: {self.value!r}")

    def and_then(self, fn: Callable[[A], Result[B, F]]) -> Result[B, E | F]:
        return try_or_panic(lambda: fn(self.value), "Ok.and_then failed")

    def match(self, cases: Matcher[A, B, E, F]) -> B | F:
        return try_or_panic(lambda: cases["ok"](self.value), "Ok.match failed")

    def serialize(self) -> dict[str, object]:
        return {"status": "ok", "value": self.value}

    def __repr__(self) -> str:
        return f"Ok({self.value!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Ok) and self.value == cast(Ok[object, object], other).value

    def __hash__(self) -> int:
        return hash(("ok", self.value))


class Err(Result[A, E]):
    """Failed result variant."""

    __slots__ = ("value",)
    __match_args__ = ("value",)

    def __init__(self, value: E) -> None:
        self.value: E = value

    @property
    def status(self) -> Literal["err"]:
        return "err"

    def map(self, fn: Callable[[A], B]) -> "Err[B, E]":
        return cast("Err[B, E]", self)

    def unwrap(self, message: Optional[str] = None) -> NoReturn:
        """Panics: the caller assumed success.

        Raises:
            Panic: Always, with the error as cause.
        """
        panic(message or f"unwrap called on Err: {self.value!r}", self.value)

    def unwrap_err(self, message: Optional[str] = None) -> E:
        return self.value

    def and_then(self, fn: Callable[[A], Result[B, F]]) -> "Err[B, E]":
        return cast("Err[B, E]", self)

    def match(self, cases: Matcher[A, B, E, F]) -> B | F:
        return try_or_panic(lambda: cases["err"](self.value), "Err.match failed")

    def serialize(self) -> dict[str, object]:
        if isinstance(self.value, TaggedError):
            return self.value.report()
        return {"status": "err", "value": self.value}

    def __repr__(self) -> str:
        return f"Err({self.value!r})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Err)
            and self.value == cast(Err[object, object], other).value
        )

    def __hash__(self) -> int:
        return hash(("err", self.value))


def try_or_panic(fn: Callable[[], T], message: str) -> T:
    """Executes fn, panics if it throws.

    Raises:
        Panic: If fn throws.
    """
    try:
        return fn()
    except Panic:
        raise
    except Exception as e:
        panic(message, e)
