"""Letters, words, free reduction and symmetric presentations.

Letters are small integers indexing an :class:`Alphabet`; a word is a plain
tuple of letters. The alphabet carries the involution ``a -> a^-1`` and the
display names, so every operation that needs inverses takes it explicitly.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, TypeAlias

from .error import ParseError

logger = logging.getLogger(__name__)

Word: TypeAlias = tuple[int, ...]

EMPTY: Word = ()

# Accepted spellings of the empty word on input.
_EMPTY_TOKENS = frozenset({"", "1", "e", "ε"})


@dataclass(frozen=True)
class Alphabet:
    """Ordered generator names with an inversion table.

    The declaration order is the order used by shortlex comparisons.
    A letter is its own inverse only when declared that way.
    """

    names: tuple[str, ...]
    inverses: tuple[int, ...]
    _index: dict[str, int] = field(
        init=False, repr=False, compare=False, hash=False, default_factory=dict
    )

    def __post_init__(self) -> None:
        if len(self.names) != len(self.inverses):
            raise ParseError("every generator needs an inverse")
        if len(set(self.names)) != len(self.names):
            raise ParseError(f"duplicate generator names in {' '.join(self.names)}")
        for letter, inv in enumerate(self.inverses):
            if not 0 <= inv < len(self.names) or self.inverses[inv] != letter:
                raise ParseError(
                    f"inverse table is not an involution at {self.names[letter]}"
                )
        self._index.update({name: i for i, name in enumerate(self.names)})

    @classmethod
    def pairs(cls, names: Iterable[str], pairs: Iterable[tuple[str, str]]) -> "Alphabet":
        """Builds an alphabet from names and declared inverse pairs.

        A pair ``(x, x)`` declares an order-2 generator. Every name must
        appear in exactly one pair.

        Raises:
            ParseError: On unknown, unpaired or doubly paired names.

        Example:
            >>> Alphabet.pairs(["a", "A", "b", "B"], [("a", "A"), ("b", "B")])
        """
        ordered = tuple(names)
        index = {name: i for i, name in enumerate(ordered)}
        inverses = [-1] * len(ordered)
        for left, right in pairs:
            if left not in index or right not in index:
                raise ParseError(f"inverse pair {left} {right} names an unknown generator")
            i, j = index[left], index[right]
            if inverses[i] != -1 or inverses[j] != -1:
                raise ParseError(f"generator paired twice in {left} {right}")
            inverses[i], inverses[j] = j, i
        unpaired = [ordered[i] for i, inv in enumerate(inverses) if inv == -1]
        if unpaired:
            raise ParseError(f"generators without inverse: {' '.join(unpaired)}")
        return cls(ordered, tuple(inverses))

    @classmethod
    def standard(cls, rank: int) -> "Alphabet":
        """``a A b B ...`` with lowercase/uppercase inverse pairs."""
        lowers = [chr(ord("a") + i) for i in range(rank)]
        names = [name for low in lowers for name in (low, low.upper())]
        return cls.pairs(names, [(low, low.upper()) for low in lowers])

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[int]:
        return iter(range(len(self.names)))

    def inverse(self, letter: int) -> int:
        return self.inverses[letter]

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ParseError(f"unknown letter {name!r}") from None

    def parse(self, text: str) -> Word:
        """Parses a whitespace-separated word.

        When every name is a single character, unseparated tokens such as
        ``baBA`` are split into characters.
        A lone ``e``, ``1`` or ``ε`` is the empty word unless it names a
        generator.

        Raises:
            ParseError: On an unknown letter.
        """
        tokens = text.split()
        if not tokens:
            return EMPTY
        if len(tokens) == 1 and tokens[0] in _EMPTY_TOKENS and tokens[0] not in self._index:
            return EMPTY
        single = all(len(name) == 1 for name in self.names)
        letters: list[int] = []
        for token in tokens:
            if token in self._index:
                letters.append(self._index[token])
            elif single:
                letters.extend(self.index(ch) for ch in token)
            else:
                letters.append(self.index(token))
        return tuple(letters)

    def render(self, word: Word) -> str:
        return " ".join(self.names[letter] for letter in word)


def free_reduce(w: Word, alphabet: Alphabet) -> Word:
    """Cancels adjacent inverse pairs until none remain.

    Example:
        >>> free_reduce(ab.parse("a b B a"), ab)
        (0, 0)
    """
    stack: list[int] = []
    for letter in w:
        if stack and stack[-1] == alphabet.inverses[letter]:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def is_freely_reduced(w: Word, alphabet: Alphabet) -> bool:
    return all(alphabet.inverses[x] != y for x, y in zip(w, w[1:]))


def formal_inverse(w: Word, alphabet: Alphabet) -> Word:
    return tuple(alphabet.inverses[letter] for letter in reversed(w))


def shortlex_key(w: Word) -> tuple[int, Word]:
    """Sort key: shorter first, then lexicographic in alphabet order."""
    return (len(w), w)


def cyclic_conjugates(w: Word) -> list[Word]:
    return [w[i:] + w[:i] for i in range(len(w))] if w else []


@dataclass(frozen=True)
class Presentation:
    """A finite presentation: alphabet plus nonempty relator words."""

    alphabet: Alphabet
    relators: tuple[Word, ...] = ()

    def __post_init__(self) -> None:
        if any(not r for r in self.relators):
            raise ParseError("relators must be nonempty")

    @cached_property
    def relator_set(self) -> frozenset[Word]:
        return frozenset(self.relators)

    @cached_property
    def longest_relator(self) -> int:
        return max((len(r) for r in self.relators), default=0)

    def __contains__(self, word: object) -> bool:
        return word in self.relator_set


def symmetrize(p: Presentation) -> Presentation:
    """Closes the relators under inversion, cyclic conjugation and free reduction.

    Relators that freely reduce to the empty word are kept (they are legal
    relators) and reported through the log. The result is sorted shortlex,
    so symmetrizing twice changes nothing.

    Example:
        >>> len(symmetrize(Presentation(ab, (ab.parse("a b A B"),))).relators)
        8
    """
    alphabet = p.alphabet
    trivial = [r for r in p.relators if not free_reduce(r, alphabet)]
    if trivial:
        logger.warning(
            "%d relators freely reduce to the empty word, first %r",
            len(trivial),
            alphabet.render(trivial[0]),
        )
    seen: set[Word] = set()
    pending = list(p.relators)
    while pending:
        relator = pending.pop()
        if relator in seen:
            continue
        seen.add(relator)
        reduced = free_reduce(relator, alphabet)
        candidates = cyclic_conjugates(relator) + [formal_inverse(relator, alphabet)]
        if reduced:
            candidates.append(reduced)
        pending.extend(c for c in candidates if c not in seen)
    return Presentation(alphabet, tuple(sorted(seen, key=shortlex_key)))
