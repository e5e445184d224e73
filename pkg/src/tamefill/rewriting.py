"""Finite rewriting systems over an alphabet.

Rules are applied with a fixed strategy (leftmost occurrence, longest left
side, then rule order), so normal forms and traces are deterministic even
for systems whose completeness has only been checked, not proved.
"""

import logging
from collections import OrderedDict, deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Callable, Iterable, Iterator, NamedTuple

from .error import BudgetExceeded, ParseError
from .words import Alphabet, Presentation, Word, formal_inverse, free_reduce, symmetrize

logger = logging.getLogger(__name__)

DEFAULT_STEP_BUDGET = 10_000
DEFAULT_NODE_BUDGET = 200_000

# Normal forms memoized per system; least recently used words are evicted first.
NORMAL_FORM_CACHE_SIZE = 65_536


@dataclass(frozen=True)
class Rule:
    lhs: Word
    rhs: Word

    def __post_init__(self) -> None:
        if not self.lhs:
            raise ParseError("rule left side must be nonempty")
        if self.lhs == self.rhs:
            raise ParseError("rule left and right sides must differ")

    @property
    def length(self) -> int:
        return max(len(self.lhs), len(self.rhs))


@dataclass(frozen=True)
class RewritingSystem:
    """An ordered list of rules plus the step budget guarding normalization."""

    alphabet: Alphabet
    rules: tuple[Rule, ...]
    step_budget: int = DEFAULT_STEP_BUDGET
    _cache: OrderedDict[Word, Word] = field(
        default_factory=OrderedDict[Word, Word], init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self) -> None:
        if len(set(self.rules)) != len(self.rules):
            raise ParseError("rules must be pairwise distinct")

    @property
    def cached_normal_forms(self) -> int:
        return len(self._cache)

    @classmethod
    def from_rules(
        cls,
        alphabet: Alphabet,
        rules: Iterable[tuple[str, str]],
        step_budget: int = DEFAULT_STEP_BUDGET,
    ) -> "RewritingSystem":
        """Builds a system from ``(lhs, rhs)`` strings in alphabet notation.

        Example:
            >>> RewritingSystem.from_rules(Alphabet.standard(2), [("b a", "a b")])
        """
        return cls(
            alphabet,
            tuple(Rule(alphabet.parse(lhs), alphabet.parse(rhs)) for lhs, rhs in rules),
            step_budget,
        )

    @cached_property
    def _by_first(self) -> dict[int, tuple[int, ...]]:
        # Rule indices keyed by first letter, longest lhs first, then list order.
        table: dict[int, list[int]] = {}
        for index, rule in enumerate(self.rules):
            table.setdefault(rule.lhs[0], []).append(index)
        return {
            letter: tuple(sorted(indices, key=lambda i: (-len(self.rules[i].lhs), i)))
            for letter, indices in table.items()
        }

    @cached_property
    def _by_last(self) -> dict[int, tuple[int, ...]]:
        table: dict[int, list[int]] = {}
        for index, rule in enumerate(self.rules):
            table.setdefault(rule.lhs[-1], []).append(index)
        return {
            letter: tuple(sorted(indices, key=lambda i: (-len(self.rules[i].lhs), i)))
            for letter, indices in table.items()
        }

    def oracle(self) -> Callable[[Word], Word]:
        """The normal-form function, usable as a word-problem oracle."""
        return lambda w: normal_form(self, w)

    def matches_at(self, w: Word, start: int) -> Iterator[int]:
        """Indices of rules whose lhs occurs in ``w`` at ``start``, in tie order."""
        for index in self._by_first.get(w[start], ()):
            lhs = self.rules[index].lhs
            if w[start : start + len(lhs)] == lhs:
                yield index

    def matches_ending_at(self, w: Word, end: int) -> Iterator[int]:
        """Indices of rules whose lhs occurs in ``w`` ending at ``end``."""
        for index in self._by_last.get(w[end - 1], ()):
            lhs = self.rules[index].lhs
            if len(lhs) <= end and w[end - len(lhs) : end] == lhs:
                yield index


class MinimalityViolation(NamedTuple):
    rule: Rule
    factor: Word
    reason: str


class CriticalPair(NamedTuple):
    """An overlap word whose two one-step resolutions normalize differently."""

    overlap: Word
    left: Word
    right: Word


def is_irreducible(rs: RewritingSystem, w: Word) -> bool:
    return all(next(rs.matches_at(w, i), None) is None for i in range(len(w)))


def _apply(rs: RewritingSystem, w: Word, start: int, index: int) -> Word:
    rule = rs.rules[index]
    return w[:start] + rule.rhs + w[start + len(rule.lhs) :]


def rewrite_once(rs: RewritingSystem, w: Word) -> Word | None:
    """Applies the leftmost-starting occurrence, or returns None if irreducible.

    Example:
        >>> rewrite_once(z2, z2.alphabet.parse("b a a"))  # -> a b a
    """
    for start in range(len(w)):
        index = next(rs.matches_at(w, start), None)
        if index is not None:
            return _apply(rs, w, start, index)
    return None


def _prefix_step(rs: RewritingSystem, w: Word) -> Word | None:
    for end in range(1, len(w) + 1):
        index = next(rs.matches_ending_at(w, end), None)
        if index is not None:
            return _apply(rs, w, end - len(rs.rules[index].lhs), index)
    return None


def _run(
    rs: RewritingSystem, w: Word, step: Callable[[RewritingSystem, Word], Word | None]
) -> list[Word]:
    trace = [w]
    current = w
    for _ in range(rs.step_budget):
        following = step(rs, current)
        if following is None:
            return trace
        trace.append(following)
        current = following
    raise BudgetExceeded(
        f"no irreducible word reached from {rs.alphabet.render(w)!r}", rs.step_budget
    )


def normal_form_trace(rs: RewritingSystem, w: Word) -> list[Word]:
    """The recorded rewriting sequence from ``w`` to its normal form.

    Raises:
        BudgetExceeded: If ``rs.step_budget`` steps do not reach an
            irreducible word.
    """
    return _run(rs, w, rewrite_once)


def normal_form(rs: RewritingSystem, w: Word) -> Word:
    """Irreducible word reached from ``w`` by the fixed strategy.

    Raises:
        BudgetExceeded: If ``rs.step_budget`` steps do not suffice.

    Example:
        >>> z2.alphabet.render(normal_form(z2, z2.alphabet.parse("b a a")))
        'a a b'
    """
    cached = rs._cache.get(w)
    if cached is not None:
        rs._cache.move_to_end(w)
        return cached
    result = _run(rs, w, rewrite_once)[-1]
    rs._cache[w] = result
    if len(rs._cache) > NORMAL_FORM_CACHE_SIZE:
        rs._cache.popitem(last=False)
    return result


def prefix_rewrite_sequence(rs: RewritingSystem, w: Word) -> list[Word]:
    """Rewriting sequence that always rewrites inside the shortest reducible prefix.

    Raises:
        BudgetExceeded: If ``rs.step_budget`` steps do not suffice.
    """
    return _run(rs, w, _prefix_step)


def check_minimal(rs: RewritingSystem) -> list[MinimalityViolation]:
    """Rules whose rhs is reducible or whose lhs has a reducible proper factor."""
    violations: list[MinimalityViolation] = []
    for rule in rs.rules:
        if not is_irreducible(rs, rule.rhs):
            violations.append(MinimalityViolation(rule, rule.rhs, "right side reducible"))
        lhs = rule.lhs
        for length in range(len(lhs) - 1, 0, -1):
            bad = next(
                (
                    lhs[i : i + length]
                    for i in range(len(lhs) - length + 1)
                    if not is_irreducible(rs, lhs[i : i + length])
                ),
                None,
            )
            if bad is not None:
                violations.append(
                    MinimalityViolation(rule, bad, "proper factor of left side reducible")
                )
                break
    return violations


def critical_pairs(rs: RewritingSystem) -> list[CriticalPair]:
    """Unresolved critical pairs from all overlaps and containments of left sides.

    Raises:
        BudgetExceeded: If normalizing a resolution exceeds the step budget.
    """
    unresolved: list[CriticalPair] = []
    seen: set[tuple[Word, Word, Word]] = set()

    def resolve(overlap: Word, left: Word, right: Word) -> None:
        left_nf, right_nf = normal_form(rs, left), normal_form(rs, right)
        key = (overlap, left_nf, right_nf)
        if left_nf != right_nf and key not in seen:
            seen.add(key)
            unresolved.append(CriticalPair(overlap, left_nf, right_nf))

    for first in rs.rules:
        for second in rs.rules:
            u1, u2 = first.lhs, second.lhs
            # proper suffix of u1 equal to a proper prefix of u2
            for k in range(1, min(len(u1), len(u2))):
                if u1[-k:] == u2[:k]:
                    overlap = u1 + u2[k:]
                    resolve(overlap, first.rhs + u2[k:], u1[:-k] + second.rhs)
            if first is not second and len(u2) <= len(u1):
                for i in range(len(u1) - len(u2) + 1):
                    if u1[i : i + len(u2)] == u2:
                        resolve(u1, first.rhs, u1[:i] + second.rhs + u1[i + len(u2) :])
    return unresolved


def successors(rs: RewritingSystem, w: Word) -> set[Word]:
    """Every word obtained from ``w`` by one rule application anywhere."""
    return {
        _apply(rs, w, start, index)
        for start in range(len(w))
        for index in rs.matches_at(w, start)
    }


def prefix_successors(rs: RewritingSystem, w: Word) -> set[Word]:
    """One-step rewrites at occurrences ending at the shortest reducible prefix."""
    for end in range(1, len(w) + 1):
        found = {
            _apply(rs, w, end - len(rs.rules[index].lhs), index)
            for index in rs.matches_ending_at(w, end)
        }
        if found:
            return found
    return set()


def _all_words(alphabet: Alphabet, length: int) -> Iterator[Word]:
    return product(range(len(alphabet)), repeat=length)


def _growth_table(
    rs: RewritingSystem,
    n: int,
    step: Callable[[RewritingSystem, Word], set[Word]],
    node_budget: int,
) -> list[int]:
    visited: set[Word] = set()
    longest = 0
    table: list[int] = []
    for length in range(n + 1):
        for start in _all_words(rs.alphabet, length):
            if start in visited:
                continue
            visited.add(start)
            queue = deque([start])
            while queue:
                word = queue.popleft()
                longest = max(longest, len(word))
                for following in step(rs, word):
                    if following not in visited:
                        visited.add(following)
                        queue.append(following)
                if len(visited) > node_budget:
                    raise BudgetExceeded("rewriting reachability too large", node_budget)
        table.append(longest)
    return table


def gamma_table(
    rs: RewritingSystem,
    n: int,
    *,
    prefix: bool = False,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> list[int]:
    """``[γ(0), ..., γ(n)]`` (or the prefix-rewriting variant) in one search.

    Start words are processed by increasing length against one visited set;
    anything already visited was counted for a shorter start.

    Raises:
        BudgetExceeded: If more than ``node_budget`` words are visited.
    """
    return _growth_table(rs, n, prefix_successors if prefix else successors, node_budget)


def gamma(rs: RewritingSystem, n: int, *, node_budget: int = DEFAULT_NODE_BUDGET) -> int:
    """String growth complexity: longest word reachable from a word of length ≤ n.

    Raises:
        BudgetExceeded: If more than ``node_budget`` words are visited.
    """
    return gamma_table(rs, n, node_budget=node_budget)[-1]


def gamma_prefix(
    rs: RewritingSystem, n: int, *, node_budget: int = DEFAULT_NODE_BUDGET
) -> int:
    """As ``gamma`` but following prefix rewriting sequences only."""
    return gamma_table(rs, n, prefix=True, node_budget=node_budget)[-1]


def check_unique_normal_forms(
    rs: RewritingSystem, max_len: int, *, node_budget: int = DEFAULT_NODE_BUDGET
) -> list[Word]:
    """Words of length ≤ max_len with more than one irreducible descendant.

    Every maximal rewriting sequence is followed (all rules, all positions);
    an empty result together with termination means normal forms are unique.

    Raises:
        BudgetExceeded: If more than ``node_budget`` words are explored.
    """
    sinks: dict[Word, frozenset[Word]] = {}

    def irreducible_descendants(start: Word) -> frozenset[Word]:
        # post-order over the rewriting digraph, which is acyclic when rs terminates
        stack = [start]
        while stack:
            word = stack[-1]
            if word in sinks:
                stack.pop()
                continue
            following = successors(rs, word)
            missing = [f for f in following if f not in sinks]
            if missing:
                stack.extend(missing)
                if len(sinks) + len(stack) > node_budget:
                    raise BudgetExceeded("normal-form uniqueness search too large", node_budget)
                continue
            stack.pop()
            sinks[word] = (
                frozenset[Word]().union(*(sinks[f] for f in following))
                if following
                else frozenset({word})
            )
        return sinks[start]

    ambiguous: list[Word] = []
    for length in range(max_len + 1):
        for w in _all_words(rs.alphabet, length):
            if len(irreducible_descendants(w)) > 1:
                ambiguous.append(w)
    return ambiguous


def longest_rule(rs: RewritingSystem) -> int:
    return max((rule.length for rule in rs.rules), default=0)


def rewriting_presentation(rs: RewritingSystem) -> Presentation:
    """Presentation with a relator ``lhs·rhs⁻¹`` for every non-cancellation rule."""
    relators: list[Word] = []
    for rule in rs.rules:
        relator = rule.lhs + formal_inverse(rule.rhs, rs.alphabet)
        if free_reduce(relator, rs.alphabet):
            relators.append(relator)
    return symmetrize(Presentation(rs.alphabet, tuple(relators)))
