"""Balls in Cayley graphs, enumerated through a word-problem oracle.

Vertices are keyed by oracle normal form. Edges from the outer sphere whose
far end lies outside the ball are kept as dangling (``None`` targets).
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterator, NamedTuple

import networkx as nx

from .error import (
    BallTooSmall,
    BudgetExceeded,
    InconsistentOracle,
    OracleFailure,
    RadiusExceeded,
    panic,
)
from .words import EMPTY, Alphabet, Word, formal_inverse, shortlex_key

logger = logging.getLogger(__name__)

Oracle = Callable[[Word], Word]


class GroupElement(NamedTuple):
    nf: Word
    dist: int


class Edge(NamedTuple):
    source: int
    letter: int
    target: int


@dataclass(frozen=True, eq=False)
class CayleyBall:
    """The radius-``n`` ball B(n) with its normal-form spanning tree.

    Attributes:
        radius: Enumeration radius.
        alphabet: Generators with their inversion table.
        oracle: Normal-form function the ball was built with.
        elements: Vertices in breadth-first discovery order; index 0 is ε.
        targets: ``targets[v][a]`` is the vertex reached from ``v`` by
            letter ``a``, or None when it lies outside the ball.
        parent: Tree parent of each vertex (-1 for ε).
        parent_letter: Letter on the tree edge into each vertex (-1 for ε).
        prefix_closed: Whether the tree is the normal-form tree. When False
            the tree is the breadth-first shortlex-first spanning tree.
    """

    radius: int
    alphabet: Alphabet
    oracle: Oracle = field(repr=False)
    elements: tuple[GroupElement, ...]
    targets: tuple[tuple[int | None, ...], ...] = field(repr=False)
    parent: tuple[int, ...] = field(repr=False)
    parent_letter: tuple[int, ...] = field(repr=False)
    prefix_closed: bool
    _graphs: dict[int | None, "nx.Graph[int]"] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    @cached_property
    def index(self) -> dict[Word, int]:
        return {element.nf: v for v, element in enumerate(self.elements)}

    @cached_property
    def tree_words(self) -> tuple[Word, ...]:
        words: list[Word | None] = [None] * len(self.elements)
        words[0] = EMPTY
        for v in range(len(self.elements)):
            chain: list[int] = []
            u = v
            while words[u] is None:
                if len(chain) == len(self.elements):
                    panic(f"tree parents of vertex {v} form a cycle")
                chain.append(u)
                u = self.parent[u]
            for u in reversed(chain):
                prefix = words[self.parent[u]]
                assert prefix is not None
                words[u] = prefix + (self.parent_letter[u],)
        return tuple(w for w in words if w is not None)

    @property
    def boundary_complete(self) -> bool:
        """True iff no edge leaves the ball, i.e. the whole group is enumerated."""
        return all(t is not None for row in self.targets for t in row)

    def __len__(self) -> int:
        return len(self.elements)

    def nf(self, v: int) -> Word:
        return self.elements[v].nf

    def dist(self, v: int) -> int:
        return self.elements[v].dist

    def word(self, v: int) -> Word:
        """Label of the tree path from ε to ``v``."""
        return self.tree_words[v]

    def step(self, v: int, letter: int) -> int | None:
        return self.targets[v][letter]

    def walk(self, v: int, w: Word) -> list[int]:
        """Vertices visited reading ``w`` from ``v``, starting with ``v``.

        Raises:
            BallTooSmall: If the path leaves the ball.
        """
        path = [v]
        for letter in w:
            t = self.targets[path[-1]][letter]
            if t is None:
                raise BallTooSmall(
                    f"path {self.alphabet.render(w)!r} leaves the ball", self.radius
                )
            path.append(t)
        return path

    def element(self, w: Word) -> int:
        """Vertex represented by ``w``, found through the oracle.

        Raises:
            BallTooSmall: If the element lies outside the ball.
        """
        v = self.index.get(self.oracle(w))
        if v is None:
            raise BallTooSmall(f"{self.alphabet.render(w)!r} lies outside the ball", self.radius)
        return v

    def distance_between(self, u: int, v: int) -> int:
        """Group distance d(u, v) = |u⁻¹v|, looked up in the ball.

        Raises:
            BallTooSmall: If |u⁻¹v| exceeds the radius.
        """
        return self.dist(self.element(formal_inverse(self.nf(u), self.alphabet) + self.nf(v)))

    def is_degenerate(self, v: int, letter: int) -> bool:
        """Whether the undirected edge at ``v`` labelled ``letter`` lies in the tree."""
        t = self.targets[v][letter]
        if self.prefix_closed:
            y_v = self.nf(v)
            if t is None:
                return self.oracle(y_v + (letter,)) == y_v + (letter,)
            y_t = self.nf(t)
            return y_t == y_v + (letter,) or y_v == y_t + (self.alphabet.inverse(letter),)
        if t is None:
            return False
        return (self.parent[t] == v and self.parent_letter[t] == letter) or (
            self.parent[v] == t and self.parent_letter[v] == self.alphabet.inverse(letter)
        )

    def canonical_edge(self, v: int, letter: int) -> tuple[int, int]:
        """The orientation ``(source, letter)`` starting at the shortlex-least endpoint.

        Raises:
            BallTooSmall: If the edge is dangling.
        """
        t = self.targets[v][letter]
        if t is None:
            raise BallTooSmall("dangling edge has no stored orientation", self.radius)
        inverse = self.alphabet.inverse(letter)
        if t == v:
            return (v, min(letter, inverse))
        if shortlex_key(self.nf(v)) <= shortlex_key(self.nf(t)):
            return (v, letter)
        return (t, inverse)

    def edges(self) -> Iterator[Edge]:
        """Directed edges with both endpoints in the ball."""
        for v, row in enumerate(self.targets):
            for letter, t in enumerate(row):
                if t is not None:
                    yield Edge(v, letter, t)

    def dangling(self) -> Iterator[tuple[int, int]]:
        for v, row in enumerate(self.targets):
            for letter, t in enumerate(row):
                if t is None:
                    yield (v, letter)

    def graph(self, inside: int | None = None) -> "nx.Graph[int]":
        """Undirected 1-skeleton, optionally restricted to B(inside). Shared; do not mutate."""
        cached = self._graphs.get(inside)
        if cached is not None:
            return cached
        g: nx.Graph[int] = nx.Graph()
        keep = range(len(self.elements)) if inside is None else self.ball_vertices(inside)
        kept = set(keep)
        g.add_nodes_from(kept)
        g.add_edges_from(
            (e.source, e.target)
            for e in self.edges()
            if e.source in kept and e.target in kept
        )
        self._graphs[inside] = g
        return g

    def ball_vertices(self, m: int) -> list[int]:
        return [v for v, element in enumerate(self.elements) if element.dist <= m]


def _normalize(oracle: Oracle, w: Word) -> Word:
    try:
        return oracle(w)
    except BudgetExceeded as e:
        raise OracleFailure(f"oracle gave up on a word of length {len(w)}", e) from e


def build_ball(oracle: Oracle, alphabet: Alphabet, n: int) -> CayleyBall:
    """Breadth-first enumeration of B(n).

    Raises:
        OracleFailure: If the oracle exceeds its budget.
        InconsistentOracle: If the oracle is not idempotent on a word it produced.

    Example:
        >>> len(build_ball(z2.oracle(), z2.alphabet, 2))
        13
    """
    if n < 0:
        raise RadiusExceeded(0, n)
    root = _normalize(oracle, EMPTY)
    if root != EMPTY:
        raise InconsistentOracle("oracle does not fix the empty word", root)
    elements = [GroupElement(EMPTY, 0)]
    index = {EMPTY: 0}
    parent = [-1]
    parent_letter = [-1]
    targets: list[list[int | None]] = []
    level_start = 0
    for depth in range(n + 1):
        level_end = len(elements)
        for v in range(level_start, level_end):
            row: list[int | None] = []
            for letter in alphabet:
                w = _normalize(oracle, elements[v].nf + (letter,))
                t = index.get(w)
                if t is None:
                    if _normalize(oracle, w) != w:
                        raise InconsistentOracle(
                            f"nf(nf(w)) differs from nf(w) at {alphabet.render(w)!r}", w
                        )
                    if depth < n:
                        t = len(elements)
                        index[w] = t
                        elements.append(GroupElement(w, depth + 1))
                        parent.append(v)
                        parent_letter.append(letter)
                row.append(t)
            targets.append(row)
        logger.debug("ball level %d: %d vertices", depth, level_end - level_start)
        level_start = level_end

    prefix_closed = all(
        _normalize(oracle, e.nf[:-1]) == e.nf[:-1] and e.nf[:-1] in index
        for e in elements[1:]
    )
    if prefix_closed:
        for v in range(1, len(elements)):
            parent[v] = index[elements[v].nf[:-1]]
            parent_letter[v] = elements[v].nf[-1]
    else:
        logger.warning(
            "normal forms are not prefix-closed in B(%d); using the shortlex BFS tree", n
        )
    ball = CayleyBall(
        radius=n,
        alphabet=alphabet,
        oracle=oracle,
        elements=tuple(elements),
        targets=tuple(tuple(row) for row in targets),
        parent=tuple(parent),
        parent_letter=tuple(parent_letter),
        prefix_closed=prefix_closed,
    )
    logger.info("built B(%d) with %d vertices", n, len(ball))
    return ball


def sphere(ball: CayleyBall, m: int) -> tuple[int, ...]:
    """Vertices at distance exactly ``m``.

    Raises:
        RadiusExceeded: If ``m`` exceeds the ball radius.
    """
    if m > ball.radius:
        raise RadiusExceeded(ball.radius, m)
    return tuple(v for v, element in enumerate(ball.elements) if element.dist == m)


def check_prefix_closed(oracle: Oracle, alphabet: Alphabet, n: int) -> bool:
    """Whether every prefix of every normal form in B(n) is a normal form."""
    ball = build_ball(oracle, alphabet, n)
    return all(
        _normalize(oracle, element.nf[:i]) == element.nf[:i]
        for element in ball.elements
        for i in range(len(element.nf))
    )


@dataclass(frozen=True)
class ConvexityReport:
    """Outcome of an almost-convexity check at one radius.

    ``inside_distance`` is None when the witness pair is disconnected inside B(n).
    """

    n: int
    k: int
    pairs_checked: int
    witness: tuple[int, int] | None = None
    inside_distance: int | None = None

    @property
    def passed(self) -> bool:
        return self.witness is None


def _within_two(ball: CayleyBall, g: int) -> set[int]:
    near = {g}
    for t in ball.targets[g]:
        if t is None:
            continue
        near.add(t)
        near.update(u for u in ball.targets[t] if u is not None)
    return near


def check_almost_convex(ball: CayleyBall, n: int, k: int) -> ConvexityReport:
    """Checks that points of S(n) at distance ≤ 2 are joined inside B(n) by ≤ k steps.

    Raises:
        RadiusExceeded: If the ball does not reach radius n+1.
    """
    if n + 1 > ball.radius:
        raise RadiusExceeded(ball.radius, n + 1)
    inside = ball.graph(inside=n)
    on_sphere = set(sphere(ball, n))
    checked = 0
    for g in sorted(on_sphere):
        lengths: dict[int, int] = nx.single_source_shortest_path_length(inside, g)
        for h in sorted(_within_two(ball, g) & on_sphere):
            if h <= g:
                continue
            checked += 1
            d = lengths.get(h)
            if d is None or d > k:
                return ConvexityReport(n, k, checked, (g, h), d)
    return ConvexityReport(n, k, checked)


def shortlex_path(ball: CayleyBall, region: "nx.Graph[int]", g: int, h: int) -> Word | None:
    """Shortlex-least label of a shortest path from ``g`` to ``h`` using only ``region``.

    Returns None if ``region`` does not connect the two vertices.
    """
    if g not in region or h not in region:
        return None
    to_h: dict[int, int] = nx.single_source_shortest_path_length(region, h)
    if g not in to_h:
        return None
    label: list[int] = []
    current = g
    while current != h:
        for letter in ball.alphabet:
            t = ball.targets[current][letter]
            if (
                t is not None
                and to_h.get(t) == to_h[current] - 1
                and region.has_edge(current, t)
            ):
                label.append(letter)
                current = t
                break
    return tuple(label)


def shortlex_geodesic(
    ball: CayleyBall, g: int, h: int, inside: int | None = None
) -> Word | None:
    """Shortlex-least label of a shortest path from ``g`` to ``h``.

    With ``inside`` set the path must stay in B(inside). Returns None if no
    such path exists.
    """
    return shortlex_path(ball, ball.graph(inside=inside), g, h)


@dataclass(frozen=True)
class FellowReport:
    """Largest synchronous distance between normal forms of adjacent elements."""

    K: int
    max_distance: int
    witness: tuple[int, int] | None = None

    @property
    def passed(self) -> bool:
        return self.max_distance <= self.K


def check_fellow_traveler(ball: CayleyBall, K: int, n: int | None = None) -> FellowReport:
    """Checks the K-fellow-traveler property for edges ``g -a-> h`` with g in B(n-1).

    Prefixes are compared at equal lengths; the shorter normal form is held
    at its endpoint once exhausted.

    Raises:
        RadiusExceeded: If ``n`` exceeds the ball radius.
        BallTooSmall: If a synchronous distance cannot be looked up.
    """
    n = ball.radius if n is None else n
    if n > ball.radius:
        raise RadiusExceeded(ball.radius, n)
    alphabet = ball.alphabet
    worst = 0
    witness: tuple[int, int] | None = None
    for g in ball.ball_vertices(n - 1):
        y_g = ball.nf(g)
        for letter in alphabet:
            h = ball.targets[g][letter]
            if h is None:
                continue
            y_h = ball.nf(h)
            for i in range(max(len(y_g), len(y_h)) + 1):
                gap = ball.dist(
                    ball.element(formal_inverse(y_g[:i], alphabet) + y_h[:i])
                )
                if gap > worst:
                    worst, witness = gap, (g, letter)
    return FellowReport(K, worst, witness if worst > K else None)


def ball_stabilizes(oracle: Oracle, alphabet: Alphabet, max_radius: int) -> int | None:
    """Group order if some sphere below ``max_radius`` is empty, else None.

    Example:
        >>> ball_stabilizes(z3.oracle(), z3.alphabet, 3)
        3
    """
    ball = build_ball(oracle, alphabet, max_radius)
    for m in range(1, max_radius + 1):
        if not sphere(ball, m):
            return len(ball.ball_vertices(m - 1))
    return None


def enumerate_identity_words(
    ball: CayleyBall, max_len: int, freely_reduced: bool = True
) -> list[Word]:
    """All nonempty words of length ≤ max_len representing ε, in shortlex order.

    Raises:
        BallTooSmall: If the ball cannot contain every such closed walk.
    """
    if max_len // 2 > ball.radius:
        raise BallTooSmall(
            f"closed words of length {max_len} need radius {max_len // 2}", ball.radius
        )
    inverse = ball.alphabet.inverses
    found: list[Word] = []

    def extend(v: int, word: list[int]) -> None:
        if v == 0 and word:
            found.append(tuple(word))
        remaining = max_len - len(word) - 1
        for letter in ball.alphabet:
            if freely_reduced and word and inverse[word[-1]] == letter:
                continue
            t = ball.targets[v][letter]
            if t is None or ball.dist(t) > remaining:
                continue
            word.append(letter)
            extend(t, word)
            word.pop()

    extend(0, [])
    return sorted(found, key=shortlex_key)


def geodesic_words(ball: CayleyBall, n: int) -> list[Word]:
    """Geodesic tree words ``w_m``, 1 ≤ m ≤ n, of the first element on each sphere."""
    words: list[Word] = []
    for m in range(1, n + 1):
        geodesic = next((ball.word(v) for v in sphere(ball, m) if len(ball.word(v)) == m), None)
        if geodesic is None:
            raise BallTooSmall(f"no geodesic tree word of length {m}", ball.radius)
        words.append(geodesic)
    return words
