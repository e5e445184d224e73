"""Flow functions on Cayley balls.

A flow function assigns to every directed edge ``(v, a)`` of a ball the
label of a replacement path with the same endpoints. Tree edges keep their
own label; every other edge must be replaced by a path whose non-tree edges
sit strictly lower in a well-founded descent order.
"""

import logging
from dataclasses import dataclass, field
from typing import Mapping

import networkx as nx

from .cayley import CayleyBall, enumerate_identity_words, shortlex_path
from .error import DanglingEdge, NoApplicableRule, NotAlmostConvex
from .rewriting import RewritingSystem, is_irreducible
from .words import Presentation, Word, formal_inverse, shortlex_key, symmetrize

logger = logging.getLogger(__name__)

DirectedEdge = tuple[int, int]


@dataclass(frozen=True, eq=False)
class FlowFunction:
    """Replacement-path labels for the directed edges of a ball.

    Attributes:
        ball: Ball the edges live in.
        assignment: Label of the replacement path of each ``(source, letter)``.
        bound_k: Longest assigned label.
        name: Construction that produced it.
    """

    ball: CayleyBall = field(repr=False)
    assignment: Mapping[DirectedEdge, Word] = field(repr=False)
    bound_k: int
    name: str = "custom"

    def label(self, v: int, letter: int) -> Word:
        """Assigned label of ``(v, letter)``.

        Raises:
            DanglingEdge: If the edge has no assignment.
        """
        try:
            return self.assignment[(v, letter)]
        except KeyError:
            raise DanglingEdge(f"no path assigned to edge ({v}, {letter})") from None

    def trace(self, v: int, letter: int) -> list[DirectedEdge]:
        """Directed edges along the assigned path of ``(v, letter)``.

        Raises:
            DanglingEdge: If the assigned path leaves the ball.
        """
        path: list[DirectedEdge] = []
        at = v
        for step in self.label(v, letter):
            t = self.ball.step(at, step)
            if t is None:
                raise DanglingEdge(
                    f"path for edge ({v}, {letter}) leaves B({self.ball.radius})",
                    (v, letter),
                )
            path.append((at, step))
            at = t
        return path

    def recursive_edges(self) -> list[DirectedEdge]:
        return [e for e in self.assignment if not self.ball.is_degenerate(*e)]


@dataclass(frozen=True)
class FlowReport:
    """Result of checking a flow function on one ball.

    The descent relation is only acyclic within the ball: a passing report
    means verified to radius ``radius``.
    """

    radius: int
    f1_failures: tuple[DirectedEdge, ...] = ()
    f2d_failures: tuple[DirectedEdge, ...] = ()
    f3_failures: tuple[DirectedEdge, ...] = ()
    unusable: tuple[DirectedEdge, ...] = ()
    descent_pairs: int = 0
    cycle: tuple[DirectedEdge, ...] | None = None

    @property
    def passed(self) -> bool:
        return not (self.f1_failures or self.f2d_failures or self.f3_failures) and (
            self.cycle is None
        )


def descent_relation(ff: FlowFunction) -> "nx.DiGraph[DirectedEdge]":
    """Digraph with an arc ``e' -> e`` when recursive ``e'`` lies on the path of recursive ``e``.

    Edges whose paths leave the ball are skipped.
    """
    ball = ff.ball
    relation: nx.DiGraph[DirectedEdge] = nx.DiGraph()
    for e in ff.recursive_edges():
        try:
            path = ff.trace(*e)
        except DanglingEdge:
            continue
        relation.add_node(e)
        relation.add_edges_from((step, e) for step in path if not ball.is_degenerate(*step))
    return relation


def verify_flow(ff: FlowFunction, strict: bool = False) -> FlowReport:
    """Checks path endpoints, fixed tree edges, the length bound and descent acyclicity.

    Edges whose assigned path leaves the ball are reported as unusable; with
    ``strict`` they raise instead.

    Raises:
        DanglingEdge: In strict mode, for the first path that leaves the ball.
    """
    ball = ff.ball
    f1: list[DirectedEdge] = []
    f2d: list[DirectedEdge] = []
    f3: list[DirectedEdge] = []
    unusable: list[DirectedEdge] = list(ball.dangling())
    for e, label in sorted(ff.assignment.items()):
        v, letter = e
        if ball.is_degenerate(v, letter) and label != (letter,):
            f2d.append(e)
        if len(label) > ff.bound_k:
            f3.append(e)
        try:
            path = ff.trace(v, letter)
        except DanglingEdge:
            if strict:
                raise
            unusable.append(e)
            continue
        end = ball.step(*path[-1]) if path else v
        if end != ball.step(v, letter):
            f1.append(e)
    relation = descent_relation(ff)
    cycle: tuple[DirectedEdge, ...] | None = None
    if not nx.is_directed_acyclic_graph(relation):
        cycle = tuple(arc[0] for arc in nx.find_cycle(relation))
    report = FlowReport(
        radius=ball.radius,
        f1_failures=tuple(f1),
        f2d_failures=tuple(f2d),
        f3_failures=tuple(f3),
        unusable=tuple(unusable),
        descent_pairs=relation.number_of_edges(),
        cycle=cycle,
    )
    logger.info(
        "%s flow on B(%d): %s, %d descent pairs",
        ff.name,
        ball.radius,
        "passed" if report.passed else "failed",
        report.descent_pairs,
    )
    return report


def rewriting_flow(rs: RewritingSystem, ball: CayleyBall) -> FlowFunction:
    """Flow function of a complete rewriting system.

    An edge ``g -a->`` is kept when ``y_g·a`` or ``y_ga·a⁻¹`` is irreducible.
    Otherwise ``y_g·a = y'·u·a`` with ``u·a -> v`` a rule, and the edge is
    replaced by the path ``u⁻¹·v`` from g.

    Raises:
        NoApplicableRule: If no rule ends at the last letter of ``y_g·a``.

    Example:
        >>> ff = rewriting_flow(z2, ball)
        >>> z2.alphabet.render(ff.label(ball.element(parse("b")), parse("a")[0]))
        'B a b'
    """
    if not ball.prefix_closed:
        logger.warning("rewriting flow on a ball whose normal forms are not prefix-closed")
    alphabet = ball.alphabet
    assignment: dict[DirectedEdge, Word] = {}
    for v, letter, t in ball.edges():
        y_g, y_h = ball.nf(v), ball.nf(t)
        extended = y_g + (letter,)
        if is_irreducible(rs, extended) or is_irreducible(rs, y_h + (alphabet.inverse(letter),)):
            assignment[(v, letter)] = (letter,)
            continue
        index = next(rs.matches_ending_at(extended, len(extended)), None)
        if index is None:
            raise NoApplicableRule(
                f"no rule applies at the end of {alphabet.render(extended)!r}", (v, letter)
            )
        rule = rs.rules[index]
        u = rule.lhs[:-1]
        assignment[(v, letter)] = formal_inverse(u, alphabet) + rule.rhs
    bound = max((len(label) for label in assignment.values()), default=0)
    return FlowFunction(ball, assignment, bound, "rewriting")


def descending_region(ball: CayleyBall, n: int) -> "nx.Graph[int]":
    """B(n) without the edges joining two points of the sphere S(n).

    Every remaining edge has a midpoint strictly below level n. This is
    narrower than the region searched by ``check_almost_convex``, which
    keeps sphere edges: a ball can pass that check with constant k while
    ``ac_flow`` with the same k raises ``NotAlmostConvex``, as in Z/3 where
    the two points of S(1) are adjacent.
    """
    return nx.subgraph_view(
        ball.graph(inside=n),
        filter_edge=lambda u, v: ball.dist(u) < n or ball.dist(v) < n,
    )


def ac_flow(ball: CayleyBall, k: int) -> FlowFunction:
    """Flow function of an almost convex group, over the shortlex normal-form tree.

    A recursive edge between levels n and n is replaced by a path of length
    at most k through B(n); an edge from level n to n+1 by such a path to the
    tree parent of its target followed by the tree edge, and symmetrically.
    Paths never use edges joining two points of S(n), so every non-tree edge
    of a replacement path has a strictly lower midpoint.

    Raises:
        NotAlmostConvex: If a required path of length at most k is missing.
    """
    assignment: dict[DirectedEdge, Word] = {}
    alphabet = ball.alphabet

    def phi(g: int, h: int, n: int) -> Word:
        path = shortlex_path(ball, descending_region(ball, n), g, h)
        if path is None or len(path) > k:
            raise NotAlmostConvex(
                f"no path of length <= {k} inside B({n}) between vertices {g} and {h}", (g, h)
            )
        return path

    for v, letter, t in ball.edges():
        if ball.is_degenerate(v, letter):
            assignment[(v, letter)] = (letter,)
            continue
        n_g, n_h = ball.dist(v), ball.dist(t)
        if n_g == n_h:
            label = phi(v, t, n_g)
        elif n_h == n_g + 1:
            label = phi(v, ball.parent[t], n_g) + (ball.parent_letter[t],)
        else:
            label = (alphabet.inverse(ball.parent_letter[v]),) + phi(ball.parent[v], t, n_h)
        assignment[(v, letter)] = label
    return FlowFunction(ball, assignment, k + 1, "ac")


def check_midpoint_descent(ff: FlowFunction) -> list[tuple[DirectedEdge, DirectedEdge]]:
    """Pairs ``(e, e')`` where non-tree ``e'`` on the path of ``e`` has no lower midpoint."""
    ball = ff.ball

    def midpoint(v: int, letter: int) -> int:
        t = ball.step(v, letter)
        far = ball.radius + 1 if t is None else ball.dist(t)
        return 4 * min(ball.dist(v), far) + 2

    failures: list[tuple[DirectedEdge, DirectedEdge]] = []
    for e in ff.recursive_edges():
        try:
            path = ff.trace(*e)
        except DanglingEdge:
            continue
        level = midpoint(*e)
        failures.extend(
            (e, step)
            for step in path
            if not ball.is_degenerate(*step) and midpoint(*step) >= level
        )
    return failures


def flow_presentation(ff: FlowFunction) -> Presentation:
    """Relators ``label(ff(e))·a⁻¹`` over the recursive edges, symmetrized."""
    alphabet = ff.ball.alphabet
    relators = {
        ff.assignment[e] + (alphabet.inverse(e[1]),) for e in ff.recursive_edges()
    }
    return symmetrize(Presentation(alphabet, tuple(sorted(relators))))


def ac_presentation(ball: CayleyBall, k: int) -> Presentation:
    """All nonempty words of length at most k+2 representing ε."""
    return Presentation(
        ball.alphabet, tuple(enumerate_identity_words(ball, k + 2, freely_reduced=False))
    )


def fellow_presentation(ball: CayleyBall, K: int) -> Presentation:
    """All nonempty words of length at most 2K+2 representing ε."""
    return Presentation(
        ball.alphabet, tuple(enumerate_identity_words(ball, 2 * K + 2, freely_reduced=False))
    )


def export_triples(ff: FlowFunction) -> list[str]:
    """Tab-separated ``w, a, label`` lines, one per assigned edge, in tree-word order."""
    ball = ff.ball
    render = ball.alphabet.render
    rows = sorted(
        ff.assignment.items(),
        key=lambda item: (shortlex_key(ball.word(item[0][0])), item[0][1]),
    )
    return [
        f"{render(ball.word(v))}\t{ball.alphabet.names[letter]}\t{render(label)}"
        for (v, letter), label in rows
    ]
