"""Building van Kampen diagrams together with their discretized combings.

A combing path is the sequence of cells a continuous combing path passes
through, from the basepoint to a boundary sample. Coarse distance is
constant on open cells, so the cell sequence fixes the whole distance trace.
Samples are every boundary vertex and one interior point per boundary edge.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .cayley import CayleyBall, enumerate_identity_words, shortlex_geodesic
from .diagram import (
    Cell,
    CombingPath,
    Dart,
    DiagramBuilder,
    Remap,
    VanKampenDiagram,
    boundary_path,
    reverse_darts,
    vertex,
)
from .error import (
    BallTooSmall,
    CatalogIncomplete,
    CycleDetected,
    DanglingEdge,
    FellowTravelerViolation,
    NonSimpleNormalForm,
    NotIdentity,
    panic,
)
from .flow import DirectedEdge, FlowFunction, rewriting_flow
from .rewriting import RewritingSystem
from .words import EMPTY, Word

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EdgeCombing:
    """An N-diagram for ``y_g·a·y_h⁻¹`` with the combing of its edge ``ê``.

    Attributes:
        diagram: The N-diagram.
        edge: The boundary dart ``ê`` from ``ĝ`` to ``ĥ``.
        prefix: Number of boundary darts before ``ê``.
        start: Path to ``ĝ`` along the ``y_g`` boundary arc.
        end: Path to ``ĥ`` along the ``y_h`` boundary arc.
        interior: Path to the interior of ``ê``.
    """

    diagram: VanKampenDiagram
    edge: Dart
    prefix: int
    start: CombingPath
    end: CombingPath
    interior: CombingPath

    def mirrored(self) -> "EdgeCombing":
        """The same diagram and paths, read as the N-diagram of the reverse edge."""
        d = self.diagram.mirrored()
        prefix = len(d.boundary) - self.prefix - 1
        return EdgeCombing(d, self.edge.flip(), prefix, self.end, self.start, self.interior)

    def samples(self) -> list[tuple[Cell, CombingPath]]:
        d = self.diagram
        return [
            (vertex(d.src(self.edge)), self.start),
            (Cell("e", self.edge.edge), self.interior),
            (vertex(d.dst(self.edge)), self.end),
        ]

    @property
    def paths(self) -> list[CombingPath]:
        return [path for _, path in self.samples()]


@dataclass(frozen=True, eq=False)
class DiagramCombing:
    """A diagram for ``word`` with one path per boundary vertex and per boundary edge.

    ``vertex_paths[i]`` reaches the boundary vertex after ``i`` letters;
    ``edge_paths[i]`` reaches the interior of the ``i``-th boundary edge.
    """

    diagram: VanKampenDiagram
    word: Word
    vertex_paths: tuple[CombingPath, ...]
    edge_paths: tuple[CombingPath, ...]

    def samples(self) -> list[tuple[Cell, CombingPath]]:
        d = self.diagram
        found: list[tuple[Cell, CombingPath]] = [(vertex(d.basepoint), self.vertex_paths[0])]
        for i, dart in enumerate(d.boundary):
            found.append((Cell("e", dart.edge), self.edge_paths[i]))
            found.append((vertex(d.dst(dart)), self.vertex_paths[i + 1]))
        return found

    @property
    def paths(self) -> list[CombingPath]:
        return [path for _, path in self.samples()]


Supplier = Callable[[int, int], EdgeCombing]


def check_combing(combing: EdgeCombing | DiagramCombing) -> list[str]:
    """Audits start, incidence and endpoint of every combing path."""
    d = combing.diagram
    failures: list[str] = []
    for target, path in combing.samples():
        if not path or path[0] != vertex(d.basepoint):
            failures.append(f"path to {target} does not start at the basepoint")
            continue
        if path[-1] != target:
            failures.append(f"path to {target} ends at {path[-1]}")
        for a, b in zip(path, path[1:]):
            if a == b or not d.incident(a, b):
                failures.append(f"path to {target} jumps from {a} to {b}")
                break
    return failures


def geodesic_combing(d: VanKampenDiagram) -> DiagramCombing:
    """Combing along breadth-first shortest paths, lowest dart first."""
    parent: dict[int, Dart] = {}
    order = [d.basepoint]
    seen = {d.basepoint}
    for v in order:
        for dart in d.out_darts[v]:
            t = d.dst(dart)
            if t not in seen:
                seen.add(t)
                parent[t] = dart
                order.append(t)

    def path_to(v: int) -> CombingPath:
        darts: list[Dart] = []
        while v != d.basepoint:
            darts.append(parent[v])
            v = d.src(parent[v])
        return boundary_path(d, darts[::-1])

    depth = {v: len(path_to(v)) for v in order}
    vertex_paths = [path_to(d.basepoint)]
    edge_paths: list[CombingPath] = []
    for dart in d.boundary:
        near = min(d.src(dart), d.dst(dart), key=lambda v: (depth[v], v))
        edge_paths.append(path_to(near) + (Cell("e", dart.edge),))
        vertex_paths.append(path_to(d.dst(dart)))
    return DiagramCombing(d, d.word, tuple(vertex_paths), tuple(edge_paths))


# Seashell gluing


def _cells_along(builder: DiagramBuilder, start: int, darts: Sequence[Dart]) -> CombingPath:
    cells = [vertex(start)]
    for dart in darts:
        cells.append(Cell("e", dart.edge))
        cells.append(vertex(builder.dst(dart)))
    return tuple(cells)


@dataclass
class _Chain:
    arc: list[Dart] = field(default_factory=list[Dart])
    tail: list[Dart] = field(default_factory=list[Dart])
    vertex_paths: list[CombingPath] = field(default_factory=list[CombingPath])
    edge_paths: list[CombingPath] = field(default_factory=list[CombingPath])
    joins: list[tuple[CombingPath, CombingPath]] = field(
        default_factory=list[tuple[CombingPath, CombingPath]]
    )


def _glue_chain(
    builder: DiagramBuilder,
    tail: list[Dart],
    start_path: CombingPath,
    at: int,
    letters: Word,
    supplier: Supplier,
) -> _Chain:
    """Glues the N-diagrams of the edges read by ``letters`` from ball vertex ``at``.

    Each piece is folded onto the current tail (the normal-form arc from the
    basepoint) starting at the basepoint; its own far arc becomes the new tail.
    """
    chain = _Chain(tail=tail, vertex_paths=[start_path])
    for letter in letters:
        piece = supplier(at, letter)
        d = piece.diagram
        if piece.prefix != len(chain.tail):
            panic(f"piece for edge ({at}, {letter}) does not fit the tail")
        mapping = builder.glue(
            d, zip(chain.tail, d.boundary[: piece.prefix]), anchor=(0, d.basepoint)
        )
        chain.arc.append(mapping.dart(d.boundary[piece.prefix]))
        chain.tail = [mapping.dart(x) for x in reverse_darts(d.boundary[piece.prefix + 1 :])]
        chain.joins.append((chain.vertex_paths[-1], mapping.path(piece.start)))
        chain.vertex_paths.append(mapping.path(piece.end))
        chain.edge_paths.append(mapping.path(piece.interior))
        step = builder.ball.step(at, letter)
        if step is None:
            raise BallTooSmall("seashell path leaves the ball", builder.ball.radius)
        at = step
    return chain


def _check_joins(remap: Remap, joins: Iterable[tuple[CombingPath, CombingPath]]) -> None:
    for before, after in joins:
        if remap.path(before) != remap.path(after):
            panic("glued combing paths disagree on their common endpoint")


def _check_simple(ball: CayleyBall, vertices: Iterable[int]) -> None:
    for v in set(vertices):
        visited = ball.walk(0, ball.word(v))
        if len(set(visited)) != len(visited):
            raise NonSimpleNormalForm(
                f"normal form {ball.alphabet.render(ball.word(v))!r} is not a simple path", v
            )


def seashell(w: Word, supplier: Supplier, ball: CayleyBall) -> DiagramCombing:
    """Fills ``w`` by gluing the N-diagrams of its edges along their normal-form arcs.

    Raises:
        NotIdentity: If ``w`` does not represent ε.
        NonSimpleNormalForm: If a normal-form arc revisits a vertex.
        BallTooSmall: If the path of ``w`` leaves the ball.

    Example:
        >>> combing = seashell(parse("b a B A"), NDiagramBuilder(ff).filling, ball)
        >>> len(combing.diagram.faces)
        1
    """
    if ball.oracle(w) != EMPTY:
        raise NotIdentity(f"{ball.alphabet.render(w)!r} does not represent the identity", w)
    visited = ball.walk(0, w)
    _check_simple(ball, visited)
    builder = DiagramBuilder(ball)
    chain = _glue_chain(builder, [], (vertex(0),), 0, w, supplier)
    if chain.tail:
        panic("seashell ended away from the basepoint")
    diagram, remap = builder.freeze(chain.arc)
    _check_joins(remap, chain.joins)
    logger.debug(
        "seashell for %r: %d faces", ball.alphabet.render(w), len(diagram.faces)
    )
    return DiagramCombing(
        diagram,
        w,
        tuple(remap.path(p) for p in chain.vertex_paths),
        tuple(remap.path(p) for p in chain.edge_paths),
    )


# N-diagrams from a flow function


class NDiagramBuilder:
    """Builds and memoizes the N-diagrams of a flow function.

    ``build`` constructs one diagram per directed edge by Noetherian
    induction over the descent order. ``filling`` keeps one diagram per
    undirected edge, stored for the orientation leaving the shortlex-least
    endpoint and mirrored for the other.
    """

    def __init__(self, ff: FlowFunction) -> None:
        self.ff = ff
        self.ball = ff.ball
        self._directed: dict[DirectedEdge, EdgeCombing] = {}
        self._filling: dict[DirectedEdge, EdgeCombing] = {}
        self._in_progress: set[DirectedEdge] = set()

    def __len__(self) -> int:
        return len(self._directed)

    def built(self) -> Mapping[DirectedEdge, EdgeCombing]:
        return self._directed

    def build_recursive(self, n: int) -> Mapping[DirectedEdge, EdgeCombing]:
        """Builds every recursive edge leaving B(n) that ends inside the ball."""
        for v, letter, _ in self.ball.edges():
            if self.ball.dist(v) <= n and not self.ball.is_degenerate(v, letter):
                self.build(v, letter)
        return self._directed

    def filling(self, v: int, letter: int) -> EdgeCombing:
        """The N-diagram chosen for the undirected edge, read from ``v``."""
        cached = self._filling.get((v, letter))
        if cached is not None:
            return cached
        source, stored = self.ball.canonical_edge(v, letter)
        base = self.build(source, stored)
        result = base if (source, stored) == (v, letter) else base.mirrored()
        self._filling[(v, letter)] = result
        return result

    def build(self, v: int, letter: int) -> EdgeCombing:
        """The N-diagram of the directed edge ``(v, letter)``.

        Raises:
            CycleDetected: If the edge is reached again while being built.
            BallTooSmall: If the edge or its flow path leaves the ball.
        """
        key = (v, letter)
        cached = self._directed.get(key)
        if cached is not None:
            logger.debug("N-diagram memo hit for %s", key)
            return cached
        if key in self._in_progress:
            raise CycleDetected(f"descent order loops back to edge {key}", key)
        t = self.ball.step(v, letter)
        if t is None:
            raise BallTooSmall(f"edge {key} leaves the ball", self.ball.radius)
        self._in_progress.add(key)
        try:
            if self.ball.is_degenerate(v, letter):
                result = self._degenerate(v, letter, t)
            else:
                result = self._recursive(v, letter, t)
        finally:
            self._in_progress.discard(key)
        self._directed[key] = result
        return result

    def _degenerate(self, v: int, letter: int, t: int) -> EdgeCombing:
        ball = self.ball
        y_g, y_h = ball.word(v), ball.word(t)
        builder = DiagramBuilder(ball)
        if y_h == y_g + (letter,):
            darts = builder.trace_new(0, y_h)
            edge = darts[-1]
            boundary = darts + reverse_darts(darts)
            start, end = darts[:-1], darts
        else:
            if y_g != y_h + (ball.alphabet.inverse(letter),):
                panic(f"degenerate edge ({v}, {letter}) is not a normal-form tree edge")
            darts = builder.trace_new(0, y_g)
            edge = darts[-1].flip()
            boundary = darts + [edge] + reverse_darts(darts[:-1])
            start, end = darts, darts[:-1]
        diagram, remap = builder.freeze(boundary)
        start_path = remap.path(_cells_along(builder, 0, start))
        end_path = remap.path(_cells_along(builder, 0, end))
        near = start_path if len(start_path) <= len(end_path) else end_path
        edge = remap.dart(edge)
        return EdgeCombing(
            diagram, edge, len(y_g), start_path, end_path, near + (Cell("e", edge.edge),)
        )

    def _recursive(self, v: int, letter: int, t: int) -> EdgeCombing:
        ball = self.ball
        alphabet = ball.alphabet
        try:
            label = self.ff.label(v, letter)
            self.ff.trace(v, letter)
        except DanglingEdge as e:
            raise BallTooSmall(f"flow path of edge ({v}, {letter}) is unusable", ball.radius) from e
        y_g, y_h = ball.word(v), ball.word(t)

        # label = x_g⁻¹ · c · x_h with x_g, x_h maximal suffixes of y_g, y_h
        i = 0
        while i < min(len(y_g), len(label)) and label[i] == alphabet.inverse(y_g[-1 - i]):
            i += 1
        rest = label[i:]
        j = 0
        while j < min(len(y_h), len(rest)) and rest[-1 - j] == y_h[-1 - j]:
            j += 1
        x_g, x_h = y_g[len(y_g) - i :], y_h[len(y_h) - j :]
        c = rest[: len(rest) - j]
        y_q = y_g[: len(y_g) - i]
        q = ball.walk(0, y_q)[-1]

        builder = DiagramBuilder(ball)
        y_q_darts = builder.trace_new(0, y_q)
        start_path = _cells_along(builder, 0, y_q_darts)
        chain = _glue_chain(builder, y_q_darts, start_path, q, c, self.build)
        q_hat = builder.end_of(0, y_q_darts)
        r_hat = builder.end_of(0, chain.tail)
        x_g_darts = builder.trace_new(q_hat, x_g)
        x_h_darts = builder.trace_new(r_hat, x_h)
        g_hat = builder.end_of(q_hat, x_g_darts)
        h_hat = builder.end_of(r_hat, x_h_darts)
        e_hat = builder.add_edge(g_hat, h_hat, letter)
        face = builder.add_face(
            reverse_darts(x_g_darts) + chain.arc + x_h_darts + [e_hat.flip()]
        )
        boundary = (
            y_q_darts
            + x_g_darts
            + [e_hat]
            + reverse_darts(x_h_darts)
            + reverse_darts(chain.tail)
        )
        if not c:
            middle = start_path
        elif len(c) % 2:
            middle = chain.edge_paths[len(c) // 2]
        else:
            middle = chain.vertex_paths[len(c) // 2]
        start = _cells_along(builder, 0, y_q_darts + x_g_darts)
        end = _cells_along(builder, 0, chain.tail + x_h_darts)
        interior = middle + (Cell("f", face), Cell("e", e_hat.edge))

        diagram, remap = builder.freeze(boundary)
        _check_joins(remap, chain.joins)
        logger.debug("N-diagram for edge (%d, %d): %d faces", v, letter, len(diagram.faces))
        return EdgeCombing(
            diagram,
            remap.dart(e_hat),
            len(y_g),
            remap.path(start),
            remap.path(end),
            remap.path(interior),
        )


def build_ndiagram(edge: DirectedEdge, ff: FlowFunction) -> EdgeCombing:
    """N-diagram of one directed edge with a fresh memo table."""
    return NDiagramBuilder(ff).build(*edge)


# Finite groups


def build_catalog(rs: RewritingSystem, ball: CayleyBall) -> dict[Word, DiagramCombing]:
    """Seashell diagrams for every word of length at most |G| representing ε.

    Raises:
        BallTooSmall: If the ball does not contain the whole (finite) group.
    """
    if not ball.boundary_complete:
        raise BallTooSmall("the catalog needs the whole group enumerated", ball.radius)
    order = len(ball)
    builder = NDiagramBuilder(rewriting_flow(rs, ball))
    catalog = {
        w: seashell(w, builder.filling, ball)
        for w in enumerate_identity_words(ball, order, freely_reduced=False)
    }
    logger.info("catalog for a group of order %d: %d words", order, len(catalog))
    return catalog


def build_finite_filling(
    u: Word, catalog: Mapping[Word, DiagramCombing], ball: CayleyBall
) -> DiagramCombing:
    """Fills ``u`` in a finite group by repeatedly closing off short identity subwords.

    Starting from a segment labelled ``u``, the earliest-ending shortest
    subword representing ε is pinched closed and filled with its catalog
    diagram; the remaining spine is processed the same way.

    Raises:
        NotIdentity: If ``u`` does not represent ε.
        CatalogIncomplete: If a needed subword has no catalog diagram.
    """
    if ball.oracle(u) != EMPTY:
        raise NotIdentity(f"{ball.alphabet.render(u)!r} does not represent the identity", u)
    builder = DiagramBuilder(ball)
    boundary = builder.trace_new(0, u)
    # (original position, dart) of every dart still on the spine
    spine: list[tuple[int, Dart]] = list(enumerate(boundary))
    vertex_paths: dict[int, CombingPath] = {0: (vertex(0),)}
    edge_paths: dict[int, CombingPath] = {}

    while spine:
        darts = [dart for _, dart in spine]
        points = [builder.projection(builder.find(0))] + [
            builder.projection(builder.dst(dart)) for dart in darts
        ]
        first, last = _earliest_loop(points)
        loop = _label(builder, darts[first:last])
        entry = catalog.get(loop)
        if entry is None:
            raise CatalogIncomplete(
                f"no catalog diagram for {ball.alphabet.render(loop)!r}", loop
            )
        approach = _cells_along(builder, 0, darts[:first])
        anchor = builder.end_of(0, darts[:first])
        mapping = builder.glue(
            entry.diagram,
            zip(darts[first:last], entry.diagram.boundary),
            anchor=(anchor, entry.diagram.basepoint),
            translate=builder.projection(builder.find(anchor)),
        )
        for offset, (position, _) in enumerate(spine[first:last]):
            edge_paths[position] = approach + mapping.path(entry.edge_paths[offset])[1:]
            vertex_paths[position + 1] = approach + mapping.path(
                entry.vertex_paths[offset + 1]
            )[1:]
        spine = spine[:first] + spine[last:]

    diagram, remap = builder.freeze(boundary)
    return DiagramCombing(
        diagram,
        u,
        tuple(remap.path(vertex_paths[i]) for i in range(len(u) + 1)),
        tuple(remap.path(edge_paths[i]) for i in range(len(u))),
    )


def _earliest_loop(points: Sequence[int]) -> tuple[int, int]:
    """``(s, e)`` with ``points[s] == points[e]``, ``e`` minimal, then ``s`` maximal."""
    last_seen: dict[int, int] = {}
    for e, p in enumerate(points):
        if p in last_seen:
            return (last_seen[p], e)
        last_seen[p] = e
    panic("spine does not close up")


def _label(builder: DiagramBuilder, darts: Sequence[Dart]) -> Word:
    return tuple(builder.letter(dart) for dart in darts)


# Combable groups


def build_thin_diagram(edge: DirectedEdge, K: int, ball: CayleyBall) -> EdgeCombing:
    """Ladder diagram between the normal forms of an edge's endpoints.

    Rung ``i`` is the shortlex geodesic between the length-``i`` prefixes of
    ``y_g`` and ``y_h``; the last rung is the edge itself. Steps where both
    rungs are empty and the normal forms agree share one edge instead of a
    2-cell.

    Raises:
        FellowTravelerViolation: If a rung is longer than K.
        BallTooSmall: If a prefix or rung lies outside the ball.
    """
    v, letter = edge
    t = ball.step(v, letter)
    if t is None:
        raise BallTooSmall(f"edge {edge} leaves the ball", ball.radius)
    y_g, y_h = ball.word(v), ball.word(t)
    steps = max(len(y_g), len(y_h))
    g_path, h_path = ball.walk(0, y_g), ball.walk(0, y_h)

    rungs: list[Word] = [EMPTY]
    for i in range(1, steps):
        g_i, h_i = g_path[min(i, len(y_g))], h_path[min(i, len(y_h))]
        rung = shortlex_geodesic(ball, g_i, h_i)
        if rung is None:
            raise BallTooSmall(f"no rung at step {i}", ball.radius)
        if len(rung) > K:
            raise FellowTravelerViolation(
                f"normal forms are {len(rung)} apart at step {i}, more than {K}", (v, letter)
            )
        rungs.append(rung)
    rungs.append((letter,))

    builder = DiagramBuilder(ball)
    left_rail: list[Dart] = []
    right_rail: list[Dart] = []
    left = right = 0
    previous: list[Dart] = []
    path: list[Cell] = [vertex(0)]
    e_hat: Dart | None = None
    for i in range(1, steps + 1):
        a_i = y_g[i - 1 : i]
        b_i = y_h[i - 1 : i]
        if not rungs[i - 1] and not rungs[i] and a_i == b_i and i < steps:
            shared = builder.trace_new(left, a_i)
            left_rail += shared
            right_rail += shared
            left = right = builder.end_of(left, shared)
            path += [Cell("e", shared[0].edge), vertex(left)]
            previous = []
            continue
        a_darts = builder.trace_new(left, a_i)
        b_darts = builder.trace_new(right, b_i)
        left_rail += a_darts
        right_rail += b_darts
        left, right = builder.end_of(left, a_darts), builder.end_of(right, b_darts)
        if i == steps:
            e_hat = builder.add_edge(left, right, letter)
            rung_darts = [e_hat]
        elif rungs[i]:
            rung_darts = builder.trace_new(left, rungs[i][:-1])
            rung_darts.append(
                builder.add_edge(builder.end_of(left, rung_darts), right, rungs[i][-1])
            )
        else:
            builder.identify(left, right)
            rung_darts = []
        face = builder.add_face(
            a_darts + rung_darts + reverse_darts(b_darts) + reverse_darts(previous)
        )
        path.append(Cell("f", face))
        if i < steps:
            path.append(
                Cell("e", rung_darts[len(rung_darts) // 2].edge) if rung_darts else vertex(left)
            )
        previous = rung_darts
    if e_hat is None:
        panic("ladder has no final rung")
    path.append(Cell("e", e_hat.edge))

    boundary = left_rail + [e_hat] + reverse_darts(right_rail)
    diagram, remap = builder.freeze(boundary)
    return EdgeCombing(
        diagram,
        remap.dart(e_hat),
        len(y_g),
        remap.path(_cells_along(builder, 0, left_rail)),
        remap.path(_cells_along(builder, 0, right_rail)),
        remap.path(path),
    )


def thin_supplier(K: int, ball: CayleyBall) -> Supplier:
    """Thin diagrams keyed by undirected edge, oriented like ``NDiagramBuilder.filling``."""
    memo: dict[DirectedEdge, EdgeCombing] = {}

    def supply(v: int, letter: int) -> EdgeCombing:
        canonical = ball.canonical_edge(v, letter)
        base = memo.get(canonical)
        if base is None:
            base = memo[canonical] = build_thin_diagram(canonical, K, ball)
        return base if canonical == (v, letter) else base.mirrored()

    return supply
