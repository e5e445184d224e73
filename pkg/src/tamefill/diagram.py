"""Van Kampen diagrams as combinatorial maps, plus their coarse-distance profiles.

A diagram stores vertices (with their projection into a Cayley ball),
labelled edges, faces as closed dart cycles and the boundary circuit as a
dart sequence read from the basepoint. A dart is an edge traversed forwards
or backwards. Coarse distances are kept as integer quarters.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Literal, NamedTuple, Sequence, TypeAlias

import networkx as nx
from networkx.utils import UnionFind

from .cayley import CayleyBall
from .error import BallTooSmall, panic
from .words import Alphabet, Presentation, Word

logger = logging.getLogger(__name__)

CellKind: TypeAlias = Literal["v", "e", "f"]


class Cell(NamedTuple):
    kind: CellKind
    index: int


class Dart(NamedTuple):
    edge: int
    forward: bool

    def flip(self) -> "Dart":
        return Dart(self.edge, not self.forward)


class DiagramEdge(NamedTuple):
    src: int
    dst: int
    letter: int


CombingPath: TypeAlias = tuple[Cell, ...]


def vertex(index: int) -> Cell:
    return Cell("v", index)


def reverse_darts(darts: Sequence[Dart]) -> list[Dart]:
    """The same path read backwards."""
    return [d.flip() for d in reversed(darts)]


@dataclass(frozen=True, eq=False)
class VanKampenDiagram:
    """A finite planar contractible 2-complex with basepoint 0.

    Attributes:
        ball: Cayley ball the vertices project into.
        projection: Ball vertex of every diagram vertex.
        edges: Labelled edges; ``letter`` is read from ``src`` to ``dst``.
        faces: Closed dart cycles, one per 2-cell.
        boundary: Boundary circuit from the basepoint.
    """

    ball: CayleyBall = field(repr=False)
    projection: tuple[int, ...]
    edges: tuple[DiagramEdge, ...]
    faces: tuple[tuple[Dart, ...], ...]
    boundary: tuple[Dart, ...]
    basepoint: int = 0

    @property
    def alphabet(self) -> Alphabet:
        return self.ball.alphabet

    @property
    def num_vertices(self) -> int:
        return len(self.projection)

    def src(self, dart: Dart) -> int:
        edge = self.edges[dart.edge]
        return edge.src if dart.forward else edge.dst

    def dst(self, dart: Dart) -> int:
        edge = self.edges[dart.edge]
        return edge.dst if dart.forward else edge.src

    def letter(self, dart: Dart) -> int:
        letter = self.edges[dart.edge].letter
        return letter if dart.forward else self.alphabet.inverse(letter)

    def label(self, darts: Iterable[Dart]) -> Word:
        return tuple(self.letter(d) for d in darts)

    @property
    def word(self) -> Word:
        """Boundary label read from the basepoint."""
        return self.label(self.boundary)

    @property
    def euler_characteristic(self) -> int:
        return self.num_vertices - len(self.edges) + len(self.faces)

    def mirrored(self) -> "VanKampenDiagram":
        """Mirror image: same cells, boundary and faces read in reverse."""
        return VanKampenDiagram(
            ball=self.ball,
            projection=self.projection,
            edges=self.edges,
            faces=tuple(tuple(reverse_darts(face)) for face in self.faces),
            boundary=tuple(reverse_darts(self.boundary)),
            basepoint=self.basepoint,
        )

    @cached_property
    def _graph(self) -> "nx.MultiGraph[int]":
        g: nx.MultiGraph[int] = nx.MultiGraph()
        g.add_nodes_from(range(self.num_vertices))
        for index, edge in enumerate(self.edges):
            g.add_edge(edge.src, edge.dst, key=index, letter=edge.letter)
        return g

    def graph(self) -> "nx.MultiGraph[int]":
        """1-skeleton keyed by edge id. Shared; do not mutate."""
        return self._graph

    @cached_property
    def out_darts(self) -> tuple[tuple[Dart, ...], ...]:
        table: list[list[Dart]] = [[] for _ in range(self.num_vertices)]
        for index, edge in enumerate(self.edges):
            table[edge.src].append(Dart(index, True))
            table[edge.dst].append(Dart(index, False))
        return tuple(tuple(row) for row in table)

    def incident(self, a: Cell, b: Cell) -> bool:
        """Whether two distinct cells share a boundary relation."""
        if a.kind > b.kind:
            a, b = b, a
        match (a.kind, b.kind):
            case ("e", "v"):
                edge = self.edges[a.index]
                return b.index in (edge.src, edge.dst)
            case ("e", "f"):
                return any(d.edge == a.index for d in self.faces[b.index])
            case ("f", "v"):
                return any(self.src(d) == b.index for d in self.faces[a.index])
            case _:
                return False


# Profiles


@dataclass(frozen=True)
class CoarseProfile:
    """Coarse distance of every cell, in quarters.

    Attributes:
        kind: ``"intrinsic"`` or ``"extrinsic"``.
        vertices: Four times the basepoint distance.
        edges: Four times the nearer endpoint distance, plus two.
        faces: Largest boundary edge value, minus one.
        collapsed: Faces whose projected boundary revisits a vertex.
    """

    kind: Literal["intrinsic", "extrinsic"]
    vertices: tuple[int, ...]
    edges: tuple[int, ...]
    faces: tuple[int, ...]
    collapsed: tuple[int, ...] = ()

    def value(self, cell: Cell) -> int:
        match cell.kind:
            case "v":
                return self.vertices[cell.index]
            case "e":
                return self.edges[cell.index]
            case "f":
                return self.faces[cell.index]

    def trace(self, path: Iterable[Cell]) -> list[int]:
        return [self.value(cell) for cell in path]

    @property
    def diameter(self) -> int:
        return max(self.vertices, default=0) // 4


def _profile_from_vertices(
    d: VanKampenDiagram,
    distances: Sequence[int],
    kind: Literal["intrinsic", "extrinsic"],
    collapsed: tuple[int, ...] = (),
) -> CoarseProfile:
    vertices = tuple(4 * dist for dist in distances)
    edges = tuple(4 * min(distances[e.src], distances[e.dst]) + 2 for e in d.edges)
    faces = tuple(max(edges[dart.edge] for dart in face) - 1 for face in d.faces)
    return CoarseProfile(kind, vertices, edges, faces, collapsed)


def coarse_profile_intrinsic(d: VanKampenDiagram) -> CoarseProfile:
    """Coarse distances measured inside the diagram.

    Example:
        >>> coarse_profile_intrinsic(square).faces
        (5,)
    """
    lengths: dict[int, int] = nx.single_source_shortest_path_length(d.graph(), d.basepoint)
    return _profile_from_vertices(d, [lengths[v] for v in range(d.num_vertices)], "intrinsic")


def project_to(d: VanKampenDiagram, ball: CayleyBall) -> list[int]:
    """Projection of every diagram vertex into ``ball``.

    Raises:
        BallTooSmall: If a projected vertex is missing from ``ball``.
    """
    if ball is d.ball:
        return list(d.projection)
    projected: list[int] = []
    for p in d.projection:
        v = ball.index.get(d.ball.nf(p))
        if v is None:
            raise BallTooSmall("diagram projects outside the ball", ball.radius)
        projected.append(v)
    return projected


def coarse_profile_extrinsic(d: VanKampenDiagram, ball: CayleyBall) -> CoarseProfile:
    """Coarse distances of the projected cells, measured in the Cayley complex.

    Raises:
        BallTooSmall: If the projection does not fit in ``ball``.
    """
    projected = project_to(d, ball)
    collapsed = tuple(
        i
        for i, face in enumerate(d.faces)
        if len({projected[d.src(dart)] for dart in face}) < len(face)
    )
    return _profile_from_vertices(
        d, [ball.dist(p) for p in projected], "extrinsic", collapsed
    )


def diameters(intrinsic: CoarseProfile, extrinsic: CoarseProfile) -> tuple[int, int]:
    """``(idiam, ediam)``: largest vertex distance in each profile."""
    return (intrinsic.diameter, extrinsic.diameter)


# Validation


@dataclass(frozen=True)
class ValidationReport:
    failures: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.failures


def validate(
    d: VanKampenDiagram, presentation: Presentation, word: Word | None = None
) -> ValidationReport:
    """Audits every structural invariant of a van Kampen diagram.

    Checks the Euler characteristic, connectivity, that every edge has
    exactly two sides among faces and boundary, the boundary circuit (and
    its label, when ``word`` is given), face cycles and labels, and that
    the projection sends the basepoint to ε and respects edge labels.
    """
    failures: list[str] = []
    render = d.alphabet.render
    if d.euler_characteristic != 1:
        failures.append(f"Euler characteristic is {d.euler_characteristic}, not 1")
    if d.num_vertices and not nx.is_connected(d.graph()):
        failures.append("1-skeleton is disconnected")

    sides = [0] * len(d.edges)
    for dart in d.boundary:
        sides[dart.edge] += 1
    for face in d.faces:
        for dart in face:
            sides[dart.edge] += 1
    failures.extend(
        f"edge {i} has {count} sides" for i, count in enumerate(sides) if count != 2
    )

    at = d.basepoint
    for position, dart in enumerate(d.boundary):
        if d.src(dart) != at:
            failures.append(f"boundary breaks at position {position}")
            break
        at = d.dst(dart)
    else:
        if at != d.basepoint:
            failures.append("boundary does not return to the basepoint")
    if word is not None and d.word != word:
        failures.append(f"boundary reads {render(d.word)!r}, expected {render(word)!r}")

    for i, face in enumerate(d.faces):
        if any(d.dst(face[j - 1]) != d.src(face[j]) for j in range(len(face))):
            failures.append(f"face {i} is not a closed cycle")
        elif d.label(face) not in presentation:
            failures.append(f"face {i} reads {render(d.label(face))!r}, not a relator")

    if d.projection and d.projection[d.basepoint] != 0:
        failures.append("basepoint does not project to the identity")
    for i, edge in enumerate(d.edges):
        if d.ball.step(d.projection[edge.src], edge.letter) != d.projection[edge.dst]:
            failures.append(f"edge {i} does not project onto a ball edge")
    return ValidationReport(tuple(failures))


def check_normal_form_paths(d: VanKampenDiagram) -> list[int]:
    """Vertices not reachable from the basepoint along their tree normal form."""
    failing: list[int] = []
    for v in range(d.num_vertices):
        current = {d.basepoint}
        for letter in d.ball.word(d.projection[v]):
            current = {
                d.dst(dart)
                for u in current
                for dart in d.out_darts[u]
                if d.letter(dart) == letter
            }
        if v not in current:
            failing.append(v)
    return failing


# Construction


@dataclass
class CellMap:
    """Where the cells of a glued diagram landed in a builder."""

    vertices: list[int]
    edges: list[int]
    faces: list[int]

    def dart(self, dart: Dart) -> Dart:
        return Dart(self.edges[dart.edge], dart.forward)

    def cell(self, cell: Cell) -> Cell:
        match cell.kind:
            case "v":
                return Cell("v", self.vertices[cell.index])
            case "e":
                return Cell("e", self.edges[cell.index])
            case "f":
                return Cell("f", self.faces[cell.index])

    def path(self, path: Iterable[Cell]) -> CombingPath:
        return tuple(self.cell(c) for c in path)


@dataclass
class Remap:
    """Builder ids to frozen diagram ids."""

    vertices: dict[int, int]
    edges: dict[int, Dart]

    def dart(self, dart: Dart) -> Dart:
        target = self.edges[dart.edge]
        return target if dart.forward else target.flip()

    def cell(self, cell: Cell) -> Cell:
        match cell.kind:
            case "v":
                return Cell("v", self.vertices[cell.index])
            case "e":
                return Cell("e", self.edges[cell.index].edge)
            case "f":
                return cell

    def path(self, path: Iterable[Cell]) -> CombingPath:
        mapped: list[Cell] = []
        for cell in path:
            target = self.cell(cell)
            if not mapped or mapped[-1] != target:
                mapped.append(target)
        return tuple(mapped)


class DiagramBuilder:
    """Mutable diagram under construction.

    Gluing identifies vertices through a union-find and folds edges onto
    each other, recording the relative direction of every folded edge.
    Vertex 0 is the basepoint.
    """

    def __init__(self, ball: CayleyBall) -> None:
        self.ball = ball
        self._projection: list[int] = []
        self._edges: list[DiagramEdge] = []
        self._faces: list[list[Dart]] = []
        self._vertices: UnionFind = UnionFind()
        self._folded: dict[int, Dart] = {}
        self.add_vertex(0)

    def add_vertex(self, projection: int) -> int:
        self._projection.append(projection)
        v = len(self._projection) - 1
        self._vertices.union(v)
        return v

    def find(self, v: int) -> int:
        return self._vertices[v]

    def resolve(self, dart: Dart) -> Dart:
        """The surviving dart a folded dart was identified with."""
        while dart.edge in self._folded:
            target = self._folded[dart.edge]
            dart = target if dart.forward else target.flip()
        return dart

    def src(self, dart: Dart) -> int:
        edge = self._edges[dart.edge]
        return self.find(edge.src if dart.forward else edge.dst)

    def dst(self, dart: Dart) -> int:
        edge = self._edges[dart.edge]
        return self.find(edge.dst if dart.forward else edge.src)

    def projection(self, v: int) -> int:
        return self._projection[v]

    def letter(self, dart: Dart) -> int:
        edge = self._edges[dart.edge]
        return edge.letter if dart.forward else self.ball.alphabet.inverse(edge.letter)

    def add_edge(self, src: int, dst: int, letter: int) -> Dart:
        if self.ball.step(self._projection[src], letter) != self._projection[dst]:
            panic(f"edge {letter} from vertex {src} does not match the ball")
        self._edges.append(DiagramEdge(src, dst, letter))
        return Dart(len(self._edges) - 1, True)

    def trace_new(self, start: int, w: Word) -> list[Dart]:
        """Adds a fresh path labelled ``w`` from ``start``.

        Raises:
            BallTooSmall: If the path leaves the ball.
        """
        darts: list[Dart] = []
        at = start
        for letter in w:
            t = self.ball.step(self._projection[at], letter)
            if t is None:
                raise BallTooSmall(
                    f"path {self.ball.alphabet.render(w)!r} leaves the ball", self.ball.radius
                )
            nxt = self.add_vertex(t)
            darts.append(self.add_edge(at, nxt, letter))
            at = nxt
        return darts

    def end_of(self, start: int, darts: Sequence[Dart]) -> int:
        return self.dst(darts[-1]) if darts else start

    def add_face(self, darts: Sequence[Dart]) -> int:
        self._faces.append(list(darts))
        return len(self._faces) - 1

    def identify(self, u: int, v: int) -> None:
        ru, rv = self.find(u), self.find(v)
        if ru == rv:
            return
        if self._projection[ru] != self._projection[rv]:
            panic(f"gluing identifies vertices {u} and {v} over different group elements")
        self._vertices.union(ru, rv)

    def fold(self, kept: Dart, other: Dart) -> None:
        """Identifies two darts with the same endpoints and label."""
        kept, other = self.resolve(kept), self.resolve(other)
        self.identify(self.src(kept), self.src(other))
        self.identify(self.dst(kept), self.dst(other))
        if kept.edge == other.edge:
            if kept.forward != other.forward:
                panic("fold would identify an edge with its own reverse")
            return
        self._folded[other.edge] = Dart(kept.edge, kept.forward == other.forward)

    def glue(
        self,
        other: VanKampenDiagram,
        pairs: Iterable[tuple[Dart, Dart]] = (),
        anchor: tuple[int, int] | None = None,
        translate: int = 0,
    ) -> CellMap:
        """Copies ``other`` in and folds each ``(own dart, other dart)`` pair.

        ``anchor`` additionally identifies one own vertex with one vertex of
        ``other``. ``translate`` left-multiplies every projection of ``other``
        by that ball vertex, for diagrams glued away from ε. Gluings that
        would identify cells over different group elements are defects.

        Raises:
            BallTooSmall: If a translated vertex leaves the ball.
        """
        projection = (
            list(other.projection) if other.ball is self.ball else project_to(other, self.ball)
        )
        if translate:
            projection = [self.ball.walk(translate, self.ball.word(p))[-1] for p in projection]
        vertices = [self.add_vertex(p) for p in projection]
        edges: list[int] = []
        for edge in other.edges:
            self._edges.append(DiagramEdge(vertices[edge.src], vertices[edge.dst], edge.letter))
            edges.append(len(self._edges) - 1)
        faces = [
            self.add_face([Dart(edges[d.edge], d.forward) for d in face]) for face in other.faces
        ]
        mapping = CellMap(vertices, edges, faces)
        if anchor is not None:
            self.identify(anchor[0], vertices[anchor[1]])
        for own, theirs in pairs:
            self.fold(own, mapping.dart(theirs))
        logger.debug("glued %d vertices, %d faces", len(vertices), len(faces))
        return mapping

    def freeze(self, boundary: Sequence[Dart]) -> tuple[VanKampenDiagram, Remap]:
        """Compacts ids and returns the immutable diagram with the id remapping."""
        vertex_ids: dict[int, int] = {}
        order = [self.find(0)] + [self.find(v) for v in range(len(self._projection))]
        for root in order:
            vertex_ids.setdefault(root, len(vertex_ids))
        projection = [0] * len(vertex_ids)
        for root, new in vertex_ids.items():
            projection[new] = self._projection[root]

        edge_ids: dict[int, int] = {}
        edges: list[DiagramEdge] = []
        for index, edge in enumerate(self._edges):
            if index in self._folded:
                continue
            edge_ids[index] = len(edges)
            edges.append(
                DiagramEdge(
                    vertex_ids[self.find(edge.src)],
                    vertex_ids[self.find(edge.dst)],
                    edge.letter,
                )
            )
        edge_targets: dict[int, Dart] = {}
        for index in range(len(self._edges)):
            resolved = self.resolve(Dart(index, True))
            edge_targets[index] = Dart(edge_ids[resolved.edge], resolved.forward)
        remap = Remap(
            {v: vertex_ids[self.find(v)] for v in range(len(self._projection))}, edge_targets
        )
        diagram = VanKampenDiagram(
            ball=self.ball,
            projection=tuple(projection),
            edges=tuple(edges),
            faces=tuple(tuple(remap.dart(d) for d in face) for face in self._faces),
            boundary=tuple(remap.dart(d) for d in boundary),
        )
        return diagram, remap


def segment(ball: CayleyBall, w: Word) -> tuple[VanKampenDiagram, list[Dart]]:
    """Diagram without 2-cells for ``w·w⁻¹``, and the darts of the ``w`` path."""
    builder = DiagramBuilder(ball)
    darts = builder.trace_new(0, w)
    diagram, remap = builder.freeze(darts + reverse_darts(darts))
    return diagram, [remap.dart(d) for d in darts]


def boundary_path(d: VanKampenDiagram, darts: Sequence[Dart]) -> CombingPath:
    """Cell sequence of the path along ``darts`` from the basepoint."""
    cells = [vertex(d.basepoint)]
    for dart in darts:
        cells.append(Cell("e", dart.edge))
        cells.append(vertex(d.dst(dart)))
    return tuple(cells)
