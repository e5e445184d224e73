"""JSON, DOT, SVG, CSV and text renderings of balls, diagrams and combings."""

import json
import logging
from pathlib import Path
from typing import Mapping

import networkx as nx
import numpy as np

from .cayley import CayleyBall
from .diagram import Cell, CoarseProfile, VanKampenDiagram
from .filling import DiagramCombing, EdgeCombing

logger = logging.getLogger(__name__)

SVG_SIZE = 480
SVG_MARGIN = 24


def dumps(payload: object) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def cell_name(cell: Cell) -> str:
    return f"{cell.kind}{cell.index}"


def ball_json(ball: CayleyBall) -> dict[str, object]:
    render = ball.alphabet.render
    return {
        "radius": ball.radius,
        "generators": list(ball.alphabet.names),
        "prefix_closed": ball.prefix_closed,
        "elements": [
            {"id": v, "nf": render(ball.nf(v)), "dist": ball.dist(v), "word": render(ball.word(v))}
            for v in range(len(ball))
        ],
        "edges": [
            [e.source, ball.alphabet.names[e.letter], e.target]
            for e in ball.edges()
            if e.letter <= ball.alphabet.inverse(e.letter)
        ],
    }


def ball_dot(ball: CayleyBall) -> str:
    """Graphviz source with one arc per edge, labelled by its non-inverse letter."""
    names = ball.alphabet.names
    lines = [f"digraph ball_{ball.radius} {{"]
    for v in range(len(ball)):
        label = ball.alphabet.render(ball.nf(v)) or "ε"
        lines.append(f'  {v} [label="{label}"];')
    for e in ball.edges():
        if e.letter <= ball.alphabet.inverse(e.letter):
            lines.append(f'  {e.source} -> {e.target} [label="{names[e.letter]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def diagram_json(d: VanKampenDiagram, profile: CoarseProfile | None = None) -> dict[str, object]:
    """Vertices with projections, edges, faces as signed edge ids, and the boundary."""
    render = d.alphabet.render

    def signed(forward: bool, edge: int) -> int:
        return edge + 1 if forward else -(edge + 1)

    payload: dict[str, object] = {
        "word": render(d.word),
        "vertices": [
            {"id": v, "projection": p, "nf": render(d.ball.nf(p))}
            for v, p in enumerate(d.projection)
        ],
        "edges": [
            {"id": i, "src": e.src, "dst": e.dst, "letter": d.alphabet.names[e.letter]}
            for i, e in enumerate(d.edges)
        ],
        "faces": [[signed(x.forward, x.edge) for x in face] for face in d.faces],
        "boundary": [signed(x.forward, x.edge) for x in d.boundary],
    }
    if profile is not None:
        payload["profile"] = {
            "kind": profile.kind,
            "vertices": list(profile.vertices),
            "edges": list(profile.edges),
            "faces": list(profile.faces),
            "collapsed": list(profile.collapsed),
        }
    return payload


def _layout(d: VanKampenDiagram) -> np.ndarray:
    g: nx.Graph[int] = nx.Graph(d.graph())
    if d.num_vertices == 1:
        return np.full((1, 2), SVG_SIZE / 2)
    try:
        positions = nx.planar_layout(g)
    except nx.NetworkXException:
        logger.debug("diagram 1-skeleton has no planar embedding, using a circle")
        positions = nx.circular_layout(g)
    coords = np.array([positions[v] for v in range(d.num_vertices)], dtype=float)
    low, high = coords.min(axis=0), coords.max(axis=0)
    span = np.where(high - low > 0, high - low, 1.0)
    return SVG_MARGIN + (coords - low) / span * (SVG_SIZE - 2 * SVG_MARGIN)


def diagram_svg(d: VanKampenDiagram) -> str:
    """A drawing of the 1-skeleton with letter labels; the basepoint is filled."""
    coords = _layout(d)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}">',
        f"<title>{d.alphabet.render(d.word) or 'ε'}</title>",
    ]
    for e in d.edges:
        (x1, y1), (x2, y2) = coords[e.src], coords[e.dst]
        mx, my = (x1 + x2) / 2, (y1 + y2) / 2
        parts.append(
            f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{mx:.1f}" y="{my:.1f}" font-size="10">{d.alphabet.names[e.letter]}</text>'
        )
    for v, (x, y) in enumerate(coords):
        fill = "black" if v == d.basepoint else "white"
        parts.append(
            f'<circle cx="{x:.1f}" cy="{y:.1f}" r="3" stroke="black" fill="{fill}"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def combing_json(combing: EdgeCombing | DiagramCombing) -> dict[str, object]:
    """Cell-name sequences keyed by the sample they reach."""
    return {
        "samples": [
            {"target": cell_name(target), "path": [cell_name(c) for c in path]}
            for target, path in combing.samples()
        ]
    }


def write_artifacts(out_dir: Path, artifacts: Mapping[str, str]) -> list[Path]:
    """Writes ``{file name: text}`` under ``out_dir``, creating it if needed."""
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for name, text in sorted(artifacts.items()):
        path = out_dir / name
        path.write_text(text, encoding="utf-8")
        written.append(path)
        logger.info("wrote %s", path)
    return written
