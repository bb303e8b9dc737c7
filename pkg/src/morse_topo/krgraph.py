"""The Kronrod-Reeb graph: the quotient of a surface by level-set components.

Vertices carry a kind (extremum, ordinary saddle, degree-two saddle, or
boundary circle) and an exact rational height; edges are oriented by
increasing height.  For circle-valued maps each edge also carries a lift of
its height interval to the real line, so winding is explicit and cutting at
a regular level is exact.

A graph for the critical-point-free fibration of the torus (or Klein
bottle) over the circle has no vertices at all; it is represented by a
single free-loop edge whose lift interval has integer length equal to the
winding number.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .surface import CriticalType, Surface, Target, validate_critical_type


class VertexKind(enum.Enum):
    MIN = "Min"
    MAX = "Max"
    SADDLE3 = "Saddle3"
    STAR2 = "Star2"
    BOUNDARY = "BoundaryCircle"


_CRITICAL_KINDS = {VertexKind.MIN, VertexKind.MAX, VertexKind.SADDLE3, VertexKind.STAR2}

_DEGREE = {
    VertexKind.MIN: 1,
    VertexKind.MAX: 1,
    VertexKind.SADDLE3: 3,
    VertexKind.STAR2: 2,
    VertexKind.BOUNDARY: 1,
}


@dataclass(frozen=True)
class KRVertex:
    id: int
    kind: VertexKind
    height: Fraction
    boundary_label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "height", Fraction(self.height))
        if (self.kind is VertexKind.BOUNDARY) != (self.boundary_label is not None):
            raise ValueError("boundary label exactly on BoundaryCircle vertices")


@dataclass(frozen=True)
class KREdge:
    """Oriented edge from ``tail`` (lower) to ``head`` (higher).

    For circle targets ``lift`` is the edge's height interval on the real
    line, congruent mod 1 to the endpoint heights.  A free loop has
    ``tail is None and head is None`` and an integer-length lift.
    """

    id: int
    tail: int | None
    head: int | None
    lift: tuple[Fraction, Fraction] | None = None

    def __post_init__(self):
        if self.lift is not None:
            lo, hi = self.lift
            object.__setattr__(self, "lift", (Fraction(lo), Fraction(hi)))


class KRGraph:
    """Vertex/edge container with the validity checks of a generic graph.

    Treat instances as immutable once constructed; every operation in this
    package builds new graphs rather than editing them in place.
    """

    def __init__(
        self,
        target: Target,
        vertices: Iterable[KRVertex],
        edges: Iterable[KREdge],
    ):
        self.target = target
        self.vertices: dict[int, KRVertex] = {}
        for v in vertices:
            if v.id in self.vertices:
                raise ValueError(f"duplicate vertex id {v.id}")
            self.vertices[v.id] = v
        self.edges: list[KREdge] = list(edges)
        self._validate()

    # -- basic accessors ----------------------------------------------------

    def degree(self, vid: int) -> int:
        return sum((e.tail == vid) + (e.head == vid) for e in self.edges)

    def boundary_labels(self) -> list[str]:
        return [
            v.boundary_label
            for v in self.vertices.values()
            if v.kind is VertexKind.BOUNDARY
        ]

    def counts(self) -> tuple[int, int, int]:
        """(c0, c1, c2): minima, saddles of both kinds, maxima."""
        c0 = c1 = c2 = 0
        for v in self.vertices.values():
            if v.kind is VertexKind.MIN:
                c0 += 1
            elif v.kind is VertexKind.MAX:
                c2 += 1
            elif v.kind in (VertexKind.SADDLE3, VertexKind.STAR2):
                c1 += 1
        return c0, c1, c2

    def has_star(self) -> bool:
        return any(v.kind is VertexKind.STAR2 for v in self.vertices.values())

    def is_free_loop(self) -> bool:
        return not self.vertices and len(self.edges) == 1

    def boundary_sign(self, vid: int) -> int:
        """+1 when the surface lies below the boundary circle, -1 above."""
        v = self.vertices[vid]
        if v.kind is not VertexKind.BOUNDARY:
            raise ValueError("not a boundary vertex")
        for e in self.edges:
            if e.head == vid:
                return 1
            if e.tail == vid:
                return -1
        raise ValueError("boundary vertex has no incident edge")

    # -- validation ----------------------------------------------------------

    def _edge_endpoint_heights(self, e: KREdge) -> tuple[Fraction, Fraction]:
        return self.vertices[e.tail].height, self.vertices[e.head].height

    def _validate(self):
        if self.is_free_loop():
            e = self.edges[0]
            if self.target is not Target.CIRCLE or e.tail is not None or e.head is not None:
                raise ValueError("free loop requires a Circle target and no vertices")
            lo, hi = e.lift
            if hi <= lo or (hi - lo).denominator != 1:
                raise ValueError("free loop winding must be a positive integer")
            return
        for e in self.edges:
            if e.tail is None or e.head is None:
                raise ValueError("only a single free loop may omit endpoints")
            if e.tail not in self.vertices or e.head not in self.vertices:
                raise ValueError(f"edge {e.id} references unknown vertices")
            if self.target is Target.LINE:
                if e.lift is not None:
                    raise ValueError("Line-target edges carry no lift")
                lo, hi = self._edge_endpoint_heights(e)
                if not lo < hi:
                    raise ValueError(f"edge {e.id} must increase in height")
            else:
                if e.lift is None:
                    raise ValueError("Circle-target edges need a lift interval")
                lo, hi = e.lift
                if not lo < hi:
                    raise ValueError(f"edge {e.id} lift must be increasing")
                tl, hd = self._edge_endpoint_heights(e)
                if (lo - tl).denominator != 1 or (hi - hd).denominator != 1:
                    raise ValueError(
                        f"edge {e.id} lift endpoints must lift the vertex heights"
                    )
        if self.target is Target.CIRCLE:
            for v in self.vertices.values():
                if not 0 <= v.height < 1:
                    raise ValueError("Circle-target heights live in [0, 1)")
        for v in self.vertices.values():
            d = self.degree(v.id)
            if d != _DEGREE[v.kind]:
                raise ValueError(
                    f"vertex {v.id} ({v.kind.value}) has degree {d}, "
                    f"expected {_DEGREE[v.kind]}"
                )
        crit_heights = [
            v.height for v in self.vertices.values() if v.kind in _CRITICAL_KINDS
        ]
        if len(set(crit_heights)) != len(crit_heights):
            raise ValueError("critical vertices must have pairwise distinct heights")
        labels = self.boundary_labels()
        if len(set(labels)) != len(labels):
            raise ValueError("boundary labels must be distinct")
        if self.vertices and not self._connected():
            raise ValueError("graph must be connected")

    def _connected(self) -> bool:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for e in self.edges:
            adj[e.tail].add(e.head)
            adj[e.head].add(e.tail)
        start = next(iter(self.vertices))
        seen = {start}
        stack = [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)


def critical_type_of(graph: KRGraph, s: Surface, q: Sequence[int]) -> CriticalType:
    """Read the critical type off a graph, attaching the homotopy vector q."""
    if graph.has_star() and s.orientable:
        raise ValueError("degree-two saddles require a non-orientable surface")
    if set(graph.boundary_labels()) != set(s.boundary):
        raise ValueError("graph boundary labels do not match the surface")
    c0, c1, c2 = graph.counts()
    eps = {
        v.boundary_label: graph.boundary_sign(v.id)
        for v in graph.vertices.values()
        if v.kind is VertexKind.BOUNDARY
    }
    k = CriticalType(graph.target, tuple(int(x) for x in q), c0, c1, c2, eps)
    problems = validate_critical_type(s, k)
    if problems:
        raise ValueError("; ".join(problems))
    return k


# ---------------------------------------------------------------------------
# Regular levels, fibers and cutting


def _line_crossings(graph: KRGraph, c: Fraction) -> list[KREdge]:
    out = []
    for e in graph.edges:
        lo, hi = graph._edge_endpoint_heights(e)
        if lo < c < hi:
            out.append(e)
    return out


def _circle_crossings(graph: KRGraph, c: Fraction) -> list[tuple[KREdge, Fraction]]:
    """(edge, lift point) pairs where the level c + Z meets an edge lift.

    Intervals are open at both ends for anchored edges (regularity of c
    keeps the endpoints away) and half-open [lo, hi) for the free loop,
    whose endpoints are an arbitrary base point rather than vertices.
    """
    out = []
    for e in graph.edges:
        lo, hi = e.lift
        t = c + math.ceil(lo - c)  # smallest representative >= lo
        if e.tail is not None and t == lo:
            raise ValueError(f"level {c} is not regular on edge {e.id}")
        while t < hi:
            out.append((e, t))
            t += 1
    return out


def _require_regular(graph: KRGraph, c: Fraction):
    if graph.target is Target.LINE:
        if any(v.height == c for v in graph.vertices.values()):
            raise ValueError(f"level {c} is not regular (vertex height)")
    else:
        frac = c - math.floor(c)
        if any(v.height == frac for v in graph.vertices.values()):
            raise ValueError(f"level {c} is not regular (vertex height mod 1)")


def regular_fiber_components(graph: KRGraph, c) -> int:
    """Number of circles in the fiber over a regular value."""
    c = Fraction(c)
    _require_regular(graph, c)
    if graph.target is Target.LINE:
        return len(_line_crossings(graph, c))
    return len(_circle_crossings(graph, c))


class PieceClass(enum.Enum):
    Q0 = "Q0"  # touches only the lower cut boundary
    Q01 = "Q01"  # spans from the lower to the upper cut boundary
    Q1 = "Q1"  # touches only the upper cut boundary


@dataclass(frozen=True)
class CutEnd:
    """A severed edge end: side 0 sits at the cut going up, side 1 coming down."""

    side: int
    lift: Fraction


@dataclass(frozen=True)
class PieceVertex:
    id: int
    kind: VertexKind
    lift: Fraction
    boundary_label: str | None = None


@dataclass(frozen=True)
class PieceEdge:
    lower: int | CutEnd
    upper: int | CutEnd


@dataclass(frozen=True)
class CutPiece:
    vertices: tuple[PieceVertex, ...]
    edges: tuple[PieceEdge, ...]
    piece_class: PieceClass


@dataclass(frozen=True)
class CutDecomposition:
    level: Fraction
    pieces: tuple[CutPiece, ...]

    def by_class(self, cls: PieceClass) -> list[CutPiece]:
        return [p for p in self.pieces if p.piece_class is cls]


@dataclass
class _Fragment:
    """A maximal uncut stretch of one edge.

    ``lower``/``upper`` are vertex ids or None for a cut attachment; the
    raw interval comes from the edge lift and is later shifted by a
    per-fragment integer so that lifts agree across each piece.
    """

    lower: int | None
    upper: int | None
    lo: Fraction
    hi: Fraction
    shift: int = 0


def _edge_fragments(e: KREdge, points: list[Fraction]) -> list[_Fragment]:
    lo, hi = e.lift
    marks = [lo] + sorted(points) + [hi]
    frags = []
    for i in range(len(marks) - 1):
        frags.append(
            _Fragment(
                e.tail if i == 0 else None,
                e.head if i == len(marks) - 2 else None,
                marks[i],
                marks[i + 1],
            )
        )
    if e.tail is None and len(frags) > 1:
        # free loop: the stretches on either side of the base point wrap
        # into one segment (shift the upper stretch down by the winding)
        first, last = frags[0], frags[-1]
        frags = frags[1:-1]
        frags.append(_Fragment(None, None, last.lo - (hi - lo), first.hi))
    return frags


def cut_at_level(graph: KRGraph, c) -> CutDecomposition:
    """Sever every edge crossing the level c + Z and classify the pieces.

    Each crossing produces a side-1 attachment on the stretch below it and
    a side-0 attachment on the stretch above it.  Pieces are the connected
    components of what remains.  Every crossing is severed, so no piece
    winds: a traversal can shift each fragment's interval by an integer to
    obtain consistent lifts, and each piece then occupies a single band
    between consecutive copies of the cut level (normalised here to
    [c, c + 1]).
    """
    if graph.target is not Target.CIRCLE:
        raise ValueError("cutting is defined for Circle-target graphs")
    c = Fraction(c)
    _require_regular(graph, c)
    crossings = _circle_crossings(graph, c)
    if not crossings:
        raise ValueError(f"level {c} crosses no edge; the cut is trivial")

    cut_points: dict[int, list[Fraction]] = {}
    for e, t in crossings:
        cut_points.setdefault(e.id, []).append(t)
    fragments: list[_Fragment] = []
    for e in graph.edges:
        if e.id in cut_points:
            fragments.extend(_edge_fragments(e, cut_points[e.id]))
        else:
            fragments.append(_Fragment(e.tail, e.head, e.lift[0], e.lift[1]))

    by_vertex: dict[int, list[int]] = {}
    for idx, f in enumerate(fragments):
        for vid in (f.lower, f.upper):
            if vid is not None:
                by_vertex.setdefault(vid, []).append(idx)

    unseen = set(range(len(fragments)))
    pieces = []
    while unseen:
        seed = min(unseen)
        stack = [seed]
        unseen.discard(seed)
        members = [seed]
        vertex_lift: dict[int, Fraction] = {}
        while stack:
            idx = stack.pop()
            f = fragments[idx]
            for vid, raw in ((f.lower, f.lo), (f.upper, f.hi)):
                if vid is None:
                    continue
                lift = raw + f.shift
                if vid not in vertex_lift:
                    vertex_lift[vid] = lift
                elif vertex_lift[vid] != lift:
                    raise ValueError("inconsistent lifts inside a cut piece")
                for nxt in by_vertex[vid]:
                    if nxt not in unseen:
                        continue
                    nf = fragments[nxt]
                    raw_end = nf.lo if nf.lower == vid else nf.hi
                    delta = vertex_lift[vid] - raw_end
                    if delta.denominator != 1:
                        raise ValueError("fragment shifts must be integral")
                    nf.shift = int(delta)
                    unseen.discard(nxt)
                    stack.append(nxt)
                    members.append(nxt)
        pieces.append(_assemble_piece(graph, fragments, members, vertex_lift, c))
    pieces.sort(key=lambda p: (sorted(v.id for v in p.vertices), p.piece_class.value))
    return CutDecomposition(c, tuple(pieces))


def _assemble_piece(
    graph: KRGraph,
    fragments: list[_Fragment],
    members: list[int],
    vertex_lift: dict[int, Fraction],
    c: Fraction,
) -> CutPiece:
    # normalise the piece into the band [c, c + 1]
    lifts = list(vertex_lift.values())
    for idx in members:
        f = fragments[idx]
        lifts.extend((f.lo + f.shift, f.hi + f.shift))
    band = math.floor(min(x - c for x in lifts))
    offset = -band
    edges = []
    has0 = has1 = False
    for idx in members:
        f = fragments[idx]
        if f.lower is not None:
            plow: int | CutEnd = f.lower
        else:
            plow = CutEnd(0, f.lo + f.shift + offset)
            has0 = True
        if f.upper is not None:
            pup: int | CutEnd = f.upper
        else:
            pup = CutEnd(1, f.hi + f.shift + offset)
            has1 = True
        edges.append(PieceEdge(plow, pup))
    if has0 and has1:
        cls = PieceClass.Q01
    elif has0:
        cls = PieceClass.Q0
    elif has1:
        cls = PieceClass.Q1
    else:
        raise ValueError("piece does not reach the cut level")
    pvs = tuple(
        PieceVertex(
            vid,
            graph.vertices[vid].kind,
            lift + offset,
            graph.vertices[vid].boundary_label,
        )
        for vid, lift in sorted(vertex_lift.items())
    )
    return CutPiece(pvs, tuple(edges), cls)


def piece_to_line_graph(
    piece: CutPiece, b0_label: str = "!B0", b1_label: str = "~B1"
) -> KRGraph:
    """View a cut piece as a Line-target graph.

    Attachment points become boundary-circle vertices labelled ``b0_label``
    (side 0) and ``b1_label`` (side 1); multiple attachments on a side get a
    numeric suffix.  Heights are the lifts, so the vertical order of the
    piece is preserved.
    """
    vertices = [
        KRVertex(v.id, v.kind, v.lift, v.boundary_label) for v in piece.vertices
    ]
    next_id = max((v.id for v in piece.vertices), default=-1) + 1
    counters = {0: 0, 1: 0}
    totals = {0: 0, 1: 0}
    for e in piece.edges:
        for end in (e.lower, e.upper):
            if isinstance(end, CutEnd):
                totals[end.side] += 1
    edges = []
    for eid, e in enumerate(piece.edges):
        ends = []
        for end in (e.lower, e.upper):
            if isinstance(end, CutEnd):
                base = b0_label if end.side == 0 else b1_label
                n = counters[end.side]
                counters[end.side] += 1
                label = base if totals[end.side] == 1 else f"{base}:{n}"
                vertices.append(
                    KRVertex(next_id, VertexKind.BOUNDARY, end.lift, label)
                )
                ends.append(next_id)
                next_id += 1
            else:
                ends.append(end)
        edges.append(KREdge(eid, ends[0], ends[1]))
    return KRGraph(Target.LINE, vertices, edges)


# ---------------------------------------------------------------------------
# Isomorphism and DOT output


def kr_isomorphic(a: KRGraph, b: KRGraph) -> bool:
    """Line-graph isomorphism respecting kinds, labels and height order.

    Generic graphs have distinct critical heights, so ordering every vertex
    by (height, label) pins the only possible correspondence; it remains to
    compare kinds, labels and the edge relation under it.
    """
    if a.target is not Target.LINE or b.target is not Target.LINE:
        raise ValueError("isomorphism comparison is for Line-target graphs")
    if len(a.vertices) != len(b.vertices) or len(a.edges) != len(b.edges):
        return False

    def order(g: KRGraph):
        vs = sorted(g.vertices.values(), key=lambda v: (v.height, v.boundary_label or ""))
        index = {v.id: i for i, v in enumerate(vs)}
        shape = [(v.kind, v.boundary_label) for v in vs]
        rel = sorted((index[e.tail], index[e.head]) for e in g.edges)
        return shape, rel

    return order(a) == order(b)


_DOT_SHAPE = {
    VertexKind.MIN: "point",
    VertexKind.MAX: "point",
    VertexKind.SADDLE3: "triangle",
    VertexKind.STAR2: "star",
    VertexKind.BOUNDARY: "doublecircle",
}


def to_dot(graph: KRGraph, name: str = "kr") -> str:
    """Deterministic GraphViz DOT rendering of a graph."""
    lines = [f"digraph {name} {{"]
    lines.append(f'  graph [target="{graph.target.value}"];')
    for vid in sorted(graph.vertices):
        v = graph.vertices[vid]
        attrs = [
            f"shape={_DOT_SHAPE[v.kind]}",
            f'kind="{v.kind.value}"',
            f'height="{v.height}"',
        ]
        if v.boundary_label is not None:
            attrs.append(f'boundary="{v.boundary_label}"')
        lines.append(f"  v{vid} [{', '.join(attrs)}];")
    for e in sorted(graph.edges, key=lambda e: e.id):
        attrs = [f"id={e.id}"]
        if e.lift is not None:
            attrs.append(f'lift="{e.lift[0]}:{e.lift[1]}"')
        tail = f"v{e.tail}" if e.tail is not None else "loop"
        head = f"v{e.head}" if e.head is not None else "loop"
        if e.tail is None:
            lines.append('  loop [shape=none, label=""];')
        lines.append(f"  {tail} -> {head} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
