"""Triangle meshes with exact rational heights and Reeb-graph extraction.

A mesh is a triangulated compact surface whose vertices carry heights in
Q.  Boundary circles are explicit vertex cycles, each at a constant
height.  The extraction sweep classifies interior vertices by the
connectivity of their lower links, takes one sample level inside every gap
between consecutive event heights, computes the level-set circles there by
brute-force edge-crossing connectivity, and links circles across each
event through the connectivity of the slab between the two neighbouring
sample levels.  Everything is exact; inputs whose event heights collide
are rejected rather than perturbed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .krgraph import KREdge, KRGraph, KRVertex, VertexKind
from .surface import CriticalType, Surface, Target, validate_critical_type


class MeshFormatError(ValueError):
    """Raised for unparseable mesh text."""


class NotMorseError(ValueError):
    """The height function violates a Morse condition (monkey saddle,
    boundary tangency, non-constant boundary height)."""


class NotGenericError(ValueError):
    """Flat interior edge or coinciding event heights."""


@dataclass(frozen=True)
class HeightMesh:
    orientable: bool
    heights: tuple[Fraction, ...]  # indexed by vertex id 0..n-1
    triangles: tuple[tuple[int, int, int], ...]
    boundary_cycles: tuple[tuple[str, tuple[int, ...]], ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "heights", tuple(Fraction(h) for h in self.heights)
        )
        object.__setattr__(
            self,
            "triangles",
            tuple(tuple(int(v) for v in t) for t in self.triangles),
        )
        object.__setattr__(
            self,
            "boundary_cycles",
            tuple(
                (str(label), tuple(int(v) for v in cyc))
                for label, cyc in self.boundary_cycles
            ),
        )
        _check_mesh(self)

    @property
    def num_vertices(self) -> int:
        return len(self.heights)

    def edges(self) -> set[tuple[int, int]]:
        out = set()
        for a, b, c in self.triangles:
            out.update({_norm(a, b), _norm(b, c), _norm(a, c)})
        return out

    def euler_characteristic(self) -> int:
        return self.num_vertices - len(self.edges()) + len(self.triangles)

    def boundary_vertex_cycle(self, vid: int) -> str | None:
        for label, cyc in self.boundary_cycles:
            if vid in cyc:
                return label
        return None


def _norm(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def _check_mesh(m: HeightMesh):
    n = m.num_vertices
    if n == 0 or not m.triangles:
        raise ValueError("mesh needs vertices and triangles")
    used = set()
    edge_count: dict[tuple[int, int], int] = {}
    for t in m.triangles:
        if len(set(t)) != 3:
            raise ValueError(f"degenerate triangle {t}")
        for v in t:
            if not 0 <= v < n:
                raise ValueError(f"triangle vertex {v} out of range")
            used.add(v)
        for e in (_norm(t[0], t[1]), _norm(t[1], t[2]), _norm(t[0], t[2])):
            edge_count[e] = edge_count.get(e, 0) + 1
    if used != set(range(n)):
        raise ValueError("every vertex must lie on a triangle")

    boundary_edges = set()
    boundary_vertices: dict[int, str] = {}
    for label, cyc in m.boundary_cycles:
        if len(cyc) < 3 or len(set(cyc)) != len(cyc):
            raise ValueError(f"boundary cycle {label!r} must be a simple cycle")
        heights = {m.heights[v] for v in cyc}
        if len(heights) != 1:
            raise NotMorseError(
                f"boundary cycle {label!r} is not at constant height"
            )
        for v in cyc:
            if v in boundary_vertices:
                raise ValueError(f"vertex {v} lies on two boundary cycles")
            boundary_vertices[v] = label
        for i in range(len(cyc)):
            e = _norm(cyc[i], cyc[(i + 1) % len(cyc)])
            if e in boundary_edges:
                raise ValueError(f"repeated boundary edge {e}")
            boundary_edges.add(e)
    labels = [label for label, _ in m.boundary_cycles]
    if len(set(labels)) != len(labels):
        raise ValueError("boundary labels must be distinct")

    for e, cnt in edge_count.items():
        if e in boundary_edges:
            if cnt != 1:
                raise ValueError(f"boundary edge {e} borders {cnt} triangles")
        elif cnt != 2:
            raise ValueError(
                f"interior edge {e} borders {cnt} triangles (surface is not "
                "closed there or not a manifold)"
            )
    for e in boundary_edges:
        if e not in edge_count:
            raise ValueError(f"boundary edge {e} is not a mesh edge")

    # flat edges are allowed only along a boundary cycle
    for a, b in edge_count:
        if m.heights[a] == m.heights[b] and _norm(a, b) not in boundary_edges:
            raise NotGenericError(f"flat interior edge {(a, b)}")

    if not _mesh_connected(m, edge_count):
        raise ValueError("mesh must be connected")
    if _is_orientable(m) != m.orientable:
        word = "orientable" if m.orientable else "non-orientable"
        raise ValueError(f"mesh declared {word} but triangle gluing disagrees")


def _mesh_connected(m: HeightMesh, edge_count) -> bool:
    adj: dict[int, set[int]] = {v: set() for v in range(m.num_vertices)}
    for a, b in edge_count:
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == m.num_vertices


def _is_orientable(m: HeightMesh) -> bool:
    """Propagate triangle orientations across shared edges."""
    side: dict[tuple[int, int], list[int]] = {}
    for idx, (a, b, c) in enumerate(m.triangles):
        for e in (_norm(a, b), _norm(b, c), _norm(a, c)):
            side.setdefault(e, []).append(idx)
    orient: dict[int, int] = {}

    def directed_edges(idx, flip):
        a, b, c = m.triangles[idx]
        cyc = (a, b, c) if flip == 1 else (a, c, b)
        return [(cyc[0], cyc[1]), (cyc[1], cyc[2]), (cyc[2], cyc[0])]

    for start in range(len(m.triangles)):
        if start in orient:
            continue
        orient[start] = 1
        stack = [start]
        while stack:
            idx = stack.pop()
            des = directed_edges(idx, orient[idx])
            for u, v in des:
                for nb in side[_norm(u, v)]:
                    if nb == idx:
                        continue
                    # consistent orientation traverses the shared edge oppositely
                    want = -1 if (u, v) in directed_edges(nb, 1) else 1
                    if nb not in orient:
                        orient[nb] = want
                        stack.append(nb)
                    elif orient[nb] != want:
                        return False
    return True


def surface_of(m: HeightMesh) -> Surface:
    """Identify the surface type of a mesh from its Euler characteristic."""
    chi = m.euler_characteristic()
    b = len(m.boundary_cycles)
    labels = tuple(label for label, _ in m.boundary_cycles)
    if m.orientable:
        g2 = 2 - chi - b
        if g2 % 2 or g2 < 0:
            raise ValueError("impossible Euler characteristic for the mesh")
        return Surface(True, g2 // 2, labels)
    return Surface(False, 2 - chi - b, labels)


# ---------------------------------------------------------------------------
# Text format


def parse_hmesh(text: str) -> HeightMesh:
    orientable = None
    heights: dict[int, Fraction] = {}
    triangles = []
    cycles = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "HMESH":
                if len(parts) != 2 or parts[1] not in ("orientable", "nonorientable"):
                    raise MeshFormatError("header must be 'HMESH orientable|nonorientable'")
                orientable = parts[1] == "orientable"
            elif parts[0] == "v":
                vid = int(parts[1])
                num, _, den = parts[2].partition("/")
                heights[vid] = Fraction(int(num), int(den) if den else 1)
            elif parts[0] == "t":
                triangles.append((int(parts[1]), int(parts[2]), int(parts[3])))
            elif parts[0] == "b":
                cycles.append((parts[1], tuple(int(x) for x in parts[2:])))
            else:
                raise MeshFormatError(f"unknown record {parts[0]!r}")
        except (IndexError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, MeshFormatError):
                raise
            raise MeshFormatError(f"line {lineno}: cannot parse {line!r}") from None
    if orientable is None:
        raise MeshFormatError("missing HMESH header")
    if set(heights) != set(range(len(heights))):
        raise MeshFormatError("vertex ids must be 0..n-1")
    return HeightMesh(
        orientable,
        tuple(heights[i] for i in range(len(heights))),
        tuple(triangles),
        tuple(cycles),
    )


def format_hmesh(m: HeightMesh) -> str:
    lines = [f"HMESH {'orientable' if m.orientable else 'nonorientable'}"]
    for i, h in enumerate(m.heights):
        lines.append(f"v {i} {h.numerator}/{h.denominator}")
    for a, b, c in m.triangles:
        lines.append(f"t {a} {b} {c}")
    for label, cyc in m.boundary_cycles:
        lines.append("b " + label + " " + " ".join(str(v) for v in cyc))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# PL classification


def _vertex_links(m: HeightMesh) -> dict[int, list[tuple[int, int]]]:
    """For each vertex, the edges of its link (opposite sides of triangles)."""
    link: dict[int, list[tuple[int, int]]] = {v: [] for v in range(m.num_vertices)}
    for a, b, c in m.triangles:
        link[a].append((b, c))
        link[b].append((a, c))
        link[c].append((a, b))
    return link


def _link_cycle(vid: int, pairs: list[tuple[int, int]], on_boundary: bool):
    """Order the link of a vertex into a cycle (interior) or path (boundary)."""
    adj: dict[int, list[int]] = {}
    for u, w in pairs:
        adj.setdefault(u, []).append(w)
        adj.setdefault(w, []).append(u)
    degrees = {u: len(v) for u, v in adj.items()}
    odd = [u for u, d in degrees.items() if d == 1]
    if on_boundary:
        if len(odd) != 2 or any(d > 2 for d in degrees.values()):
            raise ValueError(f"vertex {vid}: boundary link is not a simple path")
        start = min(odd)
    else:
        if odd or any(d != 2 for d in degrees.values()):
            raise ValueError(f"vertex {vid}: link is not a simple cycle")
        start = min(adj)
    order = [start]
    prev = None
    while True:
        nexts = [w for w in adj[order[-1]] if w != prev]
        if not nexts:
            break
        prev = order[-1]
        order.append(nexts[0])
        if not on_boundary and order[-1] == start:
            order.pop()
            break
        if len(order) > len(adj):
            raise ValueError(f"vertex {vid}: link is not connected")
    if len(order) != len(adj):
        raise ValueError(f"vertex {vid}: link is not connected")
    return order


def _lower_runs(cycle: Sequence[int], lower: set[int], closed: bool) -> int:
    """Number of maximal runs of lower-link vertices along the link."""
    n = len(cycle)
    flags = [v in lower for v in cycle]
    if all(flags):
        return -1  # sentinel: the whole link is lower
    runs = 0
    for i in range(n):
        prev = flags[i - 1] if (closed or i > 0) else False
        if flags[i] and not prev:
            runs += 1
    return runs


@dataclass(frozen=True)
class _Classification:
    minima: tuple[int, ...]
    saddles: tuple[int, ...]
    maxima: tuple[int, ...]
    eps: dict[str, int]


def _classify_vertices(m: HeightMesh) -> _Classification:
    link = _vertex_links(m)
    on_boundary = {}
    for label, cyc in m.boundary_cycles:
        for v in cyc:
            on_boundary[v] = label
    minima, saddles, maxima = [], [], []
    cycle_sides: dict[str, set[int]] = {label: set() for label, _ in m.boundary_cycles}
    for v in range(m.num_vertices):
        cyc = _link_cycle(v, link[v], v in on_boundary)
        h = m.heights[v]
        if v in on_boundary:
            label = on_boundary[v]
            for w in cyc:
                if m.heights[w] > h:
                    cycle_sides[label].add(1)
                elif m.heights[w] < h:
                    cycle_sides[label].add(-1)
            continue
        lower = {w for w in cyc if m.heights[w] < h}
        runs = _lower_runs(cyc, lower, closed=True)
        if runs == -1:
            maxima.append(v)
        elif runs == 0:
            minima.append(v)
        elif runs == 1:
            continue
        elif runs == 2:
            saddles.append(v)
        else:
            raise NotMorseError(
                f"vertex {v} has a lower link with {runs} components "
                "(degenerate saddle)"
            )
    eps = {}
    for label, sides in cycle_sides.items():
        if sides == {-1}:
            eps[label] = 1  # surface below: the map increases towards the circle
        elif sides == {1}:
            eps[label] = -1
        else:
            raise NotMorseError(
                f"boundary cycle {label!r} has interior neighbours on both sides"
            )
    return _Classification(tuple(minima), tuple(saddles), tuple(maxima), eps)


# ---------------------------------------------------------------------------
# Level sets and the sweep


def level_set_components(m: HeightMesh, c: Fraction) -> list[frozenset]:
    """Circles of the level set at a regular height, as sets of crossing edges."""
    c = Fraction(c)
    if any(h == c for h in m.heights):
        raise ValueError(f"height {c} is a vertex height, not regular")
    crossing = {
        e for e in m.edges() if min(m.heights[e[0]], m.heights[e[1]]) < c
        and max(m.heights[e[0]], m.heights[e[1]]) > c
    }
    adj: dict[tuple[int, int], set[tuple[int, int]]] = {e: set() for e in crossing}
    for t in m.triangles:
        inside = [
            e
            for e in (_norm(t[0], t[1]), _norm(t[1], t[2]), _norm(t[0], t[2]))
            if e in crossing
        ]
        for i in range(len(inside)):
            for j in range(i + 1, len(inside)):
                adj[inside[i]].add(inside[j])
                adj[inside[j]].add(inside[i])
    comps = []
    unseen = set(crossing)
    while unseen:
        start = min(unseen)
        comp = {start}
        stack = [start]
        unseen.discard(start)
        while stack:
            for w in adj[stack.pop()]:
                if w in unseen:
                    unseen.discard(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(frozenset(comp))
    return comps


def _slab_components(m: HeightMesh, lo: Fraction, hi: Fraction) -> dict[int, int]:
    """Triangle -> component id over triangles meeting the height band [lo, hi]."""
    tri_range = []
    for t in m.triangles:
        hs = [m.heights[v] for v in t]
        tri_range.append((min(hs), max(hs)))
    members = [
        i for i, (a, b) in enumerate(tri_range) if a <= hi and b >= lo
    ]
    by_edge: dict[tuple[int, int], list[int]] = {}
    for i in members:
        t = m.triangles[i]
        for e in (_norm(t[0], t[1]), _norm(t[1], t[2]), _norm(t[0], t[2])):
            ea, eb = m.heights[e[0]], m.heights[e[1]]
            if min(ea, eb) <= hi and max(ea, eb) >= lo:
                by_edge.setdefault(e, []).append(i)
    comp: dict[int, int] = {}
    cid = 0
    for i in members:
        if i in comp:
            continue
        comp[i] = cid
        stack = [i]
        while stack:
            t = m.triangles[stack.pop()]
            for e in (_norm(t[0], t[1]), _norm(t[1], t[2]), _norm(t[0], t[2])):
                for nb in by_edge.get(e, ()):
                    if nb not in comp:
                        comp[nb] = cid
                        stack.append(nb)
        cid += 1
    return comp


def _component_slab_id(
    m: HeightMesh, comp_edges: frozenset, tri_comp: dict[int, int], tri_of_edge
) -> int:
    edge = min(comp_edges)
    for t in tri_of_edge[edge]:
        if t in tri_comp:
            return tri_comp[t]
    raise AssertionError("level component missing from its slab")


def extract_kr_graph(m: HeightMesh) -> tuple[KRGraph, CriticalType]:
    """Sweep a mesh bottom-up and assemble its Reeb graph and critical type.

    Event heights are the critical-vertex heights and the boundary-circle
    heights; they must be pairwise distinct.  Between consecutive events the
    level-set circles are constant, so one sample per gap suffices; each
    event links the circles below it to the circles above it through the
    connected components of the slab spanning the two samples.  The slab
    component containing the event contributes the new graph vertex (its
    realised degree distinguishes an ordinary saddle from a degree-two
    one); every other slab component is a cylinder and just extends an edge.
    """
    cls = _classify_vertices(m)
    events: list[tuple[Fraction, str, object]] = []
    for v in cls.minima:
        events.append((m.heights[v], "min", v))
    for v in cls.saddles:
        events.append((m.heights[v], "saddle", v))
    for v in cls.maxima:
        events.append((m.heights[v], "max", v))
    for label, cyc in m.boundary_cycles:
        events.append((m.heights[cyc[0]], "boundary", label))
    heights = [h for h, _, _ in events]
    if len(set(heights)) != len(heights):
        raise NotGenericError("event heights are not pairwise distinct")
    events.sort(key=lambda e: e[0])

    tri_of_edge: dict[tuple[int, int], list[int]] = {}
    for i, t in enumerate(m.triangles):
        for e in (_norm(t[0], t[1]), _norm(t[1], t[2]), _norm(t[0], t[2])):
            tri_of_edge.setdefault(e, []).append(i)

    # one sample level inside each gap between consecutive events, chosen
    # below the next vertex height so no (regular) vertex sits on it
    all_heights = sorted(set(m.heights))
    samples: list[Fraction | None] = [None]
    for i in range(len(events) - 1):
        lo = events[i][0]
        nxt = min(h for h in all_heights if h > lo)
        samples.append((lo + nxt) / 2)
    samples.append(None)

    level_comps: dict[int, list[frozenset]] = {}
    for i, c in enumerate(samples):
        level_comps[i] = [] if c is None else level_set_components(m, c)

    vertices: list[KRVertex] = []
    edges: list[KREdge] = []
    # circles of the current sample level -> id of the open edge's lower vertex
    open_edges: dict[frozenset, int] = {}

    def new_vertex(kind: VertexKind, height: Fraction, label=None) -> int:
        vid = len(vertices)
        vertices.append(KRVertex(vid, kind, height, label))
        return vid

    for i, (h, etype, payload) in enumerate(events):
        below = level_comps[i]
        above = level_comps[i + 1]
        lo = samples[i] if samples[i] is not None else h - 1
        hi = samples[i + 1] if samples[i + 1] is not None else h + 1
        tri_comp = _slab_components(m, lo, hi)
        if etype == "boundary":
            label = payload
            cyc = dict(m.boundary_cycles)[label]
            probe = _norm(cyc[0], cyc[1])
            event_slab = tri_comp[tri_of_edge[probe][0]]
        else:
            vtx = payload
            tri = next(ti for ti, t in enumerate(m.triangles) if vtx in t)
            event_slab = tri_comp[tri]

        below_ids = {
            comp: _component_slab_id(m, comp, tri_comp, tri_of_edge) for comp in below
        }
        above_ids = {
            comp: _component_slab_id(m, comp, tri_comp, tri_of_edge) for comp in above
        }
        attach_below = [c for c, s in below_ids.items() if s == event_slab]
        attach_above = [c for c, s in above_ids.items() if s == event_slab]

        if etype == "min":
            kind = VertexKind.MIN
        elif etype == "max":
            kind = VertexKind.MAX
        elif etype == "boundary":
            kind = VertexKind.BOUNDARY
        else:
            degree = len(attach_below) + len(attach_above)
            if degree == 3:
                kind = VertexKind.SADDLE3
            elif degree == 2:
                kind = VertexKind.STAR2
            else:
                raise NotMorseError(
                    f"saddle at vertex {payload} links {degree} circles"
                )
        vid = new_vertex(kind, h, payload if etype == "boundary" else None)
        for comp in attach_below:
            edges.append(KREdge(len(edges), open_edges.pop(comp), vid))
        for comp in attach_above:
            open_edges[comp] = vid

        # cylinders: re-key the untouched circles to their continuations above
        passing = {
            s: comp for comp, s in below_ids.items() if s != event_slab
        }
        for comp, s in above_ids.items():
            if s == event_slab:
                continue
            prev = passing.pop(s)
            open_edges[comp] = open_edges.pop(prev)
        if passing:
            raise AssertionError("level circle vanished without an event")
    if open_edges:
        raise AssertionError("unclosed level circles after the sweep")

    graph = KRGraph(Target.LINE, vertices, edges)
    surface = surface_of(m)
    ktype = CriticalType(
        Target.LINE,
        (0,) * surface.homology_rank,
        len(cls.minima),
        len(cls.saddles),
        len(cls.maxima),
        cls.eps,
    )
    problems = validate_critical_type(surface, ktype)
    if problems:
        raise AssertionError("sweep produced an inconsistent type: " + "; ".join(problems))
    return graph, ktype
