"""Finite simple graphs and the graphs derived from them.

Vertices are opaque hashable identifiers (ints, strings, or tuples of those
for derived graphs).  An edge is always the sorted pair of its endpoints;
derived graphs such as ``delta_graph(G)`` use those pairs as their own vertex
names, so identities between derived graphs are plain equality tests.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Hashable, Iterable, Mapping

import networkx as nx

from . import InputError

Vertex = Hashable
Edge = tuple


def vertex_key(v: Vertex) -> tuple:
    """Total order on mixed vertex identifiers: ints, then strings, then tuples."""
    if isinstance(v, bool):
        raise InputError(f"boolean is not a valid vertex id: {v!r}")
    if isinstance(v, int):
        return (0, v)
    if isinstance(v, str):
        return (1, v)
    if isinstance(v, tuple):
        return (2, tuple(vertex_key(x) for x in v))
    raise InputError(f"unsupported vertex id type: {v!r}")


def vertex_name(v: Vertex) -> str:
    if isinstance(v, tuple):
        return "(" + ",".join(vertex_name(x) for x in v) + ")"
    return str(v)


def edge_of(u: Vertex, v: Vertex) -> Edge:
    """Canonical name of the edge {u, v}."""
    return (u, v) if vertex_key(u) <= vertex_key(v) else (v, u)


def edge_sort_key(e: Edge) -> tuple:
    return tuple(vertex_key(x) for x in e)


@dataclass(frozen=True)
class SimplicialGraph:
    """A finite simple graph, optionally with an orientation of every edge.

    Construct through :meth:`build`, which canonicalises vertex order and edge
    names.  ``orientation`` is ``None`` for the default orientation, where the
    tail of each edge is its smaller endpoint.
    """

    vertices: tuple
    edges: frozenset
    orientation: frozenset | None = None

    def __post_init__(self) -> None:
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise InputError("duplicate vertex identifiers")
        for e in self.edges:
            if len(e) != 2 or e[0] == e[1]:
                raise InputError(f"loop or malformed edge: {e!r}")
            if e[0] not in vset or e[1] not in vset:
                raise InputError(f"edge {e!r} has an undeclared endpoint")
            if e != edge_of(*e):
                raise InputError(f"edge {e!r} is not in canonical order")
        if self.orientation is not None:
            covered = [edge_of(t, h) for t, h in self.orientation]
            if len(covered) != len(set(covered)) or set(covered) != set(self.edges):
                raise InputError("orientation must cover every edge exactly once")

    @classmethod
    def build(
        cls,
        vertices: Iterable[Vertex],
        edges: Iterable[Iterable[Vertex]],
        orientation: Iterable[Iterable[Vertex]] | None = None,
    ) -> "SimplicialGraph":
        verts = list(vertices)
        for v in verts:
            vertex_key(v)
        canon = []
        for e in edges:
            u, v = tuple(e)
            if u == v:
                raise InputError(f"loop at vertex {u!r}")
            canon.append(edge_of(u, v))
        if len(canon) != len(set(canon)):
            raise InputError("multiple edges between the same pair of vertices")
        orient = None
        if orientation is not None:
            orient = frozenset(tuple(p) for p in orientation)
        return cls(tuple(sorted(verts, key=vertex_key)), frozenset(canon), orient)

    @cached_property
    def sorted_edges(self) -> tuple:
        return tuple(sorted(self.edges, key=edge_sort_key))

    @cached_property
    def adjacency(self) -> dict:
        adj: dict = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def neighbors(self, v: Vertex) -> list:
        return sorted(self.adjacency[v], key=vertex_key)

    def degree(self, v: Vertex) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return v in self.adjacency.get(u, ())

    @cached_property
    def oriented(self) -> dict:
        """Map each edge name to its (tail, head) pair."""
        if self.orientation is None:
            return {e: e for e in self.edges}
        return {edge_of(t, h): (t, h) for t, h in self.orientation}

    def components(self) -> list[list]:
        seen: set = set()
        comps = []
        for root in self.vertices:
            if root in seen:
                continue
            seen.add(root)
            comp = [root]
            queue = deque([root])
            while queue:
                u = queue.popleft()
                for w in self.neighbors(u):
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
            comps.append(sorted(comp, key=vertex_key))
        return comps

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g


@dataclass(frozen=True)
class GraphMorphism:
    """A vertex map between graphs.

    Only the domain and codomain are checked here; whether edges go to edges
    is part of what :func:`validate_cover` decides, so collapsing maps can
    still be built and rejected with a reason.
    """

    source: SimplicialGraph
    target: SimplicialGraph
    vertex_map: Mapping = field(hash=False)

    def __post_init__(self) -> None:
        if set(self.vertex_map) != set(self.source.vertices):
            raise InputError("vertex map must be defined on every source vertex")
        tverts = set(self.target.vertices)
        for v, w in self.vertex_map.items():
            if w not in tverts:
                raise InputError(f"vertex {v!r} maps outside the target: {w!r}")

    def __call__(self, v: Vertex) -> Vertex:
        return self.vertex_map[v]

    def is_morphism(self) -> bool:
        return all(self.target.has_edge(self(u), self(v)) for u, v in self.source.edges)


# builtin families ------------------------------------------------------------

def _complete(n: int) -> SimplicialGraph:
    return SimplicialGraph.build(range(n), itertools.combinations(range(n), 2))


def _complete_bipartite(m: int, n: int) -> SimplicialGraph:
    return SimplicialGraph.build(
        range(m + n), ((i, j) for i in range(m) for j in range(m, m + n))
    )


def _cycle(n: int) -> SimplicialGraph:
    if n < 3:
        raise InputError("a simple cycle needs at least 3 vertices")
    return SimplicialGraph.build(range(n), ((i, (i + 1) % n) for i in range(n)))


def _path(n: int) -> SimplicialGraph:
    return SimplicialGraph.build(range(n), ((i, i + 1) for i in range(n - 1)))


def _empty(n: int) -> SimplicialGraph:
    return SimplicialGraph.build(range(n), [])


def _petersen() -> SimplicialGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return SimplicialGraph.build(range(10), outer + spokes + inner)


_FAMILIES = {
    "complete": (1, _complete),
    "complete_bipartite": (2, _complete_bipartite),
    "cycle": (1, _cycle),
    "path": (1, _path),
    "empty": (1, _empty),
    "petersen": (0, _petersen),
}


def builtin_graph(name: str, params: Iterable[int] = ()) -> SimplicialGraph:
    """Standard graphs on vertices ``0..n-1``.

    ``path`` takes its number of vertices; ``empty`` is the edgeless graph.
    """
    try:
        arity, factory = _FAMILIES[name]
    except KeyError:
        raise InputError(
            f"unknown graph family {name!r}; expected one of {sorted(_FAMILIES)}"
        ) from None
    params = [int(p) for p in params]
    if len(params) != arity:
        raise InputError(f"{name} takes {arity} parameter(s), got {len(params)}")
    if any(p <= 0 for p in params):
        raise InputError(f"parameters must be positive, got {params}")
    return factory(*params)


def parse_builtin(text: str) -> SimplicialGraph:
    """Parse the ``family:p1,p2`` shorthand, e.g. ``complete_bipartite:3,3``."""
    name, _, rest = text.partition(":")
    params = [p for p in rest.split(",") if p.strip()] if rest else []
    try:
        ints = [int(p) for p in params]
    except ValueError:
        raise InputError(f"bad builtin parameters in {text!r}") from None
    return builtin_graph(name.strip(), ints)


# derived graphs --------------------------------------------------------------

def delta_graph(g: SimplicialGraph) -> SimplicialGraph:
    """One vertex per edge of ``g``; adjacent iff the closed edges are disjoint."""
    edges = g.sorted_edges
    pairs = [
        (e, f) for e, f in itertools.combinations(edges, 2) if not set(e) & set(f)
    ]
    return SimplicialGraph.build(edges, pairs)


def line_graph(g: SimplicialGraph) -> SimplicialGraph:
    edges = g.sorted_edges
    pairs = [(e, f) for e, f in itertools.combinations(edges, 2) if set(e) & set(f)]
    return SimplicialGraph.build(edges, pairs)


def opposite_graph(d: SimplicialGraph) -> SimplicialGraph:
    pairs = [
        (u, v) for u, v in itertools.combinations(d.vertices, 2) if not d.has_edge(u, v)
    ]
    return SimplicialGraph.build(d.vertices, pairs)


def subdivide(g: SimplicialGraph, k: int) -> SimplicialGraph:
    """Replace each edge by a path of ``k`` edges.

    The fresh vertices on edge ``(u, v)`` are ``(u, v, 1) .. (u, v, k-1)``,
    running from the tail towards the head; each path is oriented the same
    way as the edge it replaces.
    """
    if k < 1:
        raise InputError("subdivision factor must be at least 1")
    if k == 1:
        return g
    verts = list(g.vertices)
    edges = []
    orient = []
    for e in g.sorted_edges:
        tail, head = g.oriented[e]
        chain = [tail] + [(e[0], e[1], i) for i in range(1, k)] + [head]
        verts.extend(chain[1:-1])
        for a, b in zip(chain, chain[1:]):
            edges.append((a, b))
            orient.append((a, b))
    return SimplicialGraph.build(verts, edges, orient)


# isomorphism and girth ---------------------------------------------------------

def find_isomorphism(g: SimplicialGraph, h: SimplicialGraph) -> dict | None:
    """Backtracking isomorphism search; fine up to about 20 vertices."""
    if len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges):
        return None
    if sorted(map(g.degree, g.vertices)) != sorted(map(h.degree, h.vertices)):
        return None
    order = []
    seen: set = set()
    # visit in BFS order so that most placements are constrained by neighbors
    for root in sorted(g.vertices, key=lambda v: (-g.degree(v), vertex_key(v))):
        if root in seen:
            continue
        seen.add(root)
        queue = deque([root])
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in g.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)

    mapping: dict = {}
    used: set = set()

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        u = order[i]
        for x in h.vertices:
            if x in used or h.degree(x) != g.degree(u):
                continue
            if all(
                h.has_edge(x, mapping[w]) == g.has_edge(u, w) for w in mapping
            ):
                mapping[u] = x
                used.add(x)
                if extend(i + 1):
                    return True
                del mapping[u]
                used.discard(x)
        return False

    return dict(mapping) if extend(0) else None


def girth(g: SimplicialGraph) -> float:
    """Length of a shortest cycle, ``inf`` for forests."""
    best = float("inf")
    for root in g.vertices:
        dist = {root: 0}
        parent = {root: None}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


# planarity -------------------------------------------------------------------

@dataclass(frozen=True)
class PlanarityVerdict:
    planar: bool
    rotation: dict | None = None
    kuratowski: SimplicialGraph | None = None
    kuratowski_type: str | None = None


def is_planar(g: SimplicialGraph) -> PlanarityVerdict:
    """Decide planarity and return an independently re-checked witness.

    Planar graphs come with a rotation system (clockwise neighbor order per
    vertex), nonplanar ones with a subdivided K5 or K3,3 subgraph.
    """
    planar, cert = nx.check_planarity(g.to_networkx(), counterexample=True)
    if planar:
        rotation = {
            v: tuple(cert.neighbors_cw_order(v)) if g.degree(v) else ()
            for v in g.vertices
        }
        if not verify_rotation_system(g, rotation):
            raise AssertionError("planar embedding failed the Euler check")
        return PlanarityVerdict(True, rotation=rotation)
    sub = SimplicialGraph.build(cert.nodes, cert.edges)
    kind = verify_kuratowski(g, sub)
    if kind is None:
        raise AssertionError("Kuratowski witness failed the subdivision check")
    return PlanarityVerdict(False, kuratowski=sub, kuratowski_type=kind)


def verify_rotation_system(g: SimplicialGraph, rotation: Mapping) -> bool:
    """Trace the faces of a rotation system and check V - E + F = 2 per component."""
    for v in g.vertices:
        rot = tuple(rotation.get(v, ()))
        if sorted(rot, key=vertex_key) != g.neighbors(v):
            return False
    succ = {}
    for v in g.vertices:
        rot = rotation[v]
        for i, w in enumerate(rot):
            succ[(v, w)] = rot[(i + 1) % len(rot)]
    comp_of = {}
    for idx, comp in enumerate(g.components()):
        for v in comp:
            comp_of[v] = idx
    faces = [0] * len(g.components())
    seen: set = set()
    for dart in succ:
        if dart in seen:
            continue
        faces[comp_of[dart[0]]] += 1
        d = dart
        while d not in seen:
            seen.add(d)
            u, v = d
            d = (v, succ[(v, u)])
    for idx, comp in enumerate(g.components()):
        n_edges = sum(g.degree(v) for v in comp) // 2
        if n_edges == 0:
            continue
        if len(comp) - n_edges + faces[idx] != 2:
            return False
    return True


def verify_kuratowski(g: SimplicialGraph, sub: SimplicialGraph) -> str | None:
    """Return ``"K5"`` or ``"K3,3"`` if ``sub`` is a subdivision of it inside ``g``."""
    if not set(sub.vertices) <= set(g.vertices) or not sub.edges <= g.edges:
        return None
    degs = {v: sub.degree(v) for v in sub.vertices}
    if any(d < 2 for d in degs.values()) or len(sub.components()) != 1:
        return None
    branch = [v for v in sub.vertices if degs[v] > 2]
    # smooth each chain of degree-2 vertices into one edge between branch points
    links = []
    for b in branch:
        for first in sub.neighbors(b):
            prev, cur = b, first
            while degs[cur] == 2:
                nxt = [w for w in sub.adjacency[cur] if w != prev][0]
                prev, cur = cur, nxt
            if cur == b:
                return None
            links.append(edge_of(b, cur))
    pairs = {}
    for e in links:
        pairs[e] = pairs.get(e, 0) + 1
    if any(c != 2 for c in pairs.values()):
        return None  # each smoothed edge is seen from both ends exactly once
    smooth = SimplicialGraph.build(branch, pairs)
    if find_isomorphism(smooth, _complete(5)) is not None:
        return "K5"
    if find_isomorphism(smooth, _complete_bipartite(3, 3)) is not None:
        return "K3,3"
    return None


# covers ----------------------------------------------------------------------

@dataclass(frozen=True)
class CoverVerdict:
    valid: bool
    vertex: Any = None
    reason: str = ""


def validate_cover(p: GraphMorphism, sheets: int) -> CoverVerdict:
    """Check that ``p`` is a ``sheets``-fold covering map of graphs."""
    src, tgt = p.source, p.target
    for v in src.vertices:
        image = p(v)
        nbr_images = [p(w) for w in src.neighbors(v)]
        if image in nbr_images:
            return CoverVerdict(False, v, "collapses an incident edge")
        if any(not tgt.has_edge(image, x) for x in nbr_images):
            return CoverVerdict(False, v, "sends an edge to a non-edge")
        if len(set(nbr_images)) != len(nbr_images):
            return CoverVerdict(False, v, "star map is not injective")
        if set(nbr_images) != tgt.adjacency[image]:
            return CoverVerdict(False, v, "star map is not surjective")
    fibers: dict = {w: 0 for w in tgt.vertices}
    for v in src.vertices:
        fibers[p(v)] += 1
    for w in tgt.vertices:
        if fibers[w] != sheets:
            return CoverVerdict(False, w, f"fiber has {fibers[w]} points, expected {sheets}")
    tcomp = {}
    for idx, comp in enumerate(tgt.components()):
        for w in comp:
            tcomp[w] = idx
    for comp in src.components():
        image = {p(v) for v in comp}
        target_comp = {w for w in tgt.vertices if tcomp[w] == tcomp[p(comp[0])]}
        if image != target_comp:
            return CoverVerdict(False, comp[0], "component does not map onto a component")
    return CoverVerdict(True)


# JSON ------------------------------------------------------------------------

def to_jsonable(v: Any) -> Any:
    if isinstance(v, tuple):
        return [to_jsonable(x) for x in v]
    return v


def from_jsonable(v: Any) -> Any:
    if isinstance(v, list):
        return tuple(from_jsonable(x) for x in v)
    if isinstance(v, (str, int)) and not isinstance(v, bool):
        return v
    raise InputError(f"unsupported identifier in JSON: {v!r}")


_GRAPH_KEYS = {"vertices", "edges", "orientation"}


def graph_to_json(g: SimplicialGraph) -> dict:
    """Serialise a graph; tuple vertex ids (derived graphs) become nested lists."""
    out = {
        "vertices": [to_jsonable(v) for v in g.vertices],
        "edges": [[to_jsonable(u), to_jsonable(v)] for u, v in g.sorted_edges],
    }
    if g.orientation is not None:
        out["orientation"] = [
            [to_jsonable(t), to_jsonable(h)]
            for t, h in (g.oriented[e] for e in g.sorted_edges)
        ]
    return out


def graph_from_json(data: Any) -> SimplicialGraph:
    if not isinstance(data, dict):
        raise InputError("graph JSON must be an object")
    unknown = set(data) - _GRAPH_KEYS
    if unknown:
        raise InputError(f"unknown keys in graph JSON: {sorted(unknown)}")
    if "vertices" not in data or "edges" not in data:
        raise InputError("graph JSON needs 'vertices' and 'edges'")
    try:
        verts = [from_jsonable(v) for v in data["vertices"]]
        edges = [tuple(from_jsonable(x) for x in e) for e in data["edges"]]
        orient = data.get("orientation")
        if orient is not None:
            orient = [tuple(from_jsonable(x) for x in p) for p in orient]
    except TypeError as exc:
        raise InputError(f"malformed graph JSON: {exc}") from None
    if any(len(e) != 2 for e in edges):
        raise InputError("every edge must have exactly two endpoints")
    return SimplicialGraph.build(verts, edges, orient)


def morphism_to_json(p: GraphMorphism) -> dict:
    return {
        "source": graph_to_json(p.source),
        "target": graph_to_json(p.target),
        "map": [[to_jsonable(v), to_jsonable(p(v))] for v in p.source.vertices],
    }


def morphism_from_json(data: Any) -> GraphMorphism:
    if not isinstance(data, dict) or set(data) != {"source", "target", "map"}:
        raise InputError("cover JSON needs exactly 'source', 'target' and 'map'")
    src = graph_from_json(data["source"])
    tgt = graph_from_json(data["target"])
    vmap = {from_jsonable(a): from_jsonable(b) for a, b in data["map"]}
    return GraphMorphism(src, tgt, vmap)
