"""Finite cube complexes, reduced configuration spaces and vertex links.

A d-cube is stored with its 2d facets, grouped by direction:
``facets[C][i] == (minus, plus)`` are the two (d-1)-cubes obtained by
pinning direction ``i`` to its tail or head side.  The remaining directions
of a facet keep their relative order and orientation, which is what lets
corners and edge-sides be located by descending through facets.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Hashable, Iterable, Mapping

from . import BudgetExceeded, InputError
from .graph_core import SimplicialGraph, from_jsonable, to_jsonable, vertex_key

Label = Hashable
LinkVertex = tuple  # (edge label, +1 at the tail end / -1 at the head end)


@dataclass(frozen=True)
class CubeComplex:
    cubes: Mapping = field(hash=False)
    facets: Mapping = field(hash=False)
    edge_labels: Mapping | None = field(default=None, hash=False)

    @classmethod
    def from_facets(
        cls, facets: Mapping, edge_labels: Mapping | None = None
    ) -> "CubeComplex":
        """Build a complex from its facet table, checking closure and identities."""
        by_dim: dict = {}
        for label, fs in facets.items():
            by_dim.setdefault(len(fs), []).append(label)
        top = max(by_dim, default=-1)
        cubes = {d: tuple(sorted(by_dim.get(d, []), key=vertex_key)) for d in range(top + 1)}
        facets = {k: tuple(tuple(p) for p in v) for k, v in facets.items()}
        cx = cls(cubes, facets, dict(edge_labels) if edge_labels is not None else None)
        cx.validate()
        return cx

    def validate(self) -> None:
        fs = self.facets
        for label, pairs in fs.items():
            d = len(pairs)
            for i, pair in enumerate(pairs):
                if len(pair) != 2:
                    raise InputError(f"cube {label!r}: direction {i} needs two facets")
                for f in pair:
                    if f not in fs:
                        raise InputError(f"cube {label!r}: facet {f!r} is missing")
                    if len(fs[f]) != d - 1:
                        raise InputError(f"cube {label!r}: facet {f!r} has wrong dimension")
            # F(F(C, i, s), j, t) == F(F(C, j, t), i - 1, s) for j < i
            for j, i in itertools.combinations(range(d), 2):
                for s, t in itertools.product((0, 1), repeat=2):
                    a = fs[fs[label][j][s]][i - 1][t]
                    b = fs[fs[label][i][t]][j][s]
                    if a != b:
                        raise InputError(f"cube {label!r}: inconsistent faces {a!r} != {b!r}")
        if self.edge_labels is not None:
            missing = set(self.cubes.get(1, ())) - set(self.edge_labels)
            if missing:
                raise InputError(f"edge labels missing for {sorted(missing, key=vertex_key)[:3]}")

    @property
    def dimension(self) -> int:
        return max((d for d, cs in self.cubes.items() if cs), default=-1)

    def dim(self, label: Label) -> int:
        return len(self.facets[label])

    def cells(self, d: int) -> tuple:
        return self.cubes.get(d, ())

    @property
    def vertices(self) -> tuple:
        return self.cells(0)

    def face(self, label: Label, fixed: Mapping[int, int]) -> Label:
        """The face of ``label`` with direction ``i`` pinned to side ``fixed[i]``."""
        for i in sorted(fixed, reverse=True):
            label = self.facets[label][i][fixed[i]]
        return label

    def corner(self, label: Label, signs: tuple) -> Label:
        return self.face(label, dict(enumerate(signs)))

    def endpoints(self, edge: Label) -> tuple:
        (pair,) = self.facets[edge]
        return pair

    def side_edge(self, label: Label, signs: tuple, i: int) -> Label:
        """The edge of ``label`` in direction ``i`` through corner ``signs``."""
        return self.face(label, {j: s for j, s in enumerate(signs) if j != i})

    def f_vector(self) -> tuple:
        return tuple(len(self.cells(d)) for d in range(self.dimension + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.f_vector()))

    def skeleton(self, k: int) -> "CubeComplex":
        fs = {c: p for c, p in self.facets.items() if len(p) <= k}
        cubes = {d: cs for d, cs in self.cubes.items() if d <= k}
        return CubeComplex(cubes, fs, self.edge_labels)

    @cached_property
    def links(self) -> dict:
        return _all_links(self)


def f_vector(x: CubeComplex) -> tuple:
    return x.f_vector()


def euler_characteristic(x: CubeComplex) -> int:
    return x.euler_characteristic()


# reduced configuration spaces ---------------------------------------------------

def reduced_config_space(
    g: SimplicialGraph, n: int, max_cubes: int | None = None
) -> CubeComplex:
    """The cube complex of ``n`` points on ``g`` with pairwise disjoint carriers.

    A d-cube is the sorted tuple of ``n`` mutually disjoint simplices of ``g``
    (``(v,)`` or an edge ``(u, v)``), ``d`` of which are edges.  Its directions
    are its edges in label order; pinning one to its tail or head replaces it
    by that endpoint.  Each 1-cube is labelled by the edge of ``g`` it moves
    along, with sign +1.
    """
    if n < 1:
        raise InputError("number of points must be positive")
    facets: dict = {}
    edge_labels: dict = {}
    count = 0
    for d in range(n + 1):
        for edges in itertools.combinations(g.sorted_edges, d):
            used = set()
            for e in edges:
                used.update(e)
            if len(used) != 2 * d:
                continue
            free = [v for v in g.vertices if v not in used]
            for verts in itertools.combinations(free, n - d):
                label = tuple(sorted(list(edges) + [(v,) for v in verts], key=vertex_key))
                count += 1
                if max_cubes is not None and count > max_cubes:
                    raise BudgetExceeded(f"more than {max_cubes} cubes in X_{n}")
                pairs = []
                for s in label:
                    if len(s) != 2:
                        continue
                    tail, head = g.oriented[s]
                    rest = [t for t in label if t != s]
                    pairs.append(
                        tuple(
                            tuple(sorted(rest + [(end,)], key=vertex_key))
                            for end in (tail, head)
                        )
                    )
                facets[label] = tuple(pairs)
                if d == 1:
                    edge_labels[label] = (edges[0], 1)
    by_dim: dict = {}
    for label, fs in facets.items():
        by_dim.setdefault(len(fs), []).append(label)
    cubes = {
        d: tuple(sorted(by_dim.get(d, []), key=vertex_key))
        for d in range(max(by_dim, default=-1) + 1)
    }
    cx = CubeComplex(cubes, facets, edge_labels)
    cx.validate()
    return cx


# small hand-made complexes --------------------------------------------------------

def star_complex(top_cells: Iterable[str]) -> CubeComplex:
    """Subcomplex of the standard cube given by strings over ``0``, ``1``, ``*``.

    ``"0*1"`` is the edge from ``001`` to ``011``; every face of the given
    cells is included.
    """
    facets: dict = {}
    todo = list(top_cells)
    while todo:
        cell = todo.pop()
        if cell in facets:
            continue
        stars = [k for k, ch in enumerate(cell) if ch == "*"]
        pairs = []
        for k in stars:
            pair = tuple(cell[:k] + side + cell[k + 1:] for side in "01")
            pairs.append(pair)
            todo.extend(pair)
        facets[cell] = tuple(pairs)
    return CubeComplex.from_facets(facets)


def hollow_cube() -> CubeComplex:
    """Boundary of the 3-cube: six squares, every corner link an empty triangle."""
    return star_complex(["**0", "**1", "*0*", "*1*", "0**", "1**"])


def one_square_torus(a: str = "a", b: str = "b") -> CubeComplex:
    """A single square with opposite sides identified."""
    facets = {
        "v": (),
        a: (("v", "v"),),
        b: (("v", "v"),),
        "s": ((b, b), (a, a)),
    }
    return CubeComplex.from_facets(facets, {a: (a, 1), b: (b, 1)})


# links -----------------------------------------------------------------------------

@dataclass(frozen=True)
class LinkComplex:
    """Link of a vertex: one simplex per corner of a cube at that vertex.

    Link vertices are ``(edge, +1)`` where the edge leaves the base vertex and
    ``(edge, -1)`` where it arrives.  ``corners`` keeps multiplicity (a cube
    can meet the base vertex at several corners).
    """

    base: Label
    vertices: tuple
    corners: tuple

    @cached_property
    def simplices(self) -> frozenset:
        return frozenset(frozenset(s) for _, s in self.corners)

    @cached_property
    def graph(self) -> dict:
        adj: dict = {v: set() for v in self.vertices}
        for _, s in self.corners:
            if len(s) == 2 and s[0] != s[1]:
                adj[s[0]].add(s[1])
                adj[s[1]].add(s[0])
        return adj

    def has_simplex(self, verts: Iterable[LinkVertex]) -> bool:
        return frozenset(verts) in self.simplices


def _all_links(x: CubeComplex) -> dict:
    verts: dict = {v: [] for v in x.vertices}
    corners: dict = {v: [] for v in x.vertices}
    for d in range(1, x.dimension + 1):
        for cube in x.cells(d):
            for signs in itertools.product((0, 1), repeat=d):
                base = x.corner(cube, signs)
                simplex = tuple(
                    (x.side_edge(cube, signs, i), 1 if signs[i] == 0 else -1)
                    for i in range(d)
                )
                if d == 1:
                    verts[base].append(simplex[0])
                corners[base].append((cube, simplex))
    return {
        v: LinkComplex(v, tuple(sorted(verts[v], key=vertex_key)), tuple(corners[v]))
        for v in x.vertices
    }


def vertex_link(x: CubeComplex, v: Label) -> LinkComplex:
    try:
        return x.links[v]
    except KeyError:
        raise InputError(f"{v!r} is not a vertex of the complex") from None


def _cliques(adj: Mapping, min_size: int) -> Iterable[tuple]:
    order = sorted(adj, key=vertex_key)
    index = {v: i for i, v in enumerate(order)}

    def grow(clique: list, candidates: list):
        if len(clique) >= min_size:
            yield tuple(clique)
        for k, v in enumerate(candidates):
            yield from grow(
                clique + [v], [w for w in candidates[k + 1:] if w in adj[v]]
            )

    for v in order:
        yield from grow([v], [w for w in order[index[v] + 1:] if w in adj[v]])


@dataclass(frozen=True)
class FlagReport:
    passed: bool
    violations: tuple  # (vertex, clique) pairs

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "violations": [
                {"vertex": to_jsonable(v), "clique": [to_jsonable(list(c)) for c in cl]}
                for v, cl in self.violations
            ],
        }


def link_flag_violations(link: LinkComplex) -> list:
    """Cliques of the 1-skeleton spanning no simplex while all their facets do.

    A link is flag exactly when this list is empty; reporting only minimal
    offenders keeps one entry per empty simplex.
    """
    bad = []
    for clique in _cliques(link.graph, 3):
        if link.has_simplex(clique):
            continue
        if all(link.has_simplex(sub) for sub in itertools.combinations(clique, len(clique) - 1)):
            bad.append(clique)
    return bad


def check_flag(x: CubeComplex) -> FlagReport:
    violations = []
    for v in x.vertices:
        for clique in link_flag_violations(x.links[v]):
            violations.append((v, clique))
    return FlagReport(not violations, tuple(violations))


# surfaces ------------------------------------------------------------------------------

@dataclass(frozen=True)
class SurfaceId:
    is_closed_surface: bool
    euler_characteristic: int
    orientable: bool | None = None

    def to_json(self) -> dict:
        return {
            "closed_surface": self.is_closed_surface,
            "euler_characteristic": self.euler_characteristic,
            "orientable": self.orientable,
        }


def square_boundary(x: CubeComplex, sq: Label) -> tuple:
    """Boundary of a square as four (edge, +-1) sides, counterclockwise from (0, 0)."""
    (m0, p0), (m1, p1) = x.facets[sq]
    return ((m1, 1), (p0, 1), (p1, -1), (m0, -1))


def _is_cycle(adj: Mapping) -> bool:
    if not adj or any(len(nbrs) != 2 for nbrs in adj.values()):
        return False
    start = next(iter(adj))
    seen = {start}
    queue = deque([start])
    while queue:
        for w in adj[queue.popleft()]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(adj)


def is_closed_surface(x: CubeComplex) -> bool:
    if x.dimension != 2:
        return False
    incidences = {e: 0 for e in x.cells(1)}
    for sq in x.cells(2):
        for e, _ in square_boundary(x, sq):
            incidences[e] += 1
    if any(c != 2 for c in incidences.values()):
        return False
    for v in x.vertices:
        link = x.links[v]
        # multigraph: link vertices are edge ends, link edges are square corners
        adj: dict = {lv: [] for lv in link.vertices}
        for cube, simplex in link.corners:
            if len(simplex) == 2:
                a, b = simplex
                adj[a].append(b)
                adj[b].append(a)
        if not _is_cycle(adj):
            return False
    return True


def is_orientable(x: CubeComplex, reverse: bool = False) -> bool:
    """Two-colour the squares so that every edge is crossed in opposite senses.

    ``reverse`` flips the traversal order; the verdict must not depend on it.
    """
    sides: dict = {}
    for sq in x.cells(2):
        for slot, (e, sign) in enumerate(square_boundary(x, sq)):
            sides.setdefault(e, []).append((sq, slot, sign))
    squares = list(x.cells(2))
    if reverse:
        squares.reverse()
    orient: dict = {}
    for root in squares:
        if root in orient:
            continue
        orient[root] = 1
        queue = deque([root])
        while queue:
            sq = queue.popleft()
            boundary = list(enumerate(square_boundary(x, sq)))
            if reverse:
                boundary.reverse()
            for slot, (e, sign) in boundary:
                for other, oslot, osign in sides[e]:
                    if (other, oslot) == (sq, slot):
                        continue
                    # the neighbour must traverse the shared edge the other way
                    want = -orient[sq] * sign * osign
                    if other in orient:
                        if orient[other] != want:
                            return False
                    else:
                        orient[other] = want
                        queue.append(other)
    return True


def identify_surface(x: CubeComplex) -> SurfaceId:
    if x.dimension > 2:
        raise InputError(f"surface identification needs dimension <= 2, got {x.dimension}")
    chi = x.euler_characteristic()
    if not is_closed_surface(x):
        return SurfaceId(False, chi)
    return SurfaceId(True, chi, is_orientable(x))


def cubicality_problems(x: CubeComplex) -> list[str]:
    """Embeddedness checks for the 2-skeleton: distinct corners, single-face meets."""
    problems = []
    for e in x.cells(1):
        a, b = x.endpoints(e)
        if a == b:
            problems.append(f"edge {e!r} is a loop")
    square_verts = {}
    square_edges = {}
    for sq in x.cells(2):
        corners = {x.corner(sq, s) for s in itertools.product((0, 1), repeat=2)}
        edges = {e for e, _ in square_boundary(x, sq)}
        if len(corners) != 4 or len(edges) != 4:
            problems.append(f"square {sq!r} is not embedded")
        square_verts[sq] = corners
        square_edges[sq] = edges
    for s, t in itertools.combinations(x.cells(2), 2):
        common_v = square_verts[s] & square_verts[t]
        common_e = square_edges[s] & square_edges[t]
        if len(common_e) > 1 or (len(common_v) == 2 and not common_e) or len(common_v) > 2:
            problems.append(f"squares {s!r} and {t!r} meet in more than one face")
    return problems


# JSON -----------------------------------------------------------------------------------

def complex_to_json(x: CubeComplex) -> dict:
    return {
        "cubes": {
            str(d): [to_jsonable(c) for c in x.cells(d)] for d in range(x.dimension + 1)
        },
        "faces": [
            [to_jsonable(c), [[to_jsonable(m), to_jsonable(p)] for m, p in x.facets[c]]]
            for d in range(1, x.dimension + 1)
            for c in x.cells(d)
        ],
        "edge_labels": None
        if x.edge_labels is None
        else [
            [to_jsonable(e), to_jsonable(x.edge_labels[e][0]), x.edge_labels[e][1]]
            for e in x.cells(1)
        ],
    }


def complex_from_json(data: Any) -> CubeComplex:
    if not isinstance(data, dict) or set(data) - {"cubes", "faces", "edge_labels"}:
        raise InputError("complex JSON accepts only 'cubes', 'faces', 'edge_labels'")
    try:
        facets: dict = {}
        for d, labels in data["cubes"].items():
            for lab in labels:
                facets[from_jsonable(lab)] = None if int(d) else ()
        for lab, pairs in data.get("faces", []):
            facets[from_jsonable(lab)] = tuple(
                (from_jsonable(m), from_jsonable(p)) for m, p in pairs
            )
        if any(v is None for v in facets.values()):
            raise InputError("every cube of positive dimension needs a faces entry")
        labels = data.get("edge_labels")
        edge_labels = None
        if labels is not None:
            edge_labels = {from_jsonable(e): (from_jsonable(gen), int(sign)) for e, gen, sign in labels}
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed complex JSON: {exc}") from None
    return CubeComplex.from_facets(facets, edge_labels)
