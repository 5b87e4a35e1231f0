"""Cubical maps into cubed tori and the certificates built on them.

``salvetti(D)`` is the one-vertex cube complex with a d-cube for every
d-clique of ``D``; its fundamental group is the RAAG of ``D``.  ``phi_map``
sends the configuration space of a graph into the complex of its disjointness
graph, and ``check_local_isometry`` verifies the link conditions vertex by
vertex.
"""

from __future__ import annotations

import itertools
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Hashable, Mapping

from . import InputError
from .cube_complex import (
    CubeComplex,
    check_flag,
    reduced_config_space,
    square_boundary,
)
from .graph_core import (
    GraphMorphism,
    SimplicialGraph,
    delta_graph,
    opposite_graph,
    to_jsonable,
    validate_cover,
    vertex_key,
)
from .raag import (
    RaagPresentation,
    Word,
    commutator,
    inverse,
    is_delta_reduced,
    is_trivial,
    normal_form,
    reduced_elements,
)


class NotCubicalError(InputError):
    """A map fails the cubical-map invariants badly enough that no check applies."""


class DisconnectedError(InputError):
    def __init__(self, components: list):
        self.components = components
        super().__init__(f"complex is disconnected ({len(components)} components)")


# the cubed torus of a graph -----------------------------------------------------

def cliques(d: SimplicialGraph, max_size: int) -> list[tuple]:
    """All cliques with at most ``max_size`` vertices, as sorted tuples."""
    out = [()]

    def grow(clique: tuple, candidates: list):
        for k, v in enumerate(candidates):
            bigger = clique + (v,)
            out.append(bigger)
            if len(bigger) < max_size:
                grow(bigger, [w for w in candidates[k + 1:] if d.has_edge(v, w)])

    if max_size > 0:
        grow((), list(d.vertices))
    return out


@dataclass(frozen=True)
class SalvettiComplex:
    defining_graph: SimplicialGraph
    max_dim: int
    complex: CubeComplex = field(repr=False)

    @property
    def vertex(self) -> tuple:
        return ()

    def link_vertices(self) -> list:
        return [(g, s) for g in self.defining_graph.vertices for s in (1, -1)]

    def link_has_simplex(self, verts) -> bool:
        """Signed generators span a simplex iff their generators are a clique."""
        gens = [g for g, _ in verts]
        if len(set(gens)) != len(gens) or len(gens) > self.max_dim:
            return False
        return all(self.defining_graph.has_edge(a, b) for a, b in itertools.combinations(gens, 2))

    def link_adjacent(self, a, b) -> bool:
        return self.link_has_simplex((a, b))


def salvetti(d: SimplicialGraph, max_dim: int = 2) -> SalvettiComplex:
    if max_dim < 1:
        raise InputError("max_dim must be at least 1")
    facets: dict = {}
    for clique in cliques(d, max_dim):
        facets[clique] = tuple(
            (clique[:i] + clique[i + 1:],) * 2 for i in range(len(clique))
        )
    edge_labels = {(g,): (g, 1) for g in d.vertices}
    return SalvettiComplex(d, max_dim, CubeComplex.from_facets(facets, edge_labels))


# cubical maps ---------------------------------------------------------------------

@dataclass(frozen=True)
class CubicalMap:
    """Cube-to-cube map given by a (generator, sign) for every source edge."""

    source: CubeComplex
    target: SalvettiComplex
    assignment: Mapping = field(hash=False)
    validate: bool = field(default=True, compare=False)

    def __post_init__(self) -> None:
        missing = [e for e in self.source.cells(1) if e not in self.assignment]
        if missing:
            raise NotCubicalError(f"no assignment for edge {missing[0]!r}")
        if self.validate:
            bad = cubicality_violations(self)
            if bad:
                cube, reason = bad[0]
                raise NotCubicalError(f"cube {cube!r}: {reason}")

    def direction_labels(self, cube) -> list:
        """(generator, sign) of each direction, read at the all-tails corner."""
        d = self.source.dim(cube)
        zero = (0,) * d
        return [self.assignment[self.source.side_edge(cube, zero, i)] for i in range(d)]

    def link_image(self, link_vertex) -> tuple:
        edge, eps = link_vertex
        gen, sign = self.assignment[edge]
        return (gen, eps * sign)


def cubicality_violations(f: CubicalMap) -> list[tuple]:
    x, dgraph = f.source, f.target.defining_graph
    out = []
    for d in range(1, x.dimension + 1):
        for cube in x.cells(d):
            labels = f.direction_labels(cube)
            for i in range(d):
                for signs in itertools.product((0, 1), repeat=d):
                    if f.assignment[x.side_edge(cube, signs, i)] != labels[i]:
                        out.append((cube, f"parallel edges in direction {i} disagree"))
                        break
            gens = [g for g, _ in labels]
            if any(g not in dgraph.adjacency for g in gens):
                out.append((cube, "edge sent to an unknown generator"))
            elif len(set(gens)) != d:
                out.append((cube, "two directions share a generator"))
            elif d > f.target.max_dim:
                out.append((cube, "target has no cube of this dimension"))
            elif not all(dgraph.has_edge(a, b) for a, b in itertools.combinations(gens, 2)):
                out.append((cube, "generators do not span a clique"))
    return out


def phi_map(g: SimplicialGraph, n: int, max_cubes: int | None = None) -> CubicalMap:
    """The map from the n-point reduced configuration space into the cubed torus of
    the disjointness graph, sending each edge-cube to the edge of ``g`` it moves along."""
    x = reduced_config_space(g, n, max_cubes=max_cubes)
    target = salvetti(delta_graph(g), max(n, 1))
    assignment = {e: x.edge_labels[e] for e in x.cells(1)}
    return CubicalMap(x, target, assignment)


def sabotage(f: CubicalMap, victim: Hashable, generator: Hashable) -> CubicalMap:
    """Relabel every edge moving along ``victim`` to ``generator`` (for negative tests)."""
    assignment = {
        e: (generator, s) if gen == victim else (gen, s)
        for e, (gen, s) in f.assignment.items()
    }
    return CubicalMap(f.source, f.target, assignment, validate=False)


# local isometry certificate ---------------------------------------------------------

@dataclass(frozen=True)
class VertexCertificate:
    vertex: Any
    link_map: tuple  # (source link vertex, image) pairs
    injectivity: tuple  # pairs of link vertices with the same image
    fullness: tuple  # non-adjacent pairs whose images are adjacent

    @property
    def ok(self) -> bool:
        return not self.injectivity and not self.fullness


@dataclass(frozen=True)
class IsometryReport:
    cubical_violations: tuple
    flag_violations: tuple
    vertices: tuple

    @property
    def certified(self) -> bool:
        return (
            not self.cubical_violations
            and not self.flag_violations
            and all(v.ok for v in self.vertices)
        )

    @property
    def failing_vertices(self) -> list:
        return [v.vertex for v in self.vertices if not v.ok]

    def to_json(self) -> dict:
        j = to_jsonable
        return {
            "certified": self.certified,
            "cubical_violations": [{"cube": j(c), "reason": r} for c, r in self.cubical_violations],
            "flag_violations": [
                {"vertex": j(v), "clique": [j(x) for x in cl]} for v, cl in self.flag_violations
            ],
            "vertices": [
                {
                    "vertex": j(vc.vertex),
                    "link_map": [[j(a), j(b)] for a, b in vc.link_map],
                    "injectivity": [[j(a), j(b)] for a, b in vc.injectivity],
                    "fullness": [[j(a), j(b)] for a, b in vc.fullness],
                }
                for vc in self.vertices
            ],
        }


def _certify_vertices(f: CubicalMap, vertices: list) -> list[VertexCertificate]:
    out = []
    links = f.source.links
    for v in vertices:
        link = links[v]
        table = tuple((lv, f.link_image(lv)) for lv in link.vertices)
        clash = []
        by_image: dict = {}
        for lv, img in table:
            if img in by_image:
                clash.append((by_image[img], lv))
            else:
                by_image[img] = lv
        # full subgraph: every target link edge between images comes from the source
        missing = []
        for (a, ia), (b, ib) in itertools.combinations(table, 2):
            if f.target.link_adjacent(ia, ib) and b not in link.graph[a]:
                missing.append((a, b))
        out.append(VertexCertificate(v, table, tuple(clash), tuple(missing)))
    return out


def check_local_isometry(f: CubicalMap, jobs: int = 1) -> IsometryReport:
    """Per-vertex link checks: the induced link map must be injective with full image.

    Source links are flag-checked first; the target's links are flag by
    construction.  Non-cubical cubes are reported rather than raised so that a
    corrupted map still gets localised.
    """
    cubical = tuple(cubicality_violations(f))
    flag = check_flag(f.source).violations
    verts = list(f.source.vertices)
    if jobs > 1 and len(verts) > 1:
        chunks = [verts[k::jobs] for k in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_certify_vertices, [f] * len(chunks), chunks))
        done = {vc.vertex: vc for part in parts for vc in part}
        certs = [done[v] for v in verts]
    else:
        certs = _certify_vertices(f, verts)
    return IsometryReport(cubical, flag, tuple(certs))


# fundamental group ------------------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    """Generators are non-tree edges; letters are ``(edge, +-1)``."""

    basepoint: Any
    tree: Mapping = field(hash=False)  # vertex -> (edge, direction from parent) or None
    generators: tuple = ()
    relators: tuple = ()

    def path_to_base(self, x: CubeComplex, v) -> list:
        """Edge traversals leading from ``v`` back to the basepoint."""
        steps = []
        while self.tree[v] is not None:
            edge, direction = self.tree[v]
            steps.append((edge, -direction))
            tail, head = x.endpoints(edge)
            v = tail if direction == 1 else head
        return steps

    def to_json(self) -> dict:
        j = to_jsonable
        return {
            "basepoint": j(self.basepoint),
            "generators": [j(g) for g in self.generators],
            "relators": [[[j(e), s] for e, s in r] for r in self.relators],
        }


def _letter_key(letter) -> tuple:
    return (vertex_key(letter[0]), 0 if letter[1] > 0 else 1)


def _rotate_to_least(word: tuple) -> tuple:
    if not word:
        return word
    k = min(range(len(word)), key=lambda i: _letter_key(word[i]))
    return word[k:] + word[:k]


def fundamental_group_presentation(x: CubeComplex, basepoint=None) -> Presentation:
    """BFS spanning tree from the basepoint, children taken in label order.

    Only the 2-skeleton matters; higher cubes are ignored.
    """
    if not x.vertices:
        raise InputError("empty complex")
    if basepoint is None:
        basepoint = x.vertices[0]
    if basepoint not in x.facets or x.dim(basepoint) != 0:
        raise InputError(f"{basepoint!r} is not a vertex")
    incident: dict = {v: [] for v in x.vertices}
    for e in x.cells(1):
        tail, head = x.endpoints(e)
        incident[tail].append((e, 1, head))
        incident[head].append((e, -1, tail))
    for v in incident:
        incident[v].sort(key=lambda t: (vertex_key(t[0]), -t[1]))
    tree: dict = {basepoint: None}
    tree_edges = set()
    queue = deque([basepoint])
    while queue:
        v = queue.popleft()
        for e, direction, w in incident[v]:
            if w not in tree:
                tree[w] = (e, direction)
                tree_edges.add(e)
                queue.append(w)
    if len(tree) != len(x.vertices):
        comps, seen = [], set()
        for root in x.vertices:
            if root in seen:
                continue
            comp, todo = [], [root]
            seen.add(root)
            while todo:
                v = todo.pop()
                comp.append(v)
                for _, _, w in incident[v]:
                    if w not in seen:
                        seen.add(w)
                        todo.append(w)
            comps.append(sorted(comp, key=vertex_key))
        raise DisconnectedError(comps)
    gens = tuple(e for e in x.cells(1) if e not in tree_edges)
    relators = tuple(
        _rotate_to_least(tuple((e, s) for e, s in square_boundary(x, sq) if e not in tree_edges))
        for sq in x.cells(2)
    )
    return Presentation(basepoint, tree, gens, relators)


@dataclass(frozen=True)
class HomomorphismReport:
    images: Mapping = field(hash=False)
    relator_images: tuple = ()  # (relator, image word, trivial?)

    @property
    def all_trivial(self) -> bool:
        return all(ok for _, _, ok in self.relator_images)

    def to_json(self, target: RaagPresentation) -> dict:
        j = to_jsonable
        return {
            "generator_images": [[j(g), target.format(w)] for g, w in self.images.items()],
            "relators": [
                {"relator": [[j(e), s] for e, s in r], "image": target.format(img), "trivial": ok}
                for r, img, ok in self.relator_images
            ],
            "all_trivial": self.all_trivial,
        }


def target_presentation(f: CubicalMap) -> RaagPresentation:
    return RaagPresentation(f.target.defining_graph)


def induced_homomorphism(f: CubicalMap, pres: Presentation) -> HomomorphismReport:
    """Read each generator loop through the edge labels and check every relator maps to 1."""
    x = f.source
    target = target_presentation(f)

    def read(steps) -> Word:
        out = []
        for edge, direction in steps:
            gen, sign = f.assignment[edge]
            out.append((gen, sign * direction))
        return tuple(out)

    images = {}
    for e in pres.generators:
        tail, head = x.endpoints(e)
        loop = (
            [(edge, -d) for edge, d in reversed(pres.path_to_base(x, tail))]
            + [(e, 1)]
            + pres.path_to_base(x, head)
        )
        images[e] = read(loop)
    checks = []
    for rel in pres.relators:
        img: Word = ()
        for e, s in rel:
            img += images[e] if s > 0 else inverse(images[e])
        checks.append((rel, img, is_trivial(target, img)))
    return HomomorphismReport(images, tuple(checks))


# covers of opposite graphs -----------------------------------------------------------

@dataclass(frozen=True)
class CoverHomomorphism:
    base: RaagPresentation
    cover: RaagPresentation
    images: Mapping = field(hash=False)
    lifts_commute: bool = True
    corpus_size: int = 0
    unreduced: tuple = ()  # corpus words whose image is not reduced
    collisions: tuple = ()  # pairs of corpus words with equal images

    def apply(self, w: Word) -> Word:
        out: Word = ()
        for g, s in w:
            out += self.images[g] if s > 0 else inverse(self.images[g])
        return out

    @property
    def ok(self) -> bool:
        return self.lifts_commute and not self.unreduced and not self.collisions

    def to_json(self) -> dict:
        fmt_b, fmt_c = self.base.format, self.cover.format
        return {
            "images": [[fmt_b(((g, 1),)), fmt_c(w)] for g, w in self.images.items()],
            "lifts_commute": self.lifts_commute,
            "corpus_size": self.corpus_size,
            "unreduced": [fmt_b(w) for w in self.unreduced],
            "collisions": [[fmt_b(a), fmt_b(b)] for a, b in self.collisions],
            "ok": self.ok,
        }


def cover_homomorphism(
    base: RaagPresentation, cover: GraphMorphism, sheets: int, corpus_len: int = 3
) -> CoverHomomorphism:
    """Send each generator to the product of its lifts through a cover of opposite graphs.

    The report re-checks that the lifts commute, that reduced corpus words map
    to reduced words, and that distinct corpus elements stay distinct.
    """
    verdict = validate_cover(cover, sheets)
    if not verdict.valid:
        raise InputError(f"not a {sheets}-sheeted cover at {verdict.vertex!r}: {verdict.reason}")
    opp = opposite_graph(base.graph)
    if cover.target.vertices != opp.vertices or cover.target.edges != opp.edges:
        raise InputError("cover target is not the opposite graph of the defining graph")
    covering = RaagPresentation(opposite_graph(cover.source))
    fibers: dict = {g: [] for g in base.generators}
    for v in cover.source.vertices:
        fibers[cover(v)].append(v)
    images = {
        g: tuple((h, 1) for h in sorted(fibers[g], key=vertex_key)) for g in base.generators
    }
    commute = all(
        is_trivial(covering, commutator(((a, 1),), ((b, 1),)))
        for g in base.generators
        for a, b in itertools.combinations(images[g], 2)
        for a, b in [(a[0], b[0])]
    )
    hom = CoverHomomorphism(base, covering, images, commute)
    corpus = reduced_elements(base, corpus_len)
    unreduced = tuple(w for w in corpus if not is_delta_reduced(covering, hom.apply(w)))
    seen: dict = {}
    collisions = []
    for w in corpus:
        key = normal_form(covering, hom.apply(w))
        if key in seen:
            collisions.append((seen[key], w))
        else:
            seen[key] = w
    return CoverHomomorphism(
        base, covering, images, commute, len(corpus), unreduced, tuple(collisions)
    )
