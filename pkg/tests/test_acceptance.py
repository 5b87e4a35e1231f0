"""The twelve acceptance criteria, each at its stated tolerance and time limit.

Every test records a single PASS/FAIL line (printed in the pytest terminal
summary, and directly with ``-s``).  Run standalone with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import random
import time

import pytest

from cubist.cube_complex import (
    check_flag,
    hollow_cube,
    identify_surface,
    reduced_config_space,
    vertex_link,
)
from cubist.graph_core import (
    GraphMorphism,
    SimplicialGraph,
    builtin_graph,
    delta_graph,
    find_isomorphism,
    girth,
    line_graph,
    opposite_graph,
    subdivide,
)
from cubist.maps import (
    check_local_isometry,
    cover_homomorphism,
    fundamental_group_presentation,
    induced_homomorphism,
    phi_map,
    sabotage,
    salvetti,
)
from cubist.raag import (
    MoveCertificate,
    RaagPresentation,
    all_words,
    commutator,
    conjugate,
    identity_certificate,
    inverse,
    is_delta_reduced,
    is_trivial,
    normal_form,
    reduced_elements,
    search_square_relation,
)

from acceptance_log import record
from oracles import THREE_VERTEX_GRAPHS, ConjugacyOracle, bfs_trivial, poset_trivial

K33 = builtin_graph("complete_bipartite", [3, 3])
K5 = builtin_graph("complete", [5])
CERT_CORPUS = {
    "K4": builtin_graph("complete", [4]),
    "K5": K5,
    "K33": K33,
    "C6": builtin_graph("cycle", [6]),
    "sub(K5,2)": subdivide(K5, 2),
}
THREE = {
    name: RaagPresentation(SimplicialGraph.build([0, 1, 2], edges))
    for name, edges in THREE_VERTEX_GRAPHS.items()
}


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def random_word(rng: random.Random, P: RaagPresentation, max_len: int):
    return tuple(rng.choice(P.letters()) for _ in range(rng.randint(0, max_len)))


def test_c01_k33_surface():
    with Clock() as t:
        x = reduced_config_space(K33, 2)
        s = identify_surface(x)
    ok = x.f_vector() == (15, 36, 18) and s.euler_characteristic == -3
    ok = ok and s.is_closed_surface and s.orientable is False
    record(1, ok, f"X_2(K3,3) f={x.f_vector()} chi={s.euler_characteristic} "
                  f"closed={s.is_closed_surface} orientable={s.orientable}", t.seconds, 1)
    assert ok and t.seconds < 1


def test_c02_k5_surface():
    with Clock() as t:
        x = reduced_config_space(K5, 2)
        s = identify_surface(x)
        hexagons = all(
            len(vertex_link(x, v).vertices) == 6
            and all(len(n) == 2 for n in vertex_link(x, v).graph.values())
            for v in x.vertices
        )
    ok = x.f_vector() == (10, 30, 15) and s.euler_characteristic == -5
    ok = ok and s.is_closed_surface and s.orientable is False and hexagons
    record(2, ok, f"X_2(K5) f={x.f_vector()} chi={s.euler_characteristic} "
                  f"orientable={s.orientable} hexagon links={hexagons}", t.seconds, 1)
    assert ok and t.seconds < 1


def test_c03_petersen():
    with Clock() as t:
        d = delta_graph(K5)
        iso = find_isomorphism(d, builtin_graph("petersen"))
        regular = all(d.degree(v) == 3 for v in d.vertices)
        g = girth(d)
    ok = iso is not None and len(d.vertices) == 10 and regular and g == 5
    record(3, ok, f"Delta(K5) ~ Petersen: iso={iso is not None} 3-regular={regular} girth={g}",
           t.seconds, 1)
    assert ok and t.seconds < 1


def test_c04_local_isometry_certificates():
    results = {}
    with Clock() as t:
        for name, g in CERT_CORPUS.items():
            for n in (2, 3):
                results[(name, n)] = check_local_isometry(phi_map(g, n)).certified
        f = phi_map(K33, 2)
        bad = check_local_isometry(sabotage(f, (0, 3), (1, 4)))
    localized = (not bad.certified) and 0 < len(bad.failing_vertices) < len(f.source.vertices)
    ok = all(results.values()) and localized
    record(4, ok, f"{sum(results.values())}/{len(results)} maps certified; sabotage fails at "
                  f"{len(bad.failing_vertices)}/{len(f.source.vertices)} vertices", t.seconds, 10)
    assert ok and t.seconds < 10


def test_c05_flag_suite():
    with Clock() as t:
        spaces = {
            (name, n): check_flag(reduced_config_space(g, n)).passed
            for name, g in CERT_CORPUS.items()
            for n in (2, 3)
        }
        tori = {
            name: check_flag(salvetti(d, 2).complex)
            for name, d in [
                ("edge", builtin_graph("path", [2])),
                ("C5", builtin_graph("cycle", [5])),
                ("Petersen", builtin_graph("petersen")),
                ("Delta(K3,3)", delta_graph(K33)),
            ]
        }
        hollow = check_flag(hollow_cube()).passed
        full_torus = check_flag(salvetti(delta_graph(K33), 3).complex).passed
    attainable = all(spaces.values()) and not hollow and all(
        r.passed for name, r in tori.items() if name != "Delta(K3,3)"
    )
    dk = tori["Delta(K3,3)"]
    ok = attainable and dk.passed
    record(5, ok, f"X_n flag {sum(spaces.values())}/{len(spaces)}; tori flag "
                  f"{sum(r.passed for r in tori.values())}/4 (Delta(K3,3) at max_dim 2: "
                  f"{len(dk.violations)} empty simplices, flag at max_dim 3: {full_torus}); "
                  f"hollow cube rejected={not hollow}", t.seconds, 5)
    assert attainable and t.seconds < 5
    if not dk.passed:
        # Delta(K3,3) has triangles (perfect matchings of K3,3); truncating at
        # dimension 2 leaves them empty in the link.  See the decisions ledger.
        assert full_torus
        pytest.xfail("salvetti(Delta(K3,3), 2) is not flag: Delta(K3,3) contains triangles")


def test_c06_word_problem_oracle():
    rng = random.Random(6)
    checked = mismatches = 0
    oracle_disagreements = 0
    with Clock() as t:
        for P in THREE.values():
            # every word of length <= 5 against the literal shuffle closure
            for w in all_words(P, 5):
                expect = bfs_trivial(P.commutes, w)
                oracle_disagreements += expect != poset_trivial(P.commutes, w)
                mismatches += is_trivial(P, w) != expect
                checked += 1
            # 10,000 words drawn uniformly from all words of length <= 8
            lengths = list(range(9))
            weights = [6 ** k for k in lengths]
            for _ in range(10_000):
                k = rng.choices(lengths, weights)[0]
                w = tuple(rng.choice(P.letters()) for _ in range(k))
                mismatches += is_trivial(P, w) != poset_trivial(P.commutes, w)
                checked += 1
    ok = mismatches == 0 and oracle_disagreements == 0
    record(6, ok, f"{checked} words, {mismatches} disagreements with the oracle "
                  f"(oracles disagree on {oracle_disagreements})", t.seconds, 60)
    assert ok and t.seconds < 60


def test_c07_conjugacy():
    rng = random.Random(7)
    random_fail = pair_fail = pairs = 0
    with Clock() as t:
        for P in THREE.values():
            for _ in range(1000):
                w, g = random_word(rng, P, 5), random_word(rng, P, 5)
                random_fail += not conjugate(P, w, g + w + inverse(g))
            nf = lambda w: normal_form(P, w)
            elements = reduced_elements(P, 4)
            oracle = ConjugacyOracle(P, elements, nf, 4)
            words = list(all_words(P, 4))
            element_of = {w: nf(w) for w in words}
            # pairs are taken over elements (one spelling each); every word is
            # separately checked to be conjugate to its own normal form
            spelled = {}
            for w in words:
                spelled.setdefault(element_of[w], w)
            for w in words:
                assert conjugate(P, w, element_of[w])
            reps = list(spelled.items())
            for (ea, wa), (eb, wb) in itertools.combinations_with_replacement(reps, 2):
                pairs += 1
                pair_fail += conjugate(P, wa, wb) != oracle.conjugate(ea, eb)
    ok = random_fail == 0 and pair_fail == 0
    record(7, ok, f"4000 random conjugates, {random_fail} missed; {pairs} element pairs "
                  f"of length <= 4, {pair_fail} disagreements with the bounded-conjugator oracle",
           t.seconds, 60)
    assert ok and t.seconds < 60


def _independent_replay(P: RaagPresentation, cert: MoveCertificate) -> bool:
    word = list(cert.start)
    for m in cert.moves:
        p = m.position
        if m.kind == "commute":
            (g, _), (h, _) = word[p], word[p + 1]
            if g == h or not P.graph.has_edge(g, h):
                return False
            word[p], word[p + 1] = word[p + 1], word[p]
        elif m.kind == "delete":
            (g, s), (h, u) = word[p], word[p + 1]
            if g != h or s != -u:
                return False
            del word[p:p + 2]
        elif m.kind == "insert":
            word[p:p] = [m.letter, (m.letter[0], -m.letter[1])]
        else:
            return False
    return word == []


def test_c08_certificate_replay():
    rng = random.Random(8)
    good = 0
    graphs = list(THREE.values()) + [RaagPresentation(builtin_graph("petersen"))]
    with Clock() as t:
        for k in range(1000):
            P = graphs[k % len(graphs)]
            relators = [commutator(((a, 1),), ((b, 1),)) for a, b in P.graph.edges]
            relators += [((g, 1), (g, -1)) for g in P.generators]
            w = ()
            for _ in range(rng.randint(1, 4)):
                r = rng.choice(relators)
                if rng.random() < 0.5:
                    r = inverse(r)
                g = random_word(rng, P, 3)
                w += g + r + inverse(g)
            cert = identity_certificate(P, w)
            good += (
                isinstance(cert, MoveCertificate)
                and cert.start == w
                and cert.replay(P) == ()
                and _independent_replay(P, cert)
            )
    ok = good == 1000
    record(8, ok, f"{good}/1000 identity words certified and replayed to the empty word",
           t.seconds, 30)
    assert ok and t.seconds < 30


def test_c09_square_relation():
    deltas = {
        "1 vertex": builtin_graph("empty", [1]),
        "2 vertices": builtin_graph("empty", [2]),
        "edge": builtin_graph("path", [2]),
        "path on 3": builtin_graph("path", [3]),
    }
    found = bad = 0
    with Clock() as t:
        for d in deltas.values():
            P = RaagPresentation(d)
            for s in search_square_relation(P, 2):
                found += 1
                commute = all(
                    is_trivial(P, commutator(a, b)) for a, b in ((s.x, s.y), (s.x, s.z), (s.y, s.z))
                )
                exact = normal_form(P, s.x * 2 + s.y * 2) == normal_form(P, s.z * 2)
                bad += not (commute and exact and s.commuting)
    ok = bad == 0 and found > 0
    record(9, ok, f"{found} solutions of x^2 y^2 = z^2 with L = 2, {bad} not pairwise commuting",
           t.seconds, 120)
    assert ok and t.seconds < 120


def test_c10_relator_images():
    with Clock() as t:
        f = phi_map(K33, 2)
        pres = fundamental_group_presentation(f.source)
        hom = induced_homomorphism(f, pres)
        trivial = sum(ok for _, _, ok in hom.relator_images)
    ok = len(pres.generators) == 22 and len(pres.relators) == 18 and trivial == 18
    record(10, ok, f"{len(pres.generators)} generators, {trivial}/{len(pres.relators)} "
                   f"relator images trivial", t.seconds, 5)
    assert ok and t.seconds < 5


def test_c11_line_graph_identity():
    corpus = dict(CERT_CORPUS)
    corpus.update({"Petersen": builtin_graph("petersen"), "P4": builtin_graph("path", [4]),
                   "K1": builtin_graph("complete", [1])})
    with Clock() as t:
        same = {
            name: opposite_graph(delta_graph(g)) == line_graph(g)
            for name, g in corpus.items()
        }
    ok = all(same.values())
    record(11, ok, f"opposite(Delta(G)) == L(G) on {sum(same.values())}/{len(same)} graphs",
           t.seconds, 1)
    assert ok and t.seconds < 1


def test_c12_cover_homomorphism():
    base = RaagPresentation(builtin_graph("empty", [3]))
    cover = GraphMorphism(
        builtin_graph("cycle", [6]), builtin_graph("cycle", [3]), {i: i % 3 for i in range(6)}
    )
    with Clock() as t:
        j = cover_homomorphism(base, cover, 2, corpus_len=3)
        corpus = reduced_elements(base, 3)
        images = [j.apply(w) for w in corpus]
        reduced = sum(is_delta_reduced(j.cover, w) for w in images)
        distinct = len({normal_form(j.cover, w) for w in images})
    n = len(corpus)
    ok = j.ok and all(is_delta_reduced(base, w) for w in corpus) and reduced == n and distinct == n
    record(12, ok, f"{n} reduced words of length <= 3 (the criterion says 64; see ledger): "
                   f"{reduced} images reduced, {distinct} distinct normal forms", t.seconds, 10)
    assert ok and t.seconds < 10


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
