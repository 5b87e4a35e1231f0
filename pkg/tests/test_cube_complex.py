import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubist import BudgetExceeded, InputError
from cubist.cube_complex import (
    CubeComplex,
    check_flag,
    complex_from_json,
    complex_to_json,
    hollow_cube,
    identify_surface,
    is_closed_surface,
    is_orientable,
    one_square_torus,
    reduced_config_space,
    star_complex,
    vertex_link,
)
from cubist.graph_core import builtin_graph, parse_builtin, subdivide

from oracles import brute_config_counts

CORPUS = ["complete:4", "complete:5", "complete_bipartite:3,3", "cycle:6", "path:4", "petersen"]


@pytest.mark.parametrize("shorthand", CORPUS)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_f_vector_matches_brute_force(shorthand, n):
    g = parse_builtin(shorthand)
    x = reduced_config_space(g, n)
    assert list(x.f_vector()) == brute_config_counts(g.edges, g.vertices, n)


@pytest.mark.parametrize(
    "shorthand, n, fv, chi",
    [
        ("complete_bipartite:3,3", 2, (15, 36, 18), -3),
        ("complete:5", 2, (10, 30, 15), -5),
        ("cycle:5", 1, (5, 5), 0),
        ("complete_bipartite:3,3", 3, (20, 54, 36, 6), -4),
    ],
)
def test_known_config_spaces(shorthand, n, fv, chi):
    x = reduced_config_space(parse_builtin(shorthand), n)
    assert x.f_vector() == fv
    assert x.euler_characteristic() == chi


def test_config_space_edge_labels_name_the_moving_edge():
    x = reduced_config_space(builtin_graph("complete", [4]), 2)
    for e in x.cells(1):
        edge, sign = x.edge_labels[e]
        assert sign == 1 and edge in e
        tail, head = x.endpoints(e)
        assert tail == tuple(sorted(set(e) - {edge} | {(edge[0],)}))
        assert head == tuple(sorted(set(e) - {edge} | {(edge[1],)}))


def test_too_many_points_gives_empty_complex():
    x = reduced_config_space(builtin_graph("path", [2]), 3)
    assert x.f_vector() == ()


def test_budget():
    with pytest.raises(BudgetExceeded):
        reduced_config_space(builtin_graph("complete", [8]), 3, max_cubes=50)


def test_facets_satisfy_cubical_identities():
    x = reduced_config_space(builtin_graph("complete_bipartite", [3, 3]), 3)
    x.validate()
    for c in x.cells(3):
        # opposite corners of a cube are distinct vertices
        assert x.corner(c, (0, 0, 0)) != x.corner(c, (1, 1, 1))


def test_inconsistent_faces_rejected():
    facets = {"u": (), "v": (), "e": (("u", "v"),), "f": (("u", "v"),),
              "s": (("e", "f"), ("u", "v"))}
    with pytest.raises(InputError):
        CubeComplex.from_facets(facets)


# links and flags ------------------------------------------------------------------

def test_hollow_cube_fails_flag_at_every_vertex():
    report = check_flag(hollow_cube())
    assert not report.passed
    assert len(report.violations) == 8
    assert {v for v, _ in report.violations} == set(hollow_cube().vertices)
    assert all(len(clique) == 3 for _, clique in report.violations)


def test_solid_cube_is_flag():
    solid = star_complex(["***"])
    assert solid.f_vector() == (8, 12, 6, 1)
    assert check_flag(solid).passed


@pytest.mark.parametrize("shorthand", CORPUS + ["cycle:3"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_config_spaces_are_flag(shorthand, n):
    assert check_flag(reduced_config_space(parse_builtin(shorthand), n)).passed


def test_subdivided_config_spaces_are_flag():
    g = subdivide(builtin_graph("complete", [5]), 2)
    for n in (2, 3):
        assert check_flag(reduced_config_space(g, n)).passed


def test_links_of_k5_are_hexagons():
    x = reduced_config_space(builtin_graph("complete", [5]), 2)
    for v in x.vertices:
        link = vertex_link(x, v)
        assert len(link.vertices) == 6
        assert all(len(nbrs) == 2 for nbrs in link.graph.values())


def test_link_vertex_count_is_degree():
    x = reduced_config_space(builtin_graph("petersen"), 2)
    for v in x.vertices:
        degree = sum(1 for e in x.cells(1) if v in x.endpoints(e))
        assert len(vertex_link(x, v).vertices) == degree


# surfaces ---------------------------------------------------------------------------

def test_torus():
    t = one_square_torus()
    assert is_closed_surface(t) and is_orientable(t)
    s = identify_surface(t)
    assert (s.euler_characteristic, s.orientable) == (0, True)
    assert len(vertex_link(t, "v").vertices) == 4


def test_k33_and_k5_surfaces_are_nonorientable():
    for shorthand, chi in [("complete_bipartite:3,3", -3), ("complete:5", -5)]:
        s = identify_surface(reduced_config_space(parse_builtin(shorthand), 2))
        assert s.is_closed_surface and not s.orientable and s.euler_characteristic == chi


def test_sphere_from_hollow_cube_is_orientable():
    s = identify_surface(hollow_cube())
    assert s.is_closed_surface and s.orientable and s.euler_characteristic == 2


def test_graph_with_boundary_is_not_closed():
    x = reduced_config_space(builtin_graph("complete", [4]), 2)
    assert not identify_surface(x).is_closed_surface


def test_surface_id_rejects_three_dimensional_input():
    with pytest.raises(InputError):
        identify_surface(reduced_config_space(builtin_graph("complete_bipartite", [3, 3]), 3))


# JSON ---------------------------------------------------------------------------------

@settings(max_examples=15, deadline=None)
@given(st.sampled_from(CORPUS), st.integers(1, 3))
def test_complex_json_round_trip(shorthand, n):
    x = reduced_config_space(parse_builtin(shorthand), n)
    y = complex_from_json(json.loads(json.dumps(complex_to_json(x))))
    assert y.cubes == x.cubes and y.facets == x.facets and y.edge_labels == x.edge_labels


def test_complex_json_rejects_missing_faces():
    data = complex_to_json(one_square_torus())
    data["faces"] = data["faces"][:-1]
    with pytest.raises(InputError):
        complex_from_json(data)
