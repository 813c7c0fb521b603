from __future__ import annotations

import dataclasses
import json

import pytest
from hypothesis import given, strategies as st

from tricolor.errors import (
    DimensionNotDivisibleBy3,
    InvalidDistanceParameter,
    InvalidLattice,
    NotASphere,
    UnknownSite,
)
from tricolor.lattice import (
    COLORS,
    Color,
    Link,
    Plaquette,
    build_cube_sphere,
    build_hex_torus,
    build_triangle_488,
    build_triangle_666,
    canonical_form,
    close_triangle,
    dumps,
    from_dict,
    loads,
    make_triangle_from_sphere,
    shrunk_graph,
    to_dict,
    validate,
)

TORI = [(3, 3), (3, 6), (6, 3), (6, 6), (9, 3)]
ODD_D = [3, 5, 7, 9]

# site counts from the explicit constructions, audited by validate()
N_666 = {3: 7, 5: 19, 7: 37, 9: 61}
N_488 = {3: 7, 5: 17, 7: 31, 9: 49}


def _check(report, name):
    return next(c for c in report.checks if c.name == name)


@pytest.mark.parametrize("a,b", TORI)
def test_hex_torus_counts(a, b):
    lat = build_hex_torus(a, b)
    assert len(lat.plaquettes) == a * b
    assert lat.n == 2 * a * b
    assert len(lat.links) == 3 * a * b
    assert lat.euler_characteristic == 0
    assert all(len(p.sites) == 6 for p in lat.plaquettes)
    report = validate(lat)
    assert report.ok, report.failed()
    assert report.euler_characteristic == 0


def test_hex_torus_3x3_colors():
    lat = build_hex_torus(3, 3)
    assert [len(lat.plaquettes_of(c)) for c in COLORS] == [3, 3, 3]
    assert [len(lat.links_of(c)) for c in COLORS] == [9, 9, 9]


@pytest.mark.parametrize("a,b", [(4, 3), (3, 4), (2, 3), (0, 3), (3, 5)])
def test_hex_torus_rejects_bad_periods(a, b):
    with pytest.raises(DimensionNotDivisibleBy3):
        build_hex_torus(a, b)


@pytest.mark.parametrize("d", ODD_D)
def test_triangle_666(d):
    lat = build_triangle_666(d)
    assert validate(lat).ok
    assert lat.n == N_666[d] == (3 * d * d + 1) // 4
    assert lat.n % 2 == 1
    assert sorted(b.color for b in lat.borders) == list(COLORS)


@pytest.mark.parametrize("d", ODD_D)
def test_triangle_488(d):
    lat = build_triangle_488(d)
    assert validate(lat).ok
    assert lat.n == N_488[d]
    assert lat.n % 2 == 1
    assert {len(p.sites) for p in lat.plaquettes} <= {4, 8}
    assert all(len(p.sites) % 4 == 0 for p in lat.plaquettes)


def test_smallest_triangle_has_three_square_plaquettes():
    lat = build_triangle_666(3)
    assert lat.n == 7
    assert sorted(len(p.sites) for p in lat.plaquettes) == [4, 4, 4]
    assert sorted(p.color for p in lat.plaquettes) == list(COLORS)


@pytest.mark.parametrize("builder", [build_triangle_666, build_triangle_488])
@pytest.mark.parametrize("d", [2, 4, 1, -3, 0])
def test_triangle_rejects_bad_distance(builder, d):
    with pytest.raises(InvalidDistanceParameter):
        builder(d)


def test_cube_sphere_minus_any_site_is_smallest_triangle():
    sphere = build_cube_sphere()
    assert validate(sphere).ok
    assert sphere.euler_characteristic == 2
    target = canonical_form(build_triangle_666(3))
    for s in range(sphere.n):
        tri = make_triangle_from_sphere(sphere, s)
        assert validate(tri).ok
        assert canonical_form(tri) == target


def test_smallest_triangles_of_both_families_coincide():
    assert canonical_form(build_triangle_666(3)) == canonical_form(build_triangle_488(3))
    assert canonical_form(build_triangle_666(5)) != canonical_form(build_triangle_488(5))


@pytest.mark.parametrize("builder", [build_triangle_666, build_triangle_488])
@pytest.mark.parametrize("d", [3, 5, 7])
def test_close_then_cut_round_trip(builder, d):
    tri = builder(d)
    sphere = close_triangle(tri)
    assert validate(sphere).ok
    assert sphere.euler_characteristic == 2
    back = make_triangle_from_sphere(sphere, sphere.n - 1)
    assert canonical_form(back) == canonical_form(tri)


def test_make_triangle_errors():
    with pytest.raises(NotASphere):
        make_triangle_from_sphere(build_hex_torus(3, 3), 0)
    with pytest.raises(NotASphere):
        make_triangle_from_sphere(build_triangle_666(3), 0)
    with pytest.raises(UnknownSite):
        make_triangle_from_sphere(build_cube_sphere(), 8)
    with pytest.raises(UnknownSite):
        make_triangle_from_sphere(build_cube_sphere(), -1)


def test_shrunk_graph_torus():
    lat = build_hex_torus(3, 3)
    g = shrunk_graph(lat, Color.R)
    assert len(g.vertices) == 3
    assert len(g.edges) == 9
    assert all(e.ends[0] is not None and e.ends[1] is not None for e in g.edges)


def test_shrunk_graph_smallest_triangle():
    g = shrunk_graph(build_triangle_666(3), Color.R)
    assert len(g.vertices) == 1


@pytest.mark.parametrize(
    "lat",
    [build_hex_torus(3, 3), build_hex_torus(6, 3), build_cube_sphere(), build_triangle_488(5)],
    ids=["torus33", "torus63", "sphere", "tri488"],
)
def test_shrunk_edges_cover_two_sites(lat):
    for c in COLORS:
        g = shrunk_graph(lat, c)
        for e in g.edges:
            assert len(set(e.qubits)) == 2
        # same-colored links never share a site
        covered = [q for e in g.edges for q in e.qubits]
        assert len(covered) == len(set(covered))


@pytest.mark.parametrize(
    "lat", [build_hex_torus(3, 3), build_hex_torus(3, 6), build_cube_sphere()], ids=["torus33", "torus36", "sphere"]
)
def test_shrunk_faces_are_other_plaquettes(lat):
    # on a closed surface the faces of the c-shrunk graph are the plaquettes of the other two colors
    for c in COLORS:
        g = shrunk_graph(lat, c)
        faces = len(lat.plaquettes) - len(g.vertices)
        assert len(g.vertices) - len(g.edges) + faces == lat.euler_characteristic


def test_validate_flags_recolored_link():
    lat = build_hex_torus(3, 3)
    bad = lat.links[5]
    other = next(c for c in COLORS if c != bad.color)
    links = list(lat.links)
    links[5] = Link(bad.id, bad.ends, other)
    report = validate(dataclasses.replace(lat, links=tuple(links)))
    check = _check(report, "link_color_is_third")
    assert not check.passed
    assert check.offenders == (5,)


def test_validate_flags_adjacent_same_color():
    lat = build_hex_torus(3, 3)
    p = lat.plaquettes[0]
    neighbor = next(
        q for q in lat.plaquettes if q.color != p.color and set(q.sites) & set(p.sites)
    )
    plaqs = list(lat.plaquettes)
    plaqs[neighbor.id] = Plaquette(neighbor.id, p.color, neighbor.sites)
    report = validate(dataclasses.replace(lat, plaquettes=tuple(plaqs)))
    check = _check(report, "plaquettes_three_colored")
    assert not check.passed
    assert neighbor.id in check.offenders


@pytest.mark.parametrize(
    "lat", [build_hex_torus(3, 3), build_triangle_666(5), build_triangle_488(5)], ids=["torus", "666", "488"]
)
def test_json_round_trip_is_byte_stable(lat):
    text = dumps(lat)
    again = dumps(loads(text))
    assert text == again
    data = json.loads(text)
    assert {"surface", "sites", "links", "plaquettes"} <= set(data)
    assert ("borders" in data) == (lat.surface == "triangle")
    assert validate(loads(text)).ok


def test_from_dict_rejects_malformed():
    data = to_dict(build_triangle_666(3))
    del data["links"][0]["color"]
    with pytest.raises(InvalidLattice):
        from_dict(data)
    with pytest.raises(InvalidLattice):
        loads("{not json")


def _relabel(lat, perm):
    data = to_dict(lat)
    for s in data["sites"]:
        s["id"] = perm[s["id"]]
    data["sites"].sort(key=lambda s: s["id"])
    for l in data["links"]:
        l["ends"] = [perm[e] for e in l["ends"]]
    for p in data["plaquettes"]:
        p["sites"] = [perm[s] for s in p["sites"]]
    for b in data.get("borders", []):
        b["sites"] = [perm[s] for s in b["sites"]]
    return from_dict(data)


@given(st.permutations(list(range(19))))
def test_canonical_form_ignores_site_labels(perm):
    lat = build_triangle_666(5)
    moved = _relabel(lat, perm)
    assert validate(moved).ok
    assert canonical_form(moved) == canonical_form(lat)
