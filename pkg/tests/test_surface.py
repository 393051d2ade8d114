import pytest
from hypothesis import given, strategies as st

from chromstack.surface import (
    MapError,
    OrientationError,
    PolyhedralMap,
    Triangulation,
    TriangulationError,
    dualize,
    map_dual,
    orient,
    preset,
    random_sphere,
    read_json,
    read_tri,
    rotate_min,
    truncate,
    validate,
    write_json,
    write_tri,
)

# six-vertex projective plane
RP2 = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2), (2, 4, 6), (2, 3, 5), (3, 4, 6), (4, 2, 5), (5, 3, 6)]


def _cyclic_set(faces):
    return {rotate_min(f) for f in faces}


@pytest.mark.parametrize(
    "name, counts",
    [("tetrahedron", (4, 6, 4)), ("octahedron", (6, 12, 8)), ("icosahedron", (12, 30, 20)), ("bipyramid(3)", (5, 9, 6))],
)
def test_preset_counts(name, counts):
    rep = validate(preset(name))
    assert rep.ok, str(rep)
    assert (rep.t0, rep.t1, rep.t2) == counts
    assert rep.euler == 2


def test_octahedron_triangles():
    tri = preset("octahedron")
    want = {"aeb", "ade", "efb", "def", "dcf", "adc", "cfb", "acb"}
    assert {frozenset(t) for t in tri.triangles} == {frozenset(w) for w in want}


def test_bipyramid_4_is_octahedron_like():
    tri = preset("bipyramid(4)")
    assert validate(tri).ok
    assert sorted(len(v) for v in tri.neighbours.values()) == [4] * 6


def test_double_wheel_valid():
    for n in (3, 5, 8):
        assert validate(preset(f"double-wheel({n})")).ok


def test_unknown_preset():
    with pytest.raises(KeyError):
        preset("cube")


def test_single_triangle_fails():
    rep = validate(Triangulation.from_triangles([("a", "b", "c")]))
    assert not rep.ok
    assert any("edge ab lies in 1 triangle" in p for p in rep.problems)
    with pytest.raises(TriangulationError, match="edge ab"):
        rep.raise_if_failed()


def test_incoherent_orientation_reported():
    tri = preset("octahedron")
    t = list(tri.triangles)
    t[3] = t[3][::-1]
    rep = validate(Triangulation(tri.vertices, tuple(t)))
    assert not rep.ok and not rep.problems
    assert rep.orientation_problems


def test_orient_restores_reversed_triangle():
    tri = preset("octahedron")
    t = list(tri.triangles)
    t[5] = t[5][::-1]
    fixed = orient(Triangulation(tri.vertices, tuple(t)))
    assert fixed.triangles == tri.triangles


def test_orient_idempotent():
    for name in ("tetrahedron", "octahedron", "icosahedron"):
        tri = preset(name)
        assert orient(tri) == tri
        assert orient(orient(tri)) == tri


def test_orient_tetrahedron_two_reversed():
    tri = preset("tetrahedron")
    t = list(tri.triangles)
    t[1], t[2] = t[1][::-1], t[2][::-1]
    fixed = orient(Triangulation(tri.vertices, tuple(t)))
    assert validate(fixed).ok
    assert all(tri.orientation_sign(*x) == 1 for x in fixed.triangles)


def test_orient_non_orientable_names_cycle():
    tri = Triangulation.from_triangles([tuple(map(str, x)) for x in RP2])
    with pytest.raises(OrientationError) as info:
        orient(tri)
    cyc = info.value.cycle
    assert len(cyc) >= 1
    assert all(e in tri.edge_index for e in cyc)


@pytest.mark.parametrize(
    "name, counts", [("tetrahedron", (4, 6, 4)), ("octahedron", (8, 12, 6)), ("icosahedron", (20, 30, 12))]
)
def test_dual_counts(name, counts):
    d = dualize(preset(name))
    assert d.counts == counts
    assert set(d.degree.values()) == {3}
    assert d.problems() == []


def test_dual_faces_named_by_vertices():
    tri = preset("octahedron")
    d = dualize(tri)
    assert set(d.names) == set(tri.vertices)
    # face around vertex v has deg(v) corners
    for name, face in zip(d.names, d.faces):
        assert len(face) == len(tri.neighbours[name])


def test_dual_of_dual_recovers_triangles():
    for name in ("tetrahedron", "octahedron", "icosahedron"):
        tri = preset(name)
        dd = map_dual(dualize(tri))
        assert _cyclic_set(dd.faces) == _cyclic_set(tri.triangles)


def test_truncate_cube_unchanged():
    cube = dualize(preset("octahedron"))
    assert truncate(cube).faces == cube.faces


def test_truncate_octahedron_map():
    octa = PolyhedralMap(preset("octahedron").triangles)
    assert set(octa.degree.values()) == {4}
    t = truncate(octa)
    v, e, f = t.counts
    assert (v, f) == (24, 14)
    assert v - e + f == 2
    squares = [face for face in t.faces if len(face) == 4]
    assert len(squares) == 6
    assert set(t.degree.values()) == {3}


def test_truncate_single_degree_five_vertex():
    ring = ["p", "q", "r", "s", "t"]
    faces = [("apex", ring[i], ring[(i + 1) % 5]) for i in range(5)] + [tuple(reversed(ring))]
    pyramid = PolyhedralMap(tuple(faces))
    assert sorted(pyramid.degree.values()) == [3, 3, 3, 3, 3, 5]
    t = truncate(pyramid)
    assert len(t.vertices) == len(pyramid.vertices) + 4
    assert [len(f) for f in t.faces].count(5) == 2  # the old base and the new one
    assert len(t.faces) == len(pyramid.faces) + 1


def test_truncate_rejects_degree_two():
    # a digon-like theta: two vertices joined through three faces is not allowed here;
    # use a map whose vertex "m" has degree 2
    faces = (("a", "b", "m", "c"), ("a", "c", "m", "b"))
    with pytest.raises(MapError):
        truncate(PolyhedralMap(faces))


def test_tri_roundtrip():
    for name in ("tetrahedron", "octahedron", "icosahedron"):
        tri = preset(name)
        assert read_tri(write_tri(tri)) == tri
        assert read_json(write_json(tri)) == tri


def test_tri_header_mismatch():
    with pytest.raises(TriangulationError, match="header"):
        read_tri("tri v=4 f=3\na b c\na c d\na d b\nb d c\n")
    with pytest.raises(TriangulationError):
        read_tri("a b c\n")


@given(st.integers(2, 30), st.integers(0, 10**6), st.integers(0, 20))
def test_random_sphere_valid(half, seed, flips):
    tri = random_sphere(2 * half, seed=seed, flips=flips)
    assert tri.t2 == 2 * half
    assert validate(tri).ok


def test_random_sphere_deterministic():
    assert random_sphere(20, seed=5, flips=7) == random_sphere(20, seed=5, flips=7)


def test_random_sphere_rejects_odd():
    with pytest.raises(ValueError):
        random_sphere(7)
