import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from homocover.errors import DegenerateError, GeometryError, NormalizationError
from homocover.geometry import (
    SubdivisionCell,
    contains,
    convex_hull,
    gauge,
    interior_point,
    longest_chord,
    simplex_volume,
    subdivide,
    support,
    triangulate,
)

from conftest import CUBE, SQUARE


def as_set(V, nd=9):
    return {tuple(np.round(v, nd)) for v in V}


# -- hull ------------------------------------------------------------------


def test_hull_drops_interior_point():
    K = convex_hull([[0, 0], [1, 0], [0, 1], [0.5, 0.25]], 2)
    assert len(K.vertices) == 3 and K.full_dimensional


def test_hull_cube():
    K = convex_hull(CUBE, 3)
    assert len(K.vertices) == 8
    assert len(K.normals) == 6
    assert len(K.faces) == 6


def test_hull_segment_in_space():
    K = convex_hull([[0, 0, 0], [1, 1, 1]], 3)
    assert K.affine_dim == 1
    assert K.facets == []
    assert K.normals is None


def test_hull_polygon_in_space():
    K = convex_hull([[0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1], [0.5, 0.5, 1]], 3)
    assert K.affine_dim == 2 and len(K.vertices) == 4


def test_hull_point():
    K = convex_hull([[1.0, 2.0, 3.0]] * 3, 3)
    assert K.affine_dim == 0 and len(K.vertices) == 1


def test_hull_errors():
    with pytest.raises(GeometryError):
        convex_hull(np.zeros((0, 2)), 2)
    with pytest.raises(GeometryError):
        convex_hull([[0, 0], [1, 0, 0]], 2)
    with pytest.raises(GeometryError):
        convex_hull([[0, 0, 0]], 2)


def test_hull_merges_coplanar_facets():
    # a cube with extra points on its faces still has 6 facets
    rng = np.random.default_rng(3)
    P = np.vstack([CUBE, rng.uniform(0, 1, size=(30, 3)) * [1, 1, 0]])
    K = convex_hull(P, 3)
    assert len(K.normals) == 6 and len(K.vertices) == 8


@pytest.mark.parametrize("seed", range(20))
def test_hull_matches_scipy(seed):
    spatial = pytest.importorskip("scipy.spatial")
    rng = np.random.default_rng(seed)
    n = 2 + seed % 2
    P = rng.normal(size=(25, n))
    K = convex_hull(P, n)
    ref = spatial.ConvexHull(P)
    assert as_set(K.vertices) == as_set(P[ref.vertices])
    assert math.isclose(
        sum(simplex_volume(K.to_ambient(s)) for s in triangulate(K)), ref.volume, rel_tol=1e-9
    )


NEAR_DEGENERATE = [
    # sliver tetrahedron
    [[0, 0, 1], [0, 0, 0], [1, 0, 0], [0, 7.26455298e-08, 0]],
    # near-duplicate vertices
    [[4, 0, -1], [0, 0, 0], [0, 1e-7, 0], [0, 0, 1], [1, 5, 0]],
    [[5, 4, 5], [0, 5, 6], [5, 5, 5], [5.96e-08, 5, 6], [5, 0, 0]],
    # a point just off a long edge
    [[1, 1e-5, 0], [-1, 0, 0], [0, 0, 0], [0, 0, 1]],
    # tiny body, needle facets
    [[0, 6e-8, 6e-8], [6e-8, 6e-8, 6e-8], [6e-8, 0, 6e-8], [6e-8, 6e-8, 0]],
    [[0, 6e-8, 6e-8], [6e-8, 6e-8, 6e-8], [6e-8, 7, 6e-8], [6e-8, 6e-8, 1]],
    # flat to within tolerance
    [[4, 1, 0], [1, 0, 0], [0, 3, 1.19e-07], [0, 0, 0]],
    [[1, 1, 0], [0, 1, 0], [0, 0, 1e-7], [-9, 0, 0], [0, 0, 0], [1, 0, 0]],
]


def _check_hull(P):
    P = np.asarray(P, dtype=float)
    K = convex_hull(P, 3)
    scale = max(1.0, float(np.ptp(P)))
    assert K.to_local(P)[1] <= 1e-6 * scale
    for v in K.vertices:
        assert contains(K, v, K.tol)
    if K.full_dimensional:
        assert all(len(f) >= 3 for f in K.faces)
        for p in P:
            assert contains(K, p, 1e-7 * scale)
    return K


@pytest.mark.parametrize("P", NEAR_DEGENERATE)
def test_hull_near_degenerate(P):
    _check_hull(P)


lattice = arrays(np.float64, st.tuples(st.integers(4, 24), st.just(3)), elements=st.integers(-2, 2).map(float))


@given(lattice, st.floats(1e-10, 1e-6), st.integers(0, 2**31))
def test_hull_jittered_lattice(P, jitter, seed):
    _check_hull(P + jitter * np.random.default_rng(seed).normal(size=P.shape))


points2 = arrays(np.float64, st.tuples(st.integers(3, 12), st.just(2)), elements=st.floats(-10, 10))
points3 = arrays(np.float64, st.tuples(st.integers(4, 14), st.just(3)), elements=st.floats(-10, 10))


def _full(P, n):
    K = convex_hull(P, n)
    return K if K.full_dimensional and K.diameter > 1e-3 else None


@given(st.one_of(points2, points3))
def test_hull_idempotent(P):
    n = P.shape[1]
    K = convex_hull(P, n)
    K2 = convex_hull(K.vertices, n)
    assert as_set(K.vertices, 6) == as_set(K2.vertices, 6)


@given(st.one_of(points2, points3), st.integers(0, 2**31))
def test_containment_soundness(P, seed):
    K = convex_hull(P, P.shape[1])
    rng = np.random.default_rng(seed)
    W = rng.dirichlet(np.ones(len(K.vertices)), size=20)
    for x in W @ K.vertices:
        assert contains(K, x, K.tol * 10)


# -- contains --------------------------------------------------------------


def test_contains_examples(square):
    assert contains(square, [0.5, 0.5], 1e-9)
    assert not contains(square, [1 + 1e-6, 0.5], 1e-9)
    assert contains(square, [1.0, 1.0], 1e-9)


def test_contains_off_affine_hull():
    seg = convex_hull([[0, 0, 0], [1, 1, 1]], 3)
    assert contains(seg, [0.5, 0.5, 0.5])
    with pytest.raises(GeometryError):
        contains(seg, [0.5, 0.5, 0.7])


# -- gauge -----------------------------------------------------------------


def test_gauge_examples(centered_square, tetra):
    assert gauge(centered_square, [2, 0]) == pytest.approx(2.0)
    assert gauge(centered_square, [0.5, 0.5]) == pytest.approx(0.5)
    assert gauge(tetra, [0, 0, 0]) == 0.0


def test_gauge_needs_interior_origin(square):
    with pytest.raises(NormalizationError):
        gauge(square, [0.5, 0.5])


@given(arrays(np.float64, 2, elements=st.floats(-3, 3)))
def test_gauge_is_max_norm_on_square(v):
    K = convex_hull(2 * SQUARE - 1, 2)
    assert gauge(K, v) == pytest.approx(np.abs(v).max(), abs=1e-12)


@given(points3, arrays(np.float64, 3, elements=st.floats(-5, 5)), st.floats(0, 10))
def test_gauge_properties(P, v, t):
    K = _full(P, 3)
    if K is None:
        return
    K = K.translate(-interior_point(K))
    g = gauge(K, v)
    assert gauge(K, t * v) == pytest.approx(t * g, rel=1e-9, abs=1e-9)
    # gauge <= 1 iff contained, away from the boundary band
    if g < 1 - 1e-7:
        assert contains(K, v, K.tol)
    if g > 1 + 1e-7:
        assert not contains(K, v, K.tol)


# -- support ---------------------------------------------------------------


def test_support_examples(square, cube):
    val, face = support(square, [1, 0])
    assert val == pytest.approx(1) and as_set(face) == {(1.0, 0.0), (1.0, 1.0)}
    val, face = support(square, [1, 1])
    assert val == pytest.approx(2) and as_set(face) == {(1.0, 1.0)}
    val, face = support(cube, [0, 0, -1])
    assert val == pytest.approx(0) and len(face) == 4


def test_support_zero_direction(square):
    with pytest.raises(GeometryError):
        support(square, [0, 0])


@given(st.one_of(points2, points3), st.integers(0, 2**31))
def test_support_width_nonnegative(P, seed):
    K = convex_hull(P, P.shape[1])
    u = np.random.default_rng(seed).normal(size=P.shape[1])
    assert support(K, u)[0] + support(K, -u)[0] >= -1e-9


def test_support_width_zero_for_orthogonal_flat_body():
    K = convex_hull([[0, 0, 1], [1, 0, 1], [0, 1, 1]], 3)
    assert support(K, [0, 0, 1])[0] + support(K, [0, 0, -1])[0] == pytest.approx(0)


# -- interior point, chords ------------------------------------------------


def test_interior_point_examples(square):
    assert interior_point(square) == pytest.approx([0.5, 0.5])
    assert interior_point(convex_hull([[0, 0], [1, 0]], 2)) == pytest.approx([0.5, 0])
    T = convex_hull([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], 3)
    assert interior_point(T) == pytest.approx([0.25] * 3)


def test_chord_examples(square):
    c = longest_chord(square, [-1, -1])
    assert c.u == pytest.approx([0, 0]) and c.v == pytest.approx([1, 1])
    assert c.length == pytest.approx(math.sqrt(2))
    assert longest_chord(square, [1, 0]).length == pytest.approx(1)
    seg = convex_hull([[0, 0], [2, 0]], 2)
    c = longest_chord(seg, [1, 0])
    assert c.u == pytest.approx([2, 0]) and c.v == pytest.approx([0, 0]) and c.length == pytest.approx(2)


def test_chord_not_parallel():
    seg = convex_hull([[0, 0], [2, 0]], 2)
    with pytest.raises(DegenerateError):
        longest_chord(seg, [0, 1])


def _sampled_chord_oracle(K, w):
    """Longest of the chords parallel to w through 4000 random points of K."""
    w = w / np.linalg.norm(w)
    best = 0.0
    rng = np.random.default_rng(0)
    W = rng.dirichlet(np.ones(len(K.vertices)), size=4000) @ K.vertices
    for p in W:
        # extent of the line p + s w inside K
        N, b = K.normals, K.offsets
        r = N @ w
        s = (b - N @ p)
        hi = np.min(s[r > 1e-12] / r[r > 1e-12])
        lo = np.max(s[r < -1e-12] / r[r < -1e-12])
        best = max(best, hi - lo)
    return best


@given(points2, arrays(np.float64, 2, elements=st.floats(-1, 1)))
def test_chord_beats_random_chords(P, w):
    K = _full(P, 2)
    if K is None or np.linalg.norm(w) < 1e-3:
        return
    c = longest_chord(K, w)
    assert contains(K, c.u, 1e-7) and contains(K, c.v, 1e-7)
    d = c.u - c.v
    assert abs(d[0] * w[1] - d[1] * w[0]) <= 1e-7 * max(1, c.length) and d @ w >= -1e-9
    assert c.length >= _sampled_chord_oracle(K, w) - 1e-7


# -- subdivision -----------------------------------------------------------


def brute_diameter(V):
    return max(np.linalg.norm(a - b) for a, b in itertools.combinations(V, 2))


@pytest.mark.parametrize(
    "V",
    [
        [[0, 0], [1, 0], [0.5, math.sqrt(3) / 2]],
        [[0, 0], [1, 0], [0.2, 0.3]],
        [[0, 0, 0], [1, 0, 0], [0.5, math.sqrt(3) / 2, 0], [0.5, math.sqrt(3) / 6, math.sqrt(2 / 3)]],
        [[0.0], [1.0]],
    ],
)
def test_subdivide_bisects_longest_edge(V):
    V = np.array(V, dtype=float)
    parent = SubdivisionCell.of(V)
    kids = subdivide(parent)
    assert len(kids) == 2
    for c in kids:
        assert c.diameter == pytest.approx(brute_diameter(c.vertices))
        assert c.diameter <= parent.diameter + 1e-12
        assert simplex_volume(c.vertices) == pytest.approx(simplex_volume(V) / 2)
    # the children share every vertex but one with the parent, and the new vertex
    # is the midpoint of a longest edge
    new = [v for v in kids[0].vertices if not any(np.allclose(v, p) for p in V)]
    assert len(new) == 1
    longest = max(np.linalg.norm(a - b) for a, b in itertools.combinations(V, 2))
    assert any(
        np.allclose(new[0], (a + b) / 2) and np.isclose(np.linalg.norm(a - b), longest)
        for a, b in itertools.combinations(V, 2)
    )


def test_subdivide_unit_segment():
    kids = subdivide(SubdivisionCell.of([[0.0], [1.0]]))
    assert sorted(c.diameter for c in kids) == pytest.approx([0.5, 0.5])


def test_subdivide_degenerate():
    with pytest.raises(DegenerateError):
        subdivide(SubdivisionCell.of([[0, 0], [1, 1], [2, 2]]))


def test_repeated_bisection_shrinks_triangles():
    cells = [SubdivisionCell.of([[0, 0], [1, 0], [0.5, math.sqrt(3) / 2]])]
    for _ in range(4):
        cells = [k for c in cells for k in subdivide(c)]
    assert max(c.diameter for c in cells) <= 0.5 + 1e-12


@pytest.mark.parametrize("fixture", ["square", "cube", "tetra"])
def test_triangulation_volume(fixture, request):
    K = request.getfixturevalue(fixture)
    vol = sum(simplex_volume(s) for s in triangulate(K))
    expect = {"square": 1.0, "cube": 1.0, "tetra": 8 / 3}[fixture]
    assert vol == pytest.approx(expect)
