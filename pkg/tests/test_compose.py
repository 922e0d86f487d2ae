import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from homocover.compose import (
    HullDecomposition,
    compose_cover,
    composed_ratio,
    parallelepiped_check,
    point_cover,
    segment_cover,
    simplex_segment_decomposition,
    simplex_vertex_cover,
    theorem32_bound,
)
from homocover.covering import HomothetCover, gamma_upper, inflate, verify_cover
from homocover.errors import DegenerateError, GeometryError
from homocover.geometry import convex_hull

from conftest import CUBE, TETRA


def seg(a, b):
    a, b = np.asarray(a, float), np.asarray(b, float)
    return convex_hull(np.vstack([a, b]), len(a))


# -- segment and point covers ----------------------------------------------------


def test_segment_halves():
    s = seg([0, 0], [1, 0])
    c = segment_cover(s, 2)
    assert c.gamma == 0.5 and c.m == 2
    assert verify_cover(s, c).covered
    # homothets are exactly the two halves
    halves = sorted(tuple(np.round(c.homothet(s, i)[:, 0], 12)) for i in range(2))
    assert {tuple(sorted(h)) for h in halves} == {(0.0, 0.5), (0.5, 1.0)}


def test_segment_identity_and_thirds():
    s = seg([0, 0, 0], [3, 0, 0])
    assert segment_cover(s, 1).gamma == 1.0
    c = segment_cover(s, 3)
    assert c.gamma == pytest.approx(1 / 3) and verify_cover(s, c).covered
    assert not verify_cover(s, HomothetCover(0.33, c.centers)).covered


def test_segment_cover_rejects_polygons(square):
    with pytest.raises(DegenerateError):
        segment_cover(square, 2)


# -- composition -------------------------------------------------------------


def test_tetrahedron_from_two_edges(tetra):
    d = simplex_segment_decomposition(tetra)
    assert d.p == 2 and [b.affine_dim for b, _ in d.parts] == [1, 1]
    c = compose_cover(d)
    assert c.gamma == 0.75 and c.m == 4
    assert verify_cover(tetra, c).covered


def test_point_plus_triangle(tetra):
    tri = convex_hull(TETRA[1:], 3)
    pt = convex_hull(TETRA[:1], 3)
    d = HullDecomposition(((pt, point_cover(TETRA[0])), (tri, simplex_vertex_cover(tri))))
    c = compose_cover(d)
    assert c.gamma == pytest.approx(5 / 6, abs=1e-12) and c.m == 4
    assert verify_cover(tetra, c).covered


def test_single_part_passes_through(square):
    g, cover = gamma_upper(square, 4, budget=16)
    c = compose_cover(HullDecomposition(((square, cover),)))
    assert c.gamma == cover.gamma
    assert np.allclose(c.centers, cover.centers)


def test_triangle_decomposition():
    T = convex_hull([[0, 0], [1, 0], [0, 1]], 2)
    d = simplex_segment_decomposition(T)
    assert d.p == 2 and d.parts[1][0].affine_dim == 0
    c = compose_cover(d)
    assert c.gamma == pytest.approx(0.75)
    assert verify_cover(T, c).covered


def test_segment_simplex():
    s = seg([0, 0], [1, 1])
    assert compose_cover(simplex_segment_decomposition(s)).gamma == 0.5


def test_five_segments_in_space():
    rng = np.random.default_rng(1)
    parts = []
    for _ in range(5):
        s = seg(*rng.normal(size=(2, 3)))
        parts.append((s, segment_cover(s, 2)))
    d = HullDecomposition(tuple(parts))
    assert d.q == 4
    c = compose_cover(d)
    assert c.gamma == pytest.approx((3 + 0.5) / 4)
    assert verify_cover(d.hull(), c).covered


def test_mixed_dimensions_rejected(square):
    s = seg([0, 0, 0], [1, 0, 0])
    with pytest.raises(GeometryError):
        HullDecomposition(((square, HomothetCover(1.0, [[0, 0]])), (s, segment_cover(s, 2))))


def test_empty_decomposition():
    with pytest.raises(ValueError):
        HullDecomposition(())


def test_check_parts(tetra):
    d = simplex_segment_decomposition(tetra)
    assert d.check_parts() == [True, True]


def _random_parts(rng, n, p):
    parts = []
    for _ in range(p):
        if rng.random() < 0.5:
            s = seg(*rng.normal(size=(2, n)))
            parts.append((s, segment_cover(s, int(rng.integers(1, 4)))))
        else:
            P = rng.normal(size=(int(rng.integers(3, 6)), 2))
            if n == 3:
                Q, _ = np.linalg.qr(rng.normal(size=(3, 2)))
                P = P @ Q.T + rng.normal(size=3)
            B = convex_hull(P, n)
            if B.affine_dim < 2:
                B = convex_hull(np.vstack([B.vertices, B.vertices[0] + rng.normal(size=n)]), n)
            parts.append((B, gamma_upper(B, 4, budget=8, refine_rounds=2)[1]))
    return parts


@given(st.integers(0, 10**6))
def test_ratio_and_count_laws(seed):
    rng = np.random.default_rng(seed)
    n, p = int(rng.integers(2, 4)), int(rng.integers(1, 6))
    parts = _random_parts(rng, n, p)
    c = compose_cover(HullDecomposition(tuple(parts)))
    q = min(p, n + 1)
    assert c.gamma == max((q - 1 + cv.gamma) / q for _, cv in parts)
    assert c.m == sum(cv.m for _, cv in parts)


@given(st.integers(0, 10**6))
def test_composed_covers_verify(seed):
    rng = np.random.default_rng(seed)
    n, p = int(rng.integers(2, 4)), int(rng.integers(1, 6))
    d = HullDecomposition(tuple(_random_parts(rng, n, p)))
    K = d.hull()
    assert verify_cover(K, inflate(K, compose_cover(d), 1e-6)).covered


@given(st.integers(0, 10**6))
def test_translation_invariance(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4))
    parts = _random_parts(rng, n, int(rng.integers(1, 5)))
    t = rng.normal(size=n) * 4
    moved = tuple(
        (B.translate(t), HomothetCover(c.gamma, c.centers + (1 - c.gamma) * t)) for B, c in parts
    )
    a = compose_cover(HullDecomposition(tuple(parts)))
    b = compose_cover(HullDecomposition(moved))
    assert a.gamma == pytest.approx(b.gamma, abs=1e-15)
    assert np.allclose(a.centers + (1 - a.gamma) * t, b.centers, atol=1e-9)


def test_composed_ratio_branches():
    assert composed_ratio([0.5, 0.5], 3) == 0.75
    assert composed_ratio([0.5] * 5, 3) == pytest.approx(3.5 / 4)
    assert composed_ratio([0.2], 2) == 0.2


# -- bounds ------------------------------------------------------------------


SQ = [[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]]


@pytest.mark.parametrize(
    "L, M, label, rows",
    [
        ([[0.5, 0.5, 1]], SQ, "Case1", {8: 2 / 3, 5: (1 + math.sqrt(2) / 2) / 2}),
        ([[0, 0, 0], [1, 0, 0]], [[0, 0, 1], [0, 1, 1]], "Case2", {5: 9 / 13}),
        ([[0.5, 0.5, -1], [0.5, 0.5, 1]], SQ, "Case3", {8: (1 + math.sin(3 * math.pi / 10) ** 2) / 2, 6: (1 + math.sqrt(2) / 2) / 2}),
        (SQ, [[0, 0, 1], [1, 0, 1], [1, 0, 2], [0, 0, 2]], "Case4", {8: (1 + math.sqrt(2) / 2) / 2}),
    ],
)
def test_bound_cases(L, M, label, rows):
    rep = theorem32_bound(convex_hull(L, 3), convex_hull(M, 3))
    assert rep.case_label == label
    assert {e.m: e.gamma_bound for e in rep.entries} == pytest.approx(rows)
    assert all(0 < e.gamma_bound < 1 for e in rep.entries)
    assert len(rep.notes) == len(rows)


def test_bounds_symmetric_in_order():
    a = theorem32_bound(convex_hull([[0.5, 0.5, 1]], 3), convex_hull(SQ, 3))
    b = theorem32_bound(convex_hull(SQ, 3), convex_hull([[0.5, 0.5, 1]], 3))
    assert a.case_label == b.case_label and a.entries == b.entries


def test_bounds_reject_solids(cube):
    with pytest.raises(GeometryError):
        theorem32_bound(cube, convex_hull([[0, 0, 5]], 3))


def test_bounds_reject_flat_hull():
    with pytest.raises(GeometryError):
        theorem32_bound(convex_hull([[0, 0, 0], [1, 0, 0]], 3), convex_hull(SQ, 3))


# -- parallelepipeds -----------------------------------------------------------


def test_parallelepiped_check(cube, tetra):
    assert parallelepiped_check(cube)
    E = np.array([[1, 0, 0], [0.3, 1, 0], [0, 0.2, 1]])
    assert parallelepiped_check(convex_hull(CUBE @ E + [2, -1, 0.5], 3))
    assert not parallelepiped_check(tetra)
    # eight vertices but not a parallelepiped: a frustum
    frustum = np.vstack([CUBE[CUBE[:, 2] == 0], 0.5 * CUBE[CUBE[:, 2] == 1] + [0.25, 0.25, 0.5]])
    assert not parallelepiped_check(convex_hull(frustum, 3))
