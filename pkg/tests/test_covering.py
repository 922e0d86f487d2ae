import numpy as np
import pytest
from hypothesis import given, strategies as st

from homocover.compose import compose_cover, simplex_segment_decomposition
from homocover.covering import (
    HomothetCover,
    VerdictKind,
    gamma_of_point,
    gamma_upper,
    identity_cover,
    inflate,
    min_gamma_for_centers,
    verify_cover,
)
from homocover.errors import GeometryError, NoSubunitCoverError, NormalizationError
from homocover.geometry import contains, convex_hull, interior_point

from conftest import TETRA

QUADRANTS = np.array([[0, 0], [0.5, 0], [0, 0.5], [0.5, 0.5]])


def random_body(seed, n=None, centered=False):
    rng = np.random.default_rng(seed)
    n = n or 2 + seed % 2
    while True:
        K = convex_hull(rng.normal(size=(int(rng.integers(n + 1, 10)), n)), n)
        if K.full_dimensional:
            break
    return K.translate(-interior_point(K)) if centered else K


def random_cover(seed, K, gamma=None):
    rng = np.random.default_rng(seed + 10_000)
    g = float(rng.uniform(0.4, 1.0)) if gamma is None else gamma
    if rng.random() < 0.5:
        P = K.vertices
    else:
        P = rng.dirichlet(np.ones(len(K.vertices)), size=int(rng.integers(1, 7))) @ K.vertices
    return HomothetCover(g, (1 - g) * P)


def outside_every_homothet(K, cover, w):
    N, b = K.normals, K.offsets
    return all(((w - x) @ N.T - cover.gamma * b).max() > 0 for x in cover.centers)


# -- verify_cover ----------------------------------------------------------


def test_quadrants_cover_square(square):
    v = verify_cover(square, HomothetCover(0.5, QUADRANTS), eps=1e-3)
    assert v.kind is VerdictKind.COVERED
    assert sum(v.attribution) == v.cells_processed - (v.cells_processed - sum(v.attribution))


@pytest.mark.parametrize("seed", range(10))
def test_area_bound_forces_witness(square, seed):
    # four squares of side 0.49 have total area 0.9604 < 1
    C = np.random.default_rng(seed).uniform(-0.1, 0.6, size=(4, 2))
    C[0] = [0, 0]
    v = verify_cover(square, HomothetCover(0.49, C), eps=1e-3)
    assert v.kind is VerdictKind.UNCOVERED
    assert contains(square, v.witness, square.tol)
    assert outside_every_homothet(square, HomothetCover(0.49, C), v.witness)


@pytest.mark.parametrize("fixture", ["square", "cube", "tetra"])
def test_identity_cover(fixture, request):
    K = request.getfixturevalue(fixture)
    assert verify_cover(K, identity_cover(K)).covered


def test_degenerate_bodies():
    seg = convex_hull([[0, 0, 0], [1, 1, 1]], 3)
    halves = HomothetCover(0.5, [[0, 0, 0], [0.5, 0.5, 0.5]])
    assert verify_cover(seg, halves).covered
    short = HomothetCover(0.45, [[0, 0, 0], [0.55, 0.55, 0.55]])
    assert verify_cover(seg, short).kind is VerdictKind.UNCOVERED
    tri = convex_hull(TETRA[1:], 3)
    assert verify_cover(tri, HomothetCover(2 / 3, TETRA[1:] / 3)).covered
    assert verify_cover(tri, HomothetCover(0.66, 0.34 * TETRA[1:])).kind is VerdictKind.UNCOVERED


def test_homothets_off_the_plane_are_ignored():
    tri = convex_hull([[0, 0, 0], [1, 0, 0], [0, 1, 0]], 3)
    lifted = HomothetCover(1.0, [[0, 0, 0.1]])
    assert verify_cover(tri, lifted).kind is VerdictKind.UNCOVERED


def test_verify_errors(square):
    with pytest.raises(ValueError):
        verify_cover(square, HomothetCover(0.0, QUADRANTS))
    with pytest.raises(GeometryError):
        verify_cover(square, HomothetCover(0.5, [[0, 0, 0]]))


def test_cell_cap_gives_unknown(tetra):
    cover = compose_cover(simplex_segment_decomposition(tetra))
    v = verify_cover(tetra, cover, max_cells=3)
    assert v.kind is VerdictKind.UNKNOWN


def test_tight_covers_certify(tetra):
    cover = compose_cover(simplex_segment_decomposition(tetra))
    assert verify_cover(tetra, cover, eps=1e-3).covered
    assert verify_cover(tetra, inflate(tetra, cover, -1e-3)).kind is VerdictKind.UNCOVERED


@given(st.integers(0, 10**6))
def test_witness_validity(seed):
    K = random_body(seed, centered=True)
    cover = random_cover(seed, K)
    v = verify_cover(K, cover)
    if v.kind is VerdictKind.UNCOVERED:
        assert contains(K, v.witness, K.tol)
        for x in cover.centers:
            assert gamma_of_point(K, x, v.witness) > cover.gamma + 1e-9


@given(st.integers(0, 10**6), st.floats(0.0, 0.3))
def test_monotone_when_origin_interior(seed, dg):
    K = random_body(seed, centered=True)
    cover = random_cover(seed, K)
    if verify_cover(K, cover).covered:
        assert verify_cover(K, HomothetCover(cover.gamma + dg, cover.centers)).covered


@given(st.integers(0, 10**6), st.floats(0.0, 0.3))
def test_inflate_is_monotone(seed, dg):
    K = random_body(seed).translate([5.0] * (2 + seed % 2))
    cover = random_cover(seed, K)
    if verify_cover(K, cover).covered:
        assert verify_cover(K, inflate(K, cover, dg)).covered


@given(st.integers(0, 10**6))
def test_translation_equivariance(seed):
    K = random_body(seed)
    cover = random_cover(seed, K)
    t = np.random.default_rng(seed).normal(size=K.ambient_dim) * 3
    # x + gamma K moves by t exactly when x moves by (1 - gamma) t
    moved = HomothetCover(cover.gamma, cover.centers + (1 - cover.gamma) * t)
    a = verify_cover(K, cover)
    b = verify_cover(K.translate(t), moved)
    assert a.kind is b.kind


# -- min_gamma_for_centers --------------------------------------------------


def test_min_gamma_quadrants(square):
    assert min_gamma_for_centers(square, QUADRANTS) == pytest.approx(0.5, abs=1e-6)


def test_min_gamma_single_center(tetra):
    assert min_gamma_for_centers(tetra, [[0, 0, 0]]) == pytest.approx(1.0, abs=1e-6)


def test_min_gamma_segment():
    seg = convex_hull([[0, 0], [1, 0]], 2)
    assert min_gamma_for_centers(seg, [[0, 0], [0.5, 0]]) == pytest.approx(0.5, abs=1e-6)


def test_no_subunit_cover(square):
    with pytest.raises(NoSubunitCoverError):
        min_gamma_for_centers(square, [[5, 5]])


@pytest.mark.parametrize("seed", range(6))
def test_bisection_brackets(seed):
    K = random_body(seed, centered=True)
    C = random_cover(seed, K, gamma=0.9).centers
    try:
        g = min_gamma_for_centers(K, C, tol=1e-6)
    except NoSubunitCoverError:
        return
    assert verify_cover(K, HomothetCover(g, C)).covered
    assert not verify_cover(K, HomothetCover(g - 2e-6, C)).covered


# -- gamma_of_point ------------------------------------------------------------


def test_gamma_of_point(centered_square):
    assert gamma_of_point(centered_square, [0, 0], [0.5, 0]) == pytest.approx(0.5)
    assert gamma_of_point(centered_square, [0.3, 0.2], [0.3, 0.2]) == 0.0
    assert gamma_of_point(centered_square, [1, 0], [2, 1]) == pytest.approx(1.0)


def test_gamma_of_point_needs_normalized_body(square):
    with pytest.raises(NormalizationError):
        gamma_of_point(square, [0, 0], [0.5, 0.5])


# -- gamma_upper ---------------------------------------------------------------


def test_optimizer_square(square):
    g, cover = gamma_upper(square, 4)
    assert g <= 0.5 + 1e-3
    assert verify_cover(square, cover).covered


def test_optimizer_tetrahedron(tetra):
    g, cover = gamma_upper(tetra, 4)
    assert g <= 0.75 + 1e-3
    assert verify_cover(tetra, cover).covered


def test_optimizer_warm_start(tetra):
    warm = compose_cover(simplex_segment_decomposition(tetra))
    g, cover = gamma_upper(tetra, 4, budget=4, warm_start=warm)
    assert g <= 0.75 + 1e-6


def test_optimizer_single_homothet(cube):
    g, cover = gamma_upper(cube, 1)
    assert g == 1.0 and verify_cover(cube, cover).covered


def test_optimizer_deterministic(square):
    a = gamma_upper(square, 3, budget=32, seed=5)
    b = gamma_upper(square, 3, budget=32, seed=5)
    assert a[0] == b[0] and np.array_equal(a[1].centers, b[1].centers)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_extra_homothet_never_hurts(square, m):
    g, cover = gamma_upper(square, m, budget=64)
    g2, _ = gamma_upper(square, m + 1, budget=64, warm_start=cover)
    assert g2 <= g + 1e-6


def test_optimizer_planar_part_in_space():
    tri = convex_hull(TETRA[1:], 3)
    g, cover = gamma_upper(tri, 3, budget=64)
    assert g < 0.7
    assert verify_cover(tri, cover).covered
