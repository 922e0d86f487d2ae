"""The acceptance table: ten end-to-end checks with their tolerances.

Shared by ``homocover report`` and the test suite.  Each check returns an
:class:`Outcome`; ``quick=True`` shrinks the sample counts for a fast smoke
run (the full counts are the ones that matter).
"""
from __future__ import annotations

import contextlib
import io as _stdio
import math
import os
import tempfile
import time
from dataclasses import dataclass

import numpy as np

from . import io
from .compose import (
    HullDecomposition,
    compose_cover,
    parallelepiped_check,
    point_cover,
    segment_cover,
    simplex_segment_decomposition,
    simplex_vertex_cover,
)
from .covering import HomothetCover, VerdictKind, gamma_upper, inflate, verify_cover
from .errors import AntipodalPairError
from .geometry import convex_hull
from .illumination import (
    antipodal,
    common_illumination_direction,
    illuminates,
    illumination_number_upper,
    pairwise_antipodal,
)

TETRA = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
CUBE = np.array([[a, b, c] for a in (0, 1) for b in (0, 1) for c in (0, 1)], dtype=float)
SQUARE = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)


@dataclass
class Outcome:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.number:2d}. {self.title}: {self.detail} ({self.seconds:.1f}s)"


# -- random instances ----------------------------------------------------


def random_body(rng, n, count=None):
    """Hull of Gaussian points; resampled until full-dimensional."""
    while True:
        k = count or int(rng.integers(n + 1, 3 * n + 3))
        K = convex_hull(rng.normal(size=(k, n)), n)
        if K.full_dimensional:
            return K


def random_segment(rng, n):
    while True:
        P = rng.normal(size=(2, n))
        if np.linalg.norm(P[0] - P[1]) > 0.1:
            return convex_hull(P, n)


def random_polygon(rng, n):
    """A planar convex polygon, lying in a random plane when n = 3."""
    while True:
        P = rng.normal(size=(int(rng.integers(3, 7)), 2))
        if n == 3:
            Q, _ = np.linalg.qr(rng.normal(size=(3, 2)))
            P = rng.normal(size=3) + P @ Q.T
        K = convex_hull(P, n)
        if K.affine_dim == 2 and np.linalg.svd(K.local_vertices - K.local_vertices.mean(0))[1].min() > 0.05:
            return K


def boundary_point(rng, K):
    """Uniform convex combination of the vertices of a random facet."""
    f = int(rng.integers(len(K.local_normals)))
    on = np.abs(K.local_vertices @ K.local_normals[f] - K.local_offsets[f]) <= K.tol
    V = K.vertices[on]
    return rng.dirichlet(np.ones(len(V))) @ V


def _in_homothet(K, cover, P, tol):
    """Boolean mask: points of P lying in some homothet (body is full-dimensional)."""
    N, b = K.normals, K.offsets
    hit = np.zeros(len(P), dtype=bool)
    for x in cover.centers:
        hit |= ((P - x) @ N.T - cover.gamma * b <= tol).all(axis=1)
    return hit


def _rejection_sample(rng, K, count):
    lo, hi = K.vertices.min(0), K.vertices.max(0)
    out = []
    got = 0
    while got < count:
        P = rng.uniform(lo, hi, size=(4 * count, K.ambient_dim))
        P = P[(P @ K.normals.T <= K.offsets).all(axis=1)]
        out.append(P)
        got += len(P)
    return np.vstack(out)[:count]


# -- criteria ------------------------------------------------------------


def c1_tetrahedron(seed=0, quick=False):
    t0 = time.perf_counter()
    T = convex_hull(TETRA, 3)
    d = simplex_segment_decomposition(T)
    cover = compose_cover(d)
    v = verify_cover(T, inflate(T, cover, 1e-6), eps=1e-3)
    ok = cover.gamma == 0.75 and cover.m == 4 and v.covered and time.perf_counter() - t0 < 30
    return ok, f"gamma = {cover.gamma!r}, {cover.m} centers, verify at +1e-6: {v.kind.value} in {v.cells_processed} cells"


def c2_lower_bound(seed=0, quick=False):
    t0 = time.perf_counter()
    T = convex_hull(TETRA, 3)
    runs = 5 if quick else 20
    worst = math.inf
    bad = []
    for s in range(seed, seed + runs):
        g, cover = gamma_upper(T, 4, seed=s)
        worst = min(worst, g)
        v = verify_cover(T, inflate(T, cover, 0.749 - g))
        if g <= 0.749 or v.covered:
            bad.append(s)
    ok = not bad and time.perf_counter() - t0 < 300
    return ok, f"{runs} seeds, least certified gamma {worst:.6f}, none Covered at 0.749" if ok else f"seeds {bad} certified below 0.749"


def c3_alternate(seed=0, quick=False):
    T = convex_hull(TETRA, 3)
    tri = convex_hull(TETRA[1:], 3)
    g3, tri_cover = gamma_upper(tri, 3, seed=seed, warm_start=simplex_vertex_cover(tri))
    pt = convex_hull(TETRA[:1], 3)
    a = compose_cover(HullDecomposition(((pt, point_cover(TETRA[0])), (tri, tri_cover))))
    b = compose_cover(simplex_segment_decomposition(T))
    va, vb = verify_cover(T, a), verify_cover(T, b)
    vt = verify_cover(tri, tri_cover)
    ok = abs(a.gamma - 5 / 6) <= 1e-9 and abs(b.gamma - 0.75) <= 1e-9 and va.covered and vb.covered and vt.covered
    return ok, (
        f"point+triangle {a.gamma:.12f} ({va.kind.value}), segment+segment {b.gamma:.12f} ({vb.kind.value}), "
        f"triangle part {g3:.12f}"
    )


def _random_part(rng, n):
    if rng.random() < 0.5:
        B = random_segment(rng, n)
        m = int(rng.integers(1, 4))
        if rng.random() < 0.5:
            return B, segment_cover(B, m)
    else:
        B = random_polygon(rng, n)
        m = int(rng.integers(3, 6))
    _, c = gamma_upper(B, m, budget=8, seed=int(rng.integers(2**31)), refine_rounds=4)
    return B, c


def c4_composition(seed=0, quick=False):
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    runs = 20 if quick else 200
    worst_err, failures = 0.0, 0
    for _ in range(runs):
        n = int(rng.integers(2, 4))
        p = int(rng.integers(1, 6))
        parts = tuple(_random_part(rng, n) for _ in range(p))
        d = HullDecomposition(parts)
        cover = compose_cover(d)
        q = p if p <= n + 1 else n + 1
        expect = max((q - 1 + c.gamma) / q for _, c in parts)
        worst_err = max(worst_err, abs(cover.gamma - expect))
        count_ok = cover.m == sum(c.m for _, c in parts)
        K = d.hull()
        if not (count_ok and verify_cover(K, inflate(K, cover, 1e-6)).covered):
            failures += 1
    ok = worst_err <= 1e-12 and failures == 0 and time.perf_counter() - t0 < 600
    return ok, f"{runs} decompositions, max ratio error {worst_err:.1e}, {failures} not Covered"


def c5_segments(seed=0, quick=False):
    rng = np.random.default_rng(seed)
    reps = 3 if quick else 10
    bad = []
    for p in (1, 2, 3):
        for _ in range(reps):
            parts = []
            for _ in range(p):
                s = random_segment(rng, 3)
                parts.append((s, segment_cover(s, 2)))
            d = HullDecomposition(tuple(parts))
            cover = compose_cover(d)
            ok = cover.m == 2 * p and abs(cover.gamma - (2 * p - 1) / (2 * p)) <= 1e-12
            if not (ok and verify_cover(d.hull(), cover).covered):
                bad.append(p)
    return not bad, f"p = 1, 2, 3 with {reps} families each, failures at p in {sorted(set(bad))}" if bad else f"p = 1, 2, 3 with {reps} families each, all Covered at (2p-1)/(2p)"


def c6_common_direction(seed=0, quick=False):
    rng = np.random.default_rng(seed)
    runs = 50 if quick else 500
    done = raised = 0
    problems = []
    while done < runs:
        K = random_body(rng, int(rng.integers(2, 4)))
        x, y = boundary_point(rng, K), boundary_point(rng, K)
        if np.linalg.norm(x - y) <= 1e-6:
            continue
        if antipodal(np.vstack([K.vertices, x, y]), x, y):
            continue
        try:
            w = common_illumination_direction(K, x, y)
        except Exception as exc:  # noqa: BLE001 - any failure counts against the criterion
            problems.append(f"{type(exc).__name__}: {exc}")
            done += 1
            continue
        if illuminates(K, x, w.direction) is None or illuminates(K, y, w.direction) is None:
            problems.append("direction fails to illuminate")
        # the farthest vertex pair is always antipodal
        D = np.linalg.norm(K.vertices[:, None] - K.vertices[None], axis=2)
        i, j = np.unravel_index(np.argmax(D), D.shape)
        try:
            common_illumination_direction(K, K.vertices[i], K.vertices[j])
            problems.append("antipodal pair did not raise")
        except AntipodalPairError:
            raised += 1
        done += 1
    sq = convex_hull(SQUARE, 2)
    d = common_illumination_direction(sq, [0.5, 0.0], [1.0, 0.5]).direction
    sq_ok = d[0] < 0 and abs(d[0] + d[1]) <= 1e-12
    ok = not problems and raised == runs and sq_ok
    detail = f"{runs} instances, {raised} antipodal pairs raised, square d = ({d[0]:.3g}, {d[1]:.3g})"
    if problems:
        detail += f"; {len(problems)} problems, first: {problems[0]}"
    return ok, detail


BOUND_CASES = {
    "Case1": {8: 2 / 3, 5: (1 + math.sqrt(2) / 2) / 2},
    "Case2": {5: 9 / 13},
    "Case3": {8: (1 + math.sin(3 * math.pi / 10) ** 2) / 2, 6: (1 + math.sqrt(2) / 2) / 2},
    "Case4": {8: (1 + math.sqrt(2) / 2) / 2},
}


def _bound_inputs():
    sq = [[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]]
    return {
        "Case1": ([[0.5, 0.5, 1]], sq),
        "Case2": ([[0, 0, 0], [1, 0, 0]], [[0, 0, 1], [0, 1, 1]]),
        "Case3": ([[0.5, 0.5, -1], [0.5, 0.5, 1]], sq),
        "Case4": (sq, [[0, 0, 1], [1, 0, 1], [1, 0, 2], [0, 0, 2]]),
    }


def run_bounds_cli(L, M):
    """Run ``homocover bounds`` on two vertex lists; returns (exit code, stdout)."""
    from .cli import main

    with tempfile.TemporaryDirectory() as d:
        pl, pm = os.path.join(d, "L.json"), os.path.join(d, "M.json")
        io.write_body(pl, "L", L)
        io.write_body(pm, "M", M)
        buf = _stdio.StringIO()
        with contextlib.redirect_stdout(buf):
            code = main(["bounds", pl, pm])
    return code, buf.getvalue()


def parse_bounds(text):
    label = text.split(":", 1)[0].strip()
    rows = {}
    for line in text.splitlines():
        line = line.split()
        if line[:2] == ["m", "="]:
            rows[int(line[2])] = line[5]
    return label, rows


def c7_bounds(seed=0, quick=False):
    bad = []
    seen = []
    for case, (L, M) in _bound_inputs().items():
        code, text = run_bounds_cli(L, M)
        label, rows = parse_bounds(text)
        want = {m: f"{v:.4f}" for m, v in BOUND_CASES[case].items()}
        seen.append(f"{label} " + " ".join(f"({m}, {r})" for m, r in rows.items()))
        if code != 0 or label != case or rows != want:
            bad.append(case)
    return not bad, "; ".join(seen) + (f"; mismatched {bad}" if bad else "")


def c8_parallelepiped(seed=0, quick=False):
    cube = convex_hull(CUBE, 3)
    ds = illumination_number_upper(cube)
    R = pairwise_antipodal(CUBE)
    all_anti = bool(R[~np.eye(8, dtype=bool)].all())
    shear = np.array([[1, 0, 0], [0.3, 1, 0], [0, 0.2, 1]])
    sheared = convex_hull(CUBE @ shear, 3)
    tet = convex_hull(TETRA, 3)
    tri = convex_hull(np.array([[0, 0], [1, 0], [0.3, 0.9]]), 2)
    n_tet = len(illumination_number_upper(tet))
    n_tri = len(illumination_number_upper(tri))
    pc = (parallelepiped_check(cube), parallelepiped_check(sheared), parallelepiped_check(tet))
    ok = len(ds) == 8 and ds.exact and all_anti and pc == (True, True, False) and n_tet == 4 and n_tri == 3
    return ok, (
        f"cube {len(ds)} (exact {ds.exact}), cube pairwise antipodal {all_anti}, "
        f"parallelepiped cube/sheared/tetra {pc}, tetrahedron {n_tet}, triangle {n_tri}"
    )


def c9_cross_check(seed=0, quick=False):
    out = []
    ok = True
    for name, V in (("cube", CUBE), ("simplex", TETRA)):
        K = convex_hull(V, 3)
        k = len(illumination_number_upper(K))
        g, cover = gamma_upper(K, k, seed=seed)
        v = verify_cover(K, cover)
        ok &= g < 1 and v.covered
        out.append(f"{name} k={k} gamma {g:.4f} ({v.kind.value})")
    return ok, ", ".join(out)


def _fuzz_cover(rng, K):
    """Half the time homothets about every vertex (often covering), else random."""
    if rng.random() < 0.5:
        g = float(rng.uniform(0.5, 1.0))
        P = K.vertices
        if rng.random() < 0.3:
            P = P + rng.normal(scale=0.02 * K.diameter, size=P.shape)
        return HomothetCover(g, (1 - g) * P)
    m = int(rng.integers(1, 9))
    g = float(rng.uniform(0.2, 1.0))
    W = rng.dirichlet(np.ones(len(K.vertices)), size=m)
    P = W @ K.vertices
    if rng.random() < 0.3:
        P = P + rng.normal(scale=0.1 * K.diameter, size=P.shape)
    return HomothetCover(g, (1 - g) * P)


def c10_fuzz(seed=0, quick=False):
    rng = np.random.default_rng(seed)
    runs = 100 if quick else 1000
    samples = 10**3 if quick else 10**4
    counts = {k: 0 for k in VerdictKind}
    bad = []
    for r in range(runs):
        K = random_body(rng, int(rng.integers(2, 4)), count=int(rng.integers(4, 10)))
        cover = _fuzz_cover(rng, K)
        v = verify_cover(K, cover)
        counts[v.kind] += 1
        if v.kind is VerdictKind.COVERED:
            P = _rejection_sample(rng, K, samples)
            if not _in_homothet(K, cover, P, K.tol).all():
                bad.append(r)
        elif v.kind is VerdictKind.UNCOVERED:
            w = v.witness[None, :]
            inside = bool((w @ K.normals.T <= K.offsets + K.tol).all())
            if not inside or _in_homothet(K, cover, w, 0.0)[0]:
                bad.append(r)
    summary = ", ".join(f"{k.value} {c}" for k, c in counts.items())
    return not bad, f"{runs} pairs ({summary}), {len(bad)} unsound" + (f" e.g. #{bad[0]}" if bad else "")


CRITERIA = (
    (1, "tetrahedron from two opposite edges", c1_tetrahedron),
    (2, "simplex lower bound holds under search", c2_lower_bound),
    (3, "point+triangle versus segment+segment", c3_alternate),
    (4, "random hull compositions", c4_composition),
    (5, "hulls of segments in space", c5_segments),
    (6, "common illumination direction", c6_common_direction),
    (7, "bound table for flat L and M", c7_bounds),
    (8, "parallelepiped endpoints", c8_parallelepiped),
    (9, "illumination count versus covering", c9_cross_check),
    (10, "verifier soundness fuzz", c10_fuzz),
)


def run_one(number, seed=0, quick=False) -> Outcome:
    _, title, fn = CRITERIA[number - 1]
    t = time.perf_counter()
    try:
        ok, detail = fn(seed=seed, quick=quick)
    except Exception as exc:  # noqa: BLE001 - report, do not crash the table
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    return Outcome(number, title, bool(ok), detail, time.perf_counter() - t)


def run(numbers=None, seed=0, quick=False):
    numbers = numbers or [c[0] for c in CRITERIA]
    return [run_one(k, seed=seed, quick=quick) for k in numbers]
