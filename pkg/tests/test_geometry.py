"""Plane-dynamics tests: fixed points, manifold polylines, the Lyapunov
certificate, polygon invariance, homoclinic detection, zero-entropy
classification, and the period-four line."""

from __future__ import annotations

import math
import os
import random

import numpy as np
import pytest

from lozi_pruning.errors import (
    NoFixedPoint,
    NonInvertible,
    NotInvariant,
    WrongParams,
)
from lozi_pruning.geometry import (
    ZERO_ENTROPY_CODES,
    PlanePoint,
    ZeroEntropyVerdict,
    classify_zero_entropy,
    fixed_data,
    homoclinic_intersects,
    lozi_apply,
    lozi_apply_inverse,
    lozi_apply_n,
    lyapunov_delta,
    period4_segment,
    polygon_invariance,
    scan_zero_entropy,
    stable_manifold,
    unstable_manifold,
)
from lozi_pruning.geometry import _signed_dist_to_convex
from lozi_pruning.pruning import Params

CENTER = Params(1.0, 0.5)
CHAOTIC = Params(1.7, 0.5)


def _rand_points(n, lo=-3.0, hi=3.0, seed=0):
    rng = random.Random(seed)
    return [PlanePoint(rng.uniform(lo, hi), rng.uniform(lo, hi)) for _ in range(n)]


# ---------------------------------------------------------------- map steps


def test_apply_fixed_point_exact():
    p = PlanePoint(2.0 / 3.0, 2.0 / 3.0)
    img = lozi_apply(CENTER, p)
    assert img.dist(p) <= 1e-15


def test_apply_matches_defining_formula():
    params = Params(1.4, -0.3)
    for p in _rand_points(50, seed=1):
        img = lozi_apply(params, p)
        assert img.x == 1.0 - params.a * abs(p.x) + params.b * p.y
        assert img.y == p.x


def test_apply_inverse_roundtrip():
    params = Params(1.3, 0.4)
    for p in _rand_points(50, seed=2):
        there = lozi_apply(params, p)
        back = lozi_apply_inverse(params, there)
        assert back.dist(p) <= 1e-12
        assert lozi_apply(params, lozi_apply_inverse(params, p)).dist(p) <= 1e-12


def test_apply_inverse_needs_nonzero_b():
    with pytest.raises(NonInvertible):
        lozi_apply_inverse(Params(1.5, 0.0), PlanePoint(0.1, 0.2))


def test_apply_n_composes_and_inverts():
    params = Params(1.2, 0.3)
    p = PlanePoint(0.35, -0.2)
    q = p
    for _ in range(5):
        q = lozi_apply(params, q)
    assert lozi_apply_n(params, p, 5).dist(q) <= 1e-14
    assert lozi_apply_n(params, p, 0).dist(p) == 0.0
    assert lozi_apply_n(params, q, -5).dist(p) <= 1e-11


def test_orientation_flips_sign_with_b():
    # det of each affine piece is -b: reversing for b > 0, preserving b < 0.
    def area(u, v, w):
        return (v.x - u.x) * (w.y - u.y) - (v.y - u.y) * (w.x - u.x)

    tri_pos = (PlanePoint(0.3, 0.2), PlanePoint(0.4, 0.2), PlanePoint(0.3, 0.35))
    tri_neg = (PlanePoint(-0.3, 0.2), PlanePoint(-0.2, 0.2), PlanePoint(-0.3, 0.35))
    for b in (0.5, 0.25, -0.25, -0.5):
        params = Params(1.3, b)
        for tri in (tri_pos, tri_neg):
            imgs = tuple(lozi_apply(params, v) for v in tri)
            before = area(*tri)
            after = area(*imgs)
            if b > 0:
                assert before * after < 0
            else:
                assert before * after > 0
            assert math.isclose(abs(after / before), abs(b), rel_tol=1e-12)


# -------------------------------------------------------------- fixed data


def test_fixed_points_at_certified_params():
    fd = fixed_data(CENTER)
    assert fd.p1.dist(PlanePoint(2.0 / 3.0, 2.0 / 3.0)) <= 1e-12
    assert fd.p2.dist(PlanePoint(-2.0, -2.0)) <= 1e-12
    assert fd.p1.dist(lozi_apply(CENTER, fd.p1)) <= 1e-12
    assert fd.p2.dist(lozi_apply(CENTER, fd.p2)) <= 1e-12


def test_period_two_pair_at_certified_params():
    fd = fixed_data(CENTER)
    assert fd.n1.dist(PlanePoint(6.0 / 5.0, -2.0 / 5.0)) <= 1e-12
    assert fd.n2.dist(PlanePoint(-2.0 / 5.0, 6.0 / 5.0)) <= 1e-12
    assert fd.n1.dist(lozi_apply_n(CENTER, fd.n1, 2)) <= 1e-12
    assert fd.n2.dist(lozi_apply_n(CENTER, fd.n2, 2)) <= 1e-12
    assert lozi_apply(CENTER, fd.n1).dist(fd.n2) <= 1e-12
    assert fd.period2_attracting is True


def test_fixed_point_formula_and_residual_grid():
    for a in (0.8, 1.0, 1.2, 1.5):
        for b in (0.3, 0.5, 0.7):
            fd = fixed_data(Params(a, b))
            assert fd.p1 is not None
            x = 1.0 / (1.0 + a - b)
            assert abs(fd.p1.x - x) <= 1e-14
            assert abs(fd.p1.y - x) <= 1e-14
            assert fd.p1.dist(lozi_apply(Params(a, b), fd.p1)) <= 1e-12


def test_unique_saddle_region_has_no_companions():
    fd = fixed_data(Params(0.3, 0.5))
    assert fd.p1.dist(PlanePoint(1.25, 1.25)) <= 1e-12
    assert fd.p2 is None
    assert fd.n1 is None and fd.n2 is None


def test_no_fixed_point_raises():
    with pytest.raises(NoFixedPoint):
        fixed_data(Params(-2.5, -0.6))


def test_eigen_slopes_satisfy_characteristic_equations():
    for params in (CENTER, CHAOTIC, Params(1.2, 0.3)):
        a, b = params.a, params.b
        fd = fixed_data(params)
        root = math.sqrt(a * a + 4.0 * b)
        assert abs(fd.stable_slope_p1 - 0.5 * (-a + root)) <= 1e-14
        assert abs(fd.unstable_slope_p1 - 0.5 * (-a - root)) <= 1e-14
        # (lambda, 1) is an eigenvector of the x > 0 piece [[-a, b], [1, 0]]
        for lam in (fd.stable_slope_p1, fd.unstable_slope_p1):
            assert abs(-a * lam + b - lam * lam) <= 1e-12
        if fd.p2 is not None:
            assert abs(fd.unstable_slope_p2 - 0.5 * (a + root)) <= 1e-14
            assert abs(fd.stable_slope_p2 - 0.5 * (a - root)) <= 1e-14
            for lam in (fd.stable_slope_p2, fd.unstable_slope_p2):
                assert abs(a * lam + b - lam * lam) <= 1e-12


def test_period_two_closed_form_at_center():
    a, b = 1.0, 0.5
    big_n = (1.0 + a - b) / ((b - 1.0) ** 2 + a * a)
    assert abs(big_n - 6.0 / 5.0) <= 1e-15
    assert abs((1.0 - a * big_n) / (1.0 - b) - (-2.0 / 5.0)) <= 1e-15


# ---------------------------------------------------------------- manifolds


def test_unstable_right_passes_through_axis_crossing():
    pl = unstable_manifold(CENTER, "p1_right", arc_budget=10.0)
    z = PlanePoint((3.0 + math.sqrt(3.0)) / 3.0, 0.0)
    assert pl.point_distance(z) <= 1e-12
    assert pl.kind == "unstable_right"
    assert pl.vertices[0].dist(PlanePoint(2.0 / 3.0, 2.0 / 3.0)) <= 1e-12


@pytest.mark.parametrize("params", [CENTER, CHAOTIC], ids=["sink", "chaotic"])
def test_unstable_vertices_map_into_extended_polyline(params):
    # One step maps each branch into the union of both branches (the
    # unstable eigenvalue at p1 is negative, so single steps swap sides).
    short = [
        unstable_manifold(params, s, arc_budget=8.0) for s in ("p1_right", "p1_left")
    ]
    long = [
        unstable_manifold(params, s, arc_budget=40.0) for s in ("p1_right", "p1_left")
    ]
    worst = 0.0
    for pl in short:
        for v in pl.vertices:
            img = lozi_apply(params, v)
            worst = max(worst, min(ext.point_distance(img) for ext in long))
    assert worst <= 1e-9


def test_unstable_converges_into_sink_at_certified_params():
    fd = fixed_data(CENTER)
    for seed in ("p1_right", "p1_left"):
        pl = unstable_manifold(CENTER, seed, arc_budget=50.0)
        assert not pl.truncated
        end = pl.vertices[-1]
        assert min(end.dist(fd.n1), end.dist(fd.n2)) <= 1e-8
    right = unstable_manifold(CENTER, "p1_right", arc_budget=50.0)
    # straight stretch p1 -> Z (length 1.128) plus the spiral into the sink
    assert 2.0 < right.arc_length < 2.5


def test_unstable_budget_truncation_in_chaotic_regime():
    pl = unstable_manifold(CHAOTIC, "p1_right", arc_budget=50.0)
    assert pl.truncated
    assert pl.arc_length >= 50.0
    xs = [v.x for v in pl.vertices]
    ys = [v.y for v in pl.vertices]
    # stays in the attractor's bounding box
    assert -2.0 < min(xs) and max(xs) < 2.0
    assert -2.0 < min(ys) and max(ys) < 2.0


def test_p2_branch_is_self_invariant():
    # p2's unstable eigenvalue is positive: no side swap under single steps.
    short = unstable_manifold(CENTER, "p2", arc_budget=5.0)
    long = unstable_manifold(CENTER, "p2", arc_budget=25.0)
    worst = max(long.point_distance(lozi_apply(CENTER, v)) for v in short.vertices)
    assert worst <= 1e-9
    assert short.kind == "unstable_right"


def test_stable_halfline_is_straight_and_invariant():
    pl = stable_manifold(CENTER, "p1_plus", arc_budget=10.0)
    assert pl.kind == "stable_halfline"
    assert len(pl.vertices) == 2  # never meets the fold: an exact half-line
    fd = fixed_data(CENTER)
    direction = (pl.vertices[-1].x - fd.p1.x, pl.vertices[-1].y - fd.p1.y)
    lam = fd.stable_slope_p1
    norm = math.hypot(*direction)
    assert abs(direction[0] / norm - lam / math.hypot(lam, 1.0)) <= 1e-12
    # forward image of the far endpoint stays on the half-line
    assert pl.point_distance(lozi_apply(CENTER, pl.vertices[-1])) <= 1e-12


def test_stable_other_branch_bends():
    pl = stable_manifold(CENTER, "p1_minus", arc_budget=8.0)
    assert pl.kind == "stable_right"
    assert len(pl.vertices) > 2


def test_manifold_seed_and_invertibility_guards():
    with pytest.raises(ValueError):
        unstable_manifold(CENTER, "p3")
    with pytest.raises(ValueError):
        stable_manifold(CENTER, "nope")
    with pytest.raises(NonInvertible):
        stable_manifold(Params(1.5, 0.0), "p1_plus")


def test_polyline_point_distance_basics():
    pl = unstable_manifold(CENTER, "p1_right", arc_budget=10.0)
    v = pl.vertices[len(pl.vertices) // 2]
    assert pl.point_distance(v) <= 1e-15
    assert pl.point_distance(PlanePoint(10.0, 10.0)) > 8.0


# ----------------------------------------------------------------- lyapunov


def test_lyapunov_identity_inside_polygon():
    report = polygon_invariance(CENTER)
    poly = list(report.corners)
    xs = [c.x for c in poly]
    ys = [c.y for c in poly]
    rng = random.Random(99)
    checked = 0
    while checked < 1000:
        q = PlanePoint(rng.uniform(min(xs), max(xs)), rng.uniform(min(ys), max(ys)))
        if _signed_dist_to_convex(poly, q) <= 0.0:
            continue
        v = (q.x - 6.0 / 5.0) ** 2 + (q.y + 2.0 / 5.0) ** 2
        assert abs(lyapunov_delta(CENTER, q) + (15.0 / 16.0) * v) <= 1e-12
        checked += 1


def test_lyapunov_identity_on_alternating_sign_pattern():
    # The quartic step is affine wherever the four-step itinerary keeps the
    # period-2 sign pattern, and there the identity is exact.
    def pattern(q):
        out = []
        for _ in range(4):
            out.append(q.x >= 0.0)
            q = lozi_apply(CENTER, q)
        return tuple(out)

    hits = 0
    for q in _rand_points(4000, seed=5):
        if pattern(q) != (True, False, True, False):
            continue
        v = (q.x - 6.0 / 5.0) ** 2 + (q.y + 2.0 / 5.0) ** 2
        assert abs(lyapunov_delta(CENTER, q) + (15.0 / 16.0) * v) <= 1e-12
        hits += 1
    assert hits > 400  # the pattern region is a fat chunk of the sample box


def test_lyapunov_spot_values():
    fd = fixed_data(CENTER)
    z = PlanePoint((3.0 + math.sqrt(3.0)) / 3.0, 0.0)
    assert lyapunov_delta(CENTER, z) < -0.28
    assert abs(lyapunov_delta(CENTER, fd.n1)) <= 1e-15
    assert abs(lyapunov_delta(CENTER, fd.p1)) <= 1e-12  # p1 is L^4-fixed too


def test_lyapunov_needs_period_two_center():
    with pytest.raises(NoFixedPoint):
        lyapunov_delta(Params(0.3, 0.5), PlanePoint(0.0, 0.0))


# ------------------------------------------------------------------ polygon


def test_polygon_invariance_at_certified_params():
    report = polygon_invariance(CENTER)
    assert report.margin == 0.0
    assert len(report.corners) == 4
    expected = {
        (1.5774, 0.0),
        (1.2113, -0.5774),
        (1.1057, -0.5),
        (1.1972, -0.3557),
    }
    got = {(round(c.x, 4), round(c.y, 4)) for c in report.corners}
    assert got == expected


def test_polygon_contains_eighth_image_of_axis_crossing():
    z = PlanePoint((3.0 + math.sqrt(3.0)) / 3.0, 0.0)
    img = lozi_apply_n(CENTER, z, 8)
    assert abs(img.x - 1.223) <= 1e-3
    assert abs(img.y + 0.375) <= 1e-3
    poly = list(polygon_invariance(CENTER).corners)
    assert _signed_dist_to_convex(poly, img) > 0.0


def test_polygon_invariance_holds_under_perturbation():
    for ab in ((1.02, 0.5), (0.98, 0.5), (1.0, 0.52), (1.05, 0.45)):
        report = polygon_invariance(Params(*ab))
        assert report.margin >= 0.0


def test_polygon_invariance_fails_in_chaotic_regime():
    with pytest.raises(NotInvariant) as info:
        polygon_invariance(CHAOTIC)
    assert info.value.margin < -1.0
    assert len(info.value.witness) == 2


# --------------------------------------------------------------- homoclinic


def test_homoclinic_absent_at_certified_params():
    res = homoclinic_intersects(CENTER, arc_budget=30.0)
    assert res.outcome == "no_within_budget"
    assert not res.found and res.witness is None and not res.tangency


def test_homoclinic_present_in_chaotic_regime():
    res = homoclinic_intersects(CHAOTIC, arc_budget=30.0)
    assert res.outcome == "yes"
    assert res.found and res.witness is not None
    # the witness lies on both manifolds
    wu = min(
        unstable_manifold(CHAOTIC, s, arc_budget=30.0).point_distance(res.witness)
        for s in ("p1_right", "p1_left")
    )
    ws = min(
        stable_manifold(CHAOTIC, s, arc_budget=30.0).point_distance(res.witness)
        for s in ("p1_plus", "p1_minus")
    )
    assert wu <= 1e-9 and ws <= 1e-9
    # and away from the saddle itself
    fd = fixed_data(CHAOTIC)
    assert res.witness.dist(fd.p1) > 1e-3


def test_homoclinic_found_quickly_at_high_slope():
    res = homoclinic_intersects(Params(2.0, 0.05), arc_budget=20.0)
    assert res.found


def test_homoclinic_needs_invertible_map():
    with pytest.raises(NonInvertible):
        homoclinic_intersects(Params(1.7, 0.0))


def test_homoclinic_no_false_positive_near_certified_params():
    for ab in ((1.0, 0.46), (1.04, 0.54), (0.96, 0.5)):
        res = homoclinic_intersects(Params(*ab), arc_budget=20.0)
        assert not res.found
        assert not res.tangency


# ----------------------------------------------------------- zero entropy


def test_classify_certified_params_numeric_zero():
    v = classify_zero_entropy(CENTER, arc_budget=30.0)
    assert v.kind == "numeric_zero"
    assert v.case is None


def test_classify_analytic_strip():
    v = classify_zero_entropy(Params(0.2, 0.5))
    assert v.kind == "analytic_zero" and v.case == "ii"


def test_classify_chaotic_homoclinic():
    v = classify_zero_entropy(CHAOTIC, arc_budget=30.0)
    assert v.kind == "homoclinic"
    assert v.witness is not None


def test_classify_analytic_cases_partition():
    assert classify_zero_entropy(Params(-2.5, -0.5)).case == "i"
    assert classify_zero_entropy(Params(0.3, 0.3)).case == "ii"
    assert classify_zero_entropy(Params(0.5, 0.5)).case == "iii"  # a = 1 - b
    # boundary of (i): a = b - 1 included
    assert classify_zero_entropy(Params(-1.5, -0.5)).case == "i"


def test_classify_rejects_large_b():
    with pytest.raises(ValueError):
        classify_zero_entropy(Params(1.0, 1.2))


def test_verdict_type_guards():
    with pytest.raises(ValueError):
        ZeroEntropyVerdict(kind="certain")
    with pytest.raises(ValueError):
        ZeroEntropyVerdict(kind="analytic_zero", case="iv")


def test_analytic_pixels_are_never_homoclinic():
    # In the open strip (ii) the saddle has no homoclinic crossing; the two
    # verdicts must not overlap.
    for ab in ((0.2, 0.5), (0.3, 0.6), (0.1, 0.8)):
        assert classify_zero_entropy(Params(*ab)).kind == "analytic_zero"
        res = homoclinic_intersects(Params(*ab), arc_budget=10.0)
        assert not res.found


def test_scan_certified_block_uniform_numeric_zero():
    scan = scan_zero_entropy((0.95, 1.05), (0.45, 0.55), 4, arc_budget=20.0)
    assert (scan.codes == ZERO_ENTROPY_CODES["numeric_zero"]).all()


def test_scan_high_slope_block_uniform_homoclinic():
    scan = scan_zero_entropy((2.0, 2.2), (0.01, 0.09), 3, arc_budget=20.0)
    assert (scan.codes == ZERO_ENTROPY_CODES["homoclinic"]).all()


def test_scan_analytic_strip_uniform():
    scan = scan_zero_entropy((0.05, 0.25), (0.5, 0.7), 3, arc_budget=10.0)
    assert (scan.codes == ZERO_ENTROPY_CODES["analytic_zero_ii"]).all()


def test_scan_b_zero_pixel_scores_unknown():
    # resolution 1 centers the single row exactly on b = 0 where the
    # inverse map (hence the sweep) is unavailable
    scan = scan_zero_entropy((1.2, 1.4), (-0.1, 0.1), 1, arc_budget=10.0)
    assert scan.codes[0, 0] == ZERO_ENTROPY_CODES["unknown"]


def test_scan_grid_axes_and_guards():
    scan = scan_zero_entropy((1.0, 2.0), (0.0, 0.5), 4, arc_budget=5.0)
    assert abs(scan.a_of(0) - 1.125) <= 1e-15
    assert abs(scan.b_of(3) - 0.4375) <= 1e-15
    assert scan.codes.shape == (4, 4)
    with pytest.raises(ValueError):
        scan_zero_entropy((1.0, 2.0), (0.5, 1.5), 2)
    with pytest.raises(ValueError):
        scan_zero_entropy((1.0, 2.0), (0.0, 0.5), 0)


def test_scan_parallel_matches_serial():
    serial = scan_zero_entropy((0.95, 1.05), (0.45, 0.55), 3, arc_budget=15.0)
    os.environ["LOZI_THREADS"] = "2"
    try:
        parallel = scan_zero_entropy((0.95, 1.05), (0.45, 0.55), 3, arc_budget=15.0)
    finally:
        del os.environ["LOZI_THREADS"]
    assert (serial.codes == parallel.codes).all()


def test_zero_codes_distinct_and_complete():
    assert len(set(ZERO_ENTROPY_CODES.values())) == len(ZERO_ENTROPY_CODES)
    assert set(ZERO_ENTROPY_CODES) == {
        "analytic_zero_i",
        "analytic_zero_ii",
        "analytic_zero_iii",
        "numeric_zero",
        "homoclinic",
        "unknown",
    }


# -------------------------------------------------------------- period four


def test_period4_line_intercept_at_half():
    seg = period4_segment(0.5)
    assert abs(seg.intercept - 0.4) <= 1e-15
    assert seg.a == 1.5


def test_period4_sampled_points_close_orbits():
    seg = period4_segment(0.5)
    params = Params(seg.a, seg.b)
    pts = seg.sample(24)
    assert len(pts) == 24
    for q in pts:
        assert q.x <= 0.0
        assert abs(q.y - (-q.x + seg.intercept)) <= 1e-15
        assert seg.satisfies(q)
        assert lozi_apply_n(params, q, 4).dist(q) <= 1e-10
        # genuinely period four, not fixed
        assert lozi_apply(params, q).dist(q) > 1e-3
        # the image segment consists of period-4 points as well
        img = lozi_apply(params, q)
        assert lozi_apply_n(params, img, 4).dist(img) <= 1e-10


def test_period4_constraint_violators_move():
    seg = period4_segment(0.5)
    params = Params(seg.a, seg.b)
    bad = PlanePoint(0.5, -0.5 + seg.intercept)  # on the line but x > 0
    assert not seg.satisfies(bad)
    assert lozi_apply_n(params, bad, 4).dist(bad) > 1e-3


def test_period4_other_depths():
    for b in (0.25, 0.75):
        seg = period4_segment(b)
        params = Params(seg.a, seg.b)
        expected = (1.0 - b * b) / ((1.0 + b) * (1.0 + b * b))
        assert abs(seg.intercept - expected) <= 1e-15
        pts = seg.sample(8)
        assert pts, "feasible stretch must be nonempty"
        for q in pts:
            assert lozi_apply_n(params, q, 4).dist(q) <= 1e-10


def test_period4_guards():
    with pytest.raises(WrongParams):
        period4_segment(0.0)
    with pytest.raises(WrongParams):
        period4_segment(-0.5)
    with pytest.raises(WrongParams):
        period4_segment(0.5, a=1.6)
    assert period4_segment(0.5, a=1.5).intercept == pytest.approx(0.4)
