"""Acceptance checks behind the verify subcommand.

Each check states one verifiable claim about the library, runs it at full
scale by default, and reports a single pass/fail line with the measured
quantity. The test suite calls the same functions, so the CLI report and
the tests cannot drift apart. Checks that produce artifacts write them into
the configured output directory; everything is deterministic given the
config, including the sampled checks (seeded generators only).
"""

from __future__ import annotations

import filecmp
import math
import os
import random
import tempfile
from dataclasses import dataclass

import numpy as np

from . import formats
from .derivatives import (
    a_derivative_bounds,
    b_derivative_bounds,
    dq_db_at_b0,
    fd_derivative,
)
from .geometry import (
    ZERO_ENTROPY_CODES,
    PlanePoint,
    classify_zero_entropy,
    fixed_data,
    lozi_apply,
    lozi_apply_n,
    lyapunov_delta,
    polygon_invariance,
    scan_zero_entropy,
)
from .pruning import (
    Params,
    Verdict,
    classify_cylinder,
    closed_form_q,
    eval_q,
    pruned_region_raster,
    special_head,
)
from .pruning import _p_intervals_for_tails, _tails_matrix_coordinate_order
from .symbolic import Word
from .tent import (
    check_identity_shifted,
    check_identity_sum,
    identity_tail_bound,
    kneading,
    tent_entropy_lap,
)

# interval arithmetic runs without directed rounding, so certified enclosures
# can be short by a few ulps; comparisons allow this much absolute dust
ULP_SLACK = 5e-13

_FD_H = 1e-6
_BOUND_SLOPES = (1.3, 1.5, 1.7, 2.0)


@dataclass(frozen=True)
class CheckResult:
    index: int
    name: str
    passed: bool
    detail: str


def _artifact(config, name: str) -> str | None:
    if not config.out:
        return None
    os.makedirs(config.out, exist_ok=True)
    return os.path.join(config.out, name)


def check_closed_form_series(config, _=None) -> CheckResult:
    """Series evaluation matches the closed form within its own error bar."""
    w = Word((), special_head(60))
    worst = -math.inf
    for i in range(50):
        b = -0.9 + i * (1.8 / 49)
        for j in range(50):
            a = 1.0 + abs(b) + 0.02 + j * (1.3 / 49)
            params = Params(a, b)
            bv = eval_q(w, 40, params)
            gap = abs(bv.value - closed_form_q(params)) - bv.err
            worst = max(worst, gap)
    return CheckResult(
        1,
        "closed-form-series",
        worst <= ULP_SLACK,
        f"worst |series - closed| minus reported err = {worst:.3e} over 2500 params",
    )


def check_head_maximum(config, _=None) -> CheckResult:
    """At full slope the alternating head attains 1; others stay below."""
    params = Params(2.0, 0.0)
    sp = special_head(60)
    at_max = eval_q(Word((), sp), 59, params)
    rng = random.Random(config.seed + 7)
    worst_other = -math.inf
    count = 0
    while count < 500:
        head = (1,) + tuple(rng.choice((1, -1)) for _ in range(39))
        if head == sp[:40]:
            continue
        worst_other = max(worst_other, eval_q(Word((), head), 39, params).hi)
        count += 1
    passed = abs(at_max.value - 1.0) <= 1e-10 and worst_other < 1.0
    return CheckResult(
        2,
        "head-maximum",
        passed,
        f"|q(max head) - 1| = {abs(at_max.value - 1.0):.3e}, "
        f"largest of 500 other heads = {worst_other!r}",
    )


def check_full_slope_raster(config, _=None) -> CheckResult:
    """Nothing is pruned at full slope: the region degenerates to nothing."""
    word_len = config.word_len if config.word_len is not None else 10
    depth = config.depth if config.depth is not None else 12
    raster = pruned_region_raster(Params(2.0, 0.0), word_len, depth)
    path = _artifact(config, "full_slope_raster.pgm")
    if path:
        formats.write_pgm(path, raster.cells, force=config.force)
        formats.write_sidecar(
            path + ".txt",
            {"a": 2.0, "b": 0.0, "word_len": word_len, "depth": depth},
            force=config.force,
        )
    total = raster.width * raster.height
    return CheckResult(
        3,
        "full-slope-raster",
        raster.pruned_count == 0,
        f"{raster.pruned_count} pruned of {total} cells at word_len {word_len}",
    )


def check_derivative_anchors(config, _=None) -> CheckResult:
    """Finite differences land on the closed-form derivative values."""
    gaps = []
    for eps in (1, -1):
        tail = (1, -1) * 6 + (1, eps, 1)
        w = Word(tail, special_head(40))
        fd = fd_derivative("p", w, Params(2.0, 0.0), (0.0, 1.0), h=_FD_H)
        gaps.append(abs(fd - 0.5 * eps))
    fd_q = fd_derivative("q", Word((), special_head(40)), Params(2.0, 0.0), (0.0, 1.0), h=_FD_H)
    gaps.append(abs(fd_q))
    closed_gap = abs(dq_db_at_b0(1.5) - (-8.0 / 9.0))
    passed = max(gaps) <= 1e-4 and closed_gap <= 1e-10
    return CheckResult(
        4,
        "derivative-anchors",
        passed,
        f"worst fd gap {max(gaps):.3e}, closed-form gap at 1.5 = {closed_gap:.3e}",
    )


def check_bound_lemmas(config, _=None) -> CheckResult:
    """Every depth-14 tail obeys the two-sided derivative bounds."""
    worst_excess = -math.inf
    full = a_derivative_bounds(2.0)
    if not (full.lo == 0.75 and full.hi == 1.0):
        return CheckResult(5, "bound-lemmas", False, "full-slope interval moved")
    for a in _BOUND_SLOPES:
        head = kneading(a, 14).symbols
        hw = Word((), head)

        def qv(aa: float, bb: float) -> float:
            return eval_q(hw, 13, Params(aa, bb)).value

        # the tail series is identically 1 at b = 0, so the slope derivative
        # of the difference is the same number for every tail
        fd_a = -(qv(a + _FD_H, 0.0) - qv(a - _FD_H, 0.0)) / (2 * _FD_H)
        da = a_derivative_bounds(a)
        worst_excess = max(worst_excess, da.lo - fd_a, fd_a - da.hi)

        fd_q_b = (qv(a, _FD_H) - qv(a, -_FD_H)) / (2 * _FD_H)
        sym = _tails_matrix_coordinate_order(14)
        plo1, phi1 = _p_intervals_for_tails(sym, 12, Params(a, _FD_H))
        plo2, phi2 = _p_intervals_for_tails(sym, 12, Params(a, -_FD_H))
        fd_b = ((plo1 + phi1) - (plo2 + phi2)) / (4 * _FD_H) - fd_q_b
        eps2 = sym[:, 1]
        for e in (1, -1):
            db = b_derivative_bounds(a, e)
            sel = fd_b[eps2 == e]
            worst_excess = max(
                worst_excess, db.lo - float(sel.min()), float(sel.max()) - db.hi
            )
    return CheckResult(
        5,
        "bound-lemmas",
        worst_excess <= 1e-3,
        f"worst bound excess {worst_excess:.3e} over 4 slopes x 16384 tails",
    )


def check_kneading_identities(config, _=None) -> CheckResult:
    """Alternating-sum and shifted identities hold under their tail bounds."""
    n = 40
    worst_ratio = -math.inf
    for k in range(12):
        a = 1.05 + k * (0.95 / 11)
        kn = kneading(a, n + 6)
        if kn.boundary_hits:
            return CheckResult(
                6, "kneading-identities", False, f"fold hit in prefix at a={a!r}"
            )
        r = check_identity_sum(a, kn.symbols, n) / identity_tail_bound(a, n)
        worst_ratio = max(worst_ratio, r)
        for i in range(6):
            bound = a ** (-(i + n)) / (a - 1.0)
            worst_ratio = max(
                worst_ratio, check_identity_shifted(a, kn.symbols, i, n) / bound
            )
    return CheckResult(
        6,
        "kneading-identities",
        worst_ratio <= 1.0,
        f"worst residual/bound = {worst_ratio:.6f} over 12 slopes, shifts <= 5",
    )


def check_entropy_brackets(config, _=None) -> CheckResult:
    """Count brackets trap the known entropy values; lap oracle concurs."""
    from .cli import entropy_rows

    n_max = config.n_max if config.n_max is not None else 16
    depth = config.depth if config.depth is not None else 12
    details = []
    passed = True
    all_rows = []
    for a, b, target in ((2.1, 0.05, math.log(2.0)), (1.7, 0.0, math.log(1.7))):
        rows = entropy_rows(Params(a, b), n_max, depth)
        all_rows.extend(rows)
        h_lo, h_hi = rows[-1][-2], rows[-1][-1]
        ok = h_lo - 0.05 <= target <= h_hi + 0.05
        passed &= ok
        details.append(f"({a},{b}): [{h_lo:.4f},{h_hi:.4f}] target {target:.4f}")
    lap = tent_entropy_lap(1.7, n_max)
    lap_ok = abs(lap - math.log(1.7)) <= 0.05
    passed &= lap_ok
    details.append(f"lap oracle {lap:.4f}")
    path = _artifact(config, "entropy.csv")
    if path:
        from .cli import ENTROPY_HEADER

        formats.write_csv(path, ENTROPY_HEADER, all_rows, force=config.force)
    return CheckResult(7, "entropy-brackets", bool(passed), "; ".join(details))


def check_upper_bound_monotone(config, _=None) -> CheckResult:
    """The upper entropy bound grows with the slope along a fold-free line."""
    from .cli import ENTROPY_HEADER, entropy_rows

    n_max = config.n_max if config.n_max is not None else 12
    depth = config.depth if config.depth is not None else 12
    uppers = []
    rows = []
    for k in range(13):
        a = 1.4 + 0.05 * k
        sweep = entropy_rows(Params(a, 0.02), n_max, depth)
        rows.append(sweep[-1])
        uppers.append(sweep[-1][-1])
    worst_drop = max(
        (prev - cur for prev, cur in zip(uppers, uppers[1:])), default=0.0
    )
    path = _artifact(config, "entropy_sweep.csv")
    if path:
        formats.write_csv(path, ENTROPY_HEADER, rows, force=config.force)
    return CheckResult(
        8,
        "upper-bound-monotone",
        worst_drop <= 0.02,
        f"worst h_upper drop {worst_drop:.4f} along 13 slopes at b=0.02",
    )


def check_plane_anchors(config, _=None) -> CheckResult:
    """Fixed points, the quadratic certificate, and the returning corner."""
    params = Params(1.0, 0.5)
    fd = fixed_data(params)
    residual = max(
        fd.p1.dist(lozi_apply(params, fd.p1)),
        fd.p2.dist(lozi_apply(params, fd.p2)),
        fd.n1.dist(lozi_apply_n(params, fd.n1, 2)),
        fd.n2.dist(lozi_apply_n(params, fd.n2, 2)),
        fd.n1.dist(PlanePoint(1.2, -0.4)),
    )
    report = polygon_invariance(params)
    poly = list(report.corners)
    xs = [c.x for c in poly]
    ys = [c.y for c in poly]

    def inside(q: PlanePoint) -> bool:
        n = len(poly)
        for k in range(n):
            c1, c2 = poly[k], poly[(k + 1) % n]
            if (c2.x - c1.x) * (q.y - c1.y) - (c2.y - c1.y) * (q.x - c1.x) < 0.0:
                return False
        return True

    rng = random.Random(config.seed + 99)
    worst_identity = -math.inf
    checked = 0
    while checked < 1000:
        q = PlanePoint(rng.uniform(min(xs), max(xs)), rng.uniform(min(ys), max(ys)))
        if not inside(q):
            continue
        v = (q.x - 1.2) ** 2 + (q.y + 0.4) ** 2
        worst_identity = max(
            worst_identity, abs(lyapunov_delta(params, q) + (15.0 / 16.0) * v)
        )
        checked += 1

    z = PlanePoint(fd.p1.x - fd.unstable_slope_p1 * fd.p1.y, 0.0)
    corner_gap = lozi_apply_n(params, z, 8).dist(PlanePoint(1.223, -0.375))
    passed = (
        residual <= 1e-12
        and worst_identity <= 1e-12
        and corner_gap <= 1e-3
        and report.margin >= 0.0
    )
    return CheckResult(
        9,
        "plane-anchors",
        passed,
        f"orbit residual {residual:.2e}, identity residual {worst_identity:.2e}, "
        f"corner gap {corner_gap:.2e}, polygon margin {report.margin!r}",
    )


def check_zero_entropy_atlas(config, _=None) -> CheckResult:
    """Classifier anchors plus the parameter-plane scan's three zones."""
    arc_budget = config.arc_budget if config.arc_budget is not None else 20.0
    anchors = (
        classify_zero_entropy(Params(1.0, 0.5), arc_budget).kind == "numeric_zero",
        classify_zero_entropy(Params(0.2, 0.5), arc_budget).case == "ii",
        classify_zero_entropy(Params(1.7, 0.5), arc_budget).kind == "homoclinic",
    )
    resolution = config.grid if config.grid is not None else 100
    scan = scan_zero_entropy((0.0, 2.5), (0.0, 1.0), resolution, arc_budget)
    zone_bad = 0
    zone_hits = [0, 0, 0]
    for i in range(resolution):
        b = scan.b_of(i)
        for j in range(resolution):
            a = scan.a_of(j)
            code = int(scan.codes[i, j])
            if a < 1.0 - b:
                zone_hits[0] += 1
                zone_bad += code != ZERO_ENTROPY_CODES["analytic_zero_ii"]
            if abs(a - 1.0) <= 0.05 and abs(b - 0.5) <= 0.025:
                zone_hits[1] += 1
                zone_bad += code != ZERO_ENTROPY_CODES["numeric_zero"]
            if a >= 2.0:
                zone_hits[2] += 1
                zone_bad += code != ZERO_ENTROPY_CODES["homoclinic"]
    path = _artifact(config, "zero_scan.pgm")
    if path:
        formats.write_pgm(path, scan.codes, force=config.force)
    passed = all(anchors) and zone_bad == 0
    return CheckResult(
        10,
        "zero-entropy-atlas",
        passed,
        f"anchors {tuple(int(x) for x in anchors)}, {zone_bad} zone violations "
        f"(strip/block/crossing pixels {zone_hits}) at {resolution}x{resolution}",
    )


def check_orbit_window_consistency(config, _=None) -> CheckResult:
    """Symbol windows cut from a real bounded orbit are never pruned."""
    params = Params(1.7, 0.5)
    pt = PlanePoint(0.1, 0.1)
    for _ in range(200):
        pt = lozi_apply(params, pt)
    symbols = []
    for _ in range(1500):
        symbols.append(1 if pt.x >= 0.0 else -1)
        pt = lozi_apply(params, pt)
        if abs(pt.x) > 5.0 or abs(pt.y) > 5.0:
            return CheckResult(
                11, "orbit-window-consistency", False, "orbit left the trapping box"
            )
    rng = random.Random(config.seed + 13)
    half = 6
    pruned = 0
    for _ in range(1000):
        t = rng.randrange(half, len(symbols) - half)
        w = Word(tuple(symbols[t - half : t]), tuple(symbols[t : t + half]))
        pruned += classify_cylinder(w, 5, 3, params) is Verdict.CERTIFIED_PRUNED
    return CheckResult(
        11,
        "orbit-window-consistency",
        pruned == 0,
        f"{pruned} of 1000 orbit windows certified pruned",
    )


def check_artifact_determinism(config, _=None) -> CheckResult:
    """The verify command itself is reproducible byte for byte."""
    import contextlib
    import io

    from .cli import main

    with tempfile.TemporaryDirectory() as scratch:
        dirs = [os.path.join(scratch, d) for d in ("first", "second")]
        for d in dirs:
            with contextlib.redirect_stdout(io.StringIO()):
                code = main(
                    [
                        "verify",
                        "--criteria",
                        "3,4,6,9",
                        "--word-len",
                        "6",
                        "--seed",
                        str(config.seed),
                        "--out",
                        d,
                        "--force",
                    ]
                )
            if code != 0:
                return CheckResult(
                    12, "artifact-determinism", False, f"inner run exited {code}"
                )
        names = sorted(os.listdir(dirs[0]))
        if names != sorted(os.listdir(dirs[1])):
            return CheckResult(
                12, "artifact-determinism", False, "runs produced different files"
            )
        _, mismatch, errors = filecmp.cmpfiles(dirs[0], dirs[1], names, shallow=False)
        passed = not mismatch and not errors
        return CheckResult(
            12,
            "artifact-determinism",
            passed,
            f"{len(names)} artifacts compared, {len(mismatch)} mismatched",
        )


CHECKS = {
    1: check_closed_form_series,
    2: check_head_maximum,
    3: check_full_slope_raster,
    4: check_derivative_anchors,
    5: check_bound_lemmas,
    6: check_kneading_identities,
    7: check_entropy_brackets,
    8: check_upper_bound_monotone,
    9: check_plane_anchors,
    10: check_zero_entropy_atlas,
    11: check_orbit_window_consistency,
    12: check_artifact_determinism,
}


def parse_criteria(text: str) -> list[int]:
    if text.strip().lower() == "all":
        return sorted(CHECKS)
    indices = sorted({int(part) for part in text.split(",") if part.strip()})
    for index in indices:
        if index not in CHECKS:
            raise ValueError(f"criterion {index} does not exist (valid: 1..12)")
    return indices


def run_checks(config) -> list[CheckResult]:
    return [CHECKS[index](config) for index in parse_criteria(config.criteria)]
