"""Plane dynamics of the Lozi family: fixed points and period-2 sinks,
piecewise-affine invariant-manifold polylines, the quartic-step Lyapunov
certificate, homoclinic detection, and the zero-entropy classifier/scan."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import NoFixedPoint, NonInvertible, NotInvariant, WrongParams
from .pruning import Params


@dataclass(frozen=True)
class PlanePoint:
    x: float
    y: float

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)

    def dist(self, other: "PlanePoint") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


def lozi_apply(params: Params, p: PlanePoint) -> PlanePoint:
    """One exact piecewise-affine step (x, y) -> (1 - a|x| + by, x)."""
    return PlanePoint(1.0 - params.a * abs(p.x) + params.b * p.y, p.x)


def lozi_apply_inverse(params: Params, p: PlanePoint) -> PlanePoint:
    """One exact inverse step; needs b != 0."""
    if params.b == 0.0:
        raise NonInvertible("the map collapses the plane at b = 0")
    return PlanePoint(p.y, (p.x - 1.0 + params.a * abs(p.y)) / params.b)


def lozi_apply_n(params: Params, p: PlanePoint, n: int) -> PlanePoint:
    """n-fold image; negative n iterates the inverse (b != 0)."""
    step = lozi_apply if n >= 0 else lozi_apply_inverse
    for _ in range(abs(n)):
        p = step(params, p)
    return p


# ------------------------------------------------------------ fixed points


@dataclass(frozen=True)
class FixedData:
    """Saddles p1/p2, the period-2 pair n1/n2 when present, and the
    eigen-slopes of the affine pieces at each saddle.

    Slopes are the lambda of eigenvectors (lambda, 1); None when the
    respective fixed point is absent or the eigenvalues are complex.
    """

    p1: PlanePoint | None
    p2: PlanePoint | None
    n1: PlanePoint | None
    n2: PlanePoint | None
    stable_slope_p1: float | None
    unstable_slope_p1: float | None
    stable_slope_p2: float | None
    unstable_slope_p2: float | None
    period2_attracting: bool | None


def _residual2(params: Params, p: PlanePoint) -> float:
    q = lozi_apply_n(params, p, 2)
    return p.dist(q)


def fixed_data(params: Params) -> FixedData:
    """Fixed and period-2 points with eigen-slopes, by the closed formulas.

    Candidates are validated against the actual map (residual <= 1e-10), so
    sign-pattern breakdowns outside the structure region simply report the
    point as absent rather than returning a formula ghost.
    """
    a, b = params.a, params.b
    disc = a * a + 4.0 * b
    root = math.sqrt(disc) if disc >= 0.0 else None

    p1 = p2 = None
    s1 = u1 = s2 = u2 = None
    if 1.0 + a - b > 0.0:
        x = 1.0 / (1.0 + a - b)
        cand = PlanePoint(x, x)
        if cand.dist(lozi_apply(params, cand)) <= 1e-10:
            p1 = cand
            if root is not None:
                s1 = 0.5 * (-a + root)
                u1 = 0.5 * (-a - root)
    if 1.0 - a - b < 0.0:
        x = 1.0 / (1.0 - a - b)
        cand = PlanePoint(x, x)
        if cand.dist(lozi_apply(params, cand)) <= 1e-10:
            p2 = cand
            if root is not None:
                s2 = 0.5 * (a - root)
                u2 = 0.5 * (a + root)
    if p1 is None and p2 is None:
        raise NoFixedPoint(f"no fixed point at (a, b) = ({a}, {b})")

    n1 = n2 = None
    attracting = None
    den = (b - 1.0) ** 2 + a * a
    if b != 1.0 and den > 0.0:
        big_n = (1.0 + a - b) / den
        cand1 = PlanePoint(big_n, (1.0 - a * big_n) / (1.0 - b))
        cand2 = PlanePoint(cand1.y, cand1.x)
        genuine = cand1.dist(cand2) > 1e-10  # otherwise it collapses onto p1
        if genuine and _residual2(params, cand1) <= 1e-10 and _residual2(params, cand2) <= 1e-10:
            n1, n2 = cand1, cand2
            jac1 = np.array([[-a * math.copysign(1.0, n1.x), b], [1.0, 0.0]])
            jac2 = np.array([[-a * math.copysign(1.0, n2.x), b], [1.0, 0.0]])
            eig = np.linalg.eigvals(jac2 @ jac1)
            attracting = bool(np.max(np.abs(eig)) < 1.0)
    return FixedData(
        p1=p1,
        p2=p2,
        n1=n1,
        n2=n2,
        stable_slope_p1=s1,
        unstable_slope_p1=u1,
        stable_slope_p2=s2,
        unstable_slope_p2=u2,
        period2_attracting=attracting,
    )


# --------------------------------------------------------------- polylines


@dataclass(frozen=True)
class Polyline:
    """Piecewise-linear manifold approximation grown from a saddle.

    truncated marks growth stopped by the arc budget; otherwise the arc
    length stagnated (the branch converged, e.g. into a sink).
    """

    vertices: tuple[PlanePoint, ...]
    kind: str
    truncated: bool
    arc_length: float

    def segments(self) -> np.ndarray:
        pts = np.array([(v.x, v.y) for v in self.vertices])
        return np.stack([pts[:-1], pts[1:]], axis=1)

    def point_distance(self, q: PlanePoint) -> float:
        """Distance from q to the polyline (exact over segments)."""
        pts = np.array([(v.x, v.y) for v in self.vertices])
        if len(pts) == 1:
            return float(math.hypot(pts[0][0] - q.x, pts[0][1] - q.y))
        a0 = pts[:-1]
        d = pts[1:] - a0
        rel = np.array([q.x, q.y]) - a0
        denom = np.einsum("ij,ij->i", d, d)
        t = np.clip(
            np.divide(
                np.einsum("ij,ij->i", rel, d),
                denom,
                out=np.zeros_like(denom),
                where=denom > 0,
            ),
            0.0,
            1.0,
        )
        near = a0 + t[:, None] * d
        return float(np.min(np.hypot(near[:, 0] - q.x, near[:, 1] - q.y)))


def _map_polyline(pts, step, kink_coord):
    """Image of a polyline under one piecewise-affine step, inserting an
    exact vertex wherever a segment crosses the step's fold line."""
    out = []
    for i, u in enumerate(pts[:-1]):
        w = pts[i + 1]
        out.append(step(u))
        cu, cw = kink_coord(u), kink_coord(w)
        if cu * cw < 0.0:
            t = cu / (cu - cw)
            out.append(step(PlanePoint(u.x + t * (w.x - u.x), u.y + t * (w.y - u.y))))
    out.append(step(pts[-1]))
    return out


def _drop_collinear(pts, tol=1e-13):
    if len(pts) <= 2:
        return pts
    kept = [pts[0]]
    for i in range(1, len(pts) - 1):
        u, v, w = kept[-1], pts[i], pts[i + 1]
        if v.dist(u) == 0.0:
            continue
        cross = (v.x - u.x) * (w.y - u.y) - (v.y - u.y) * (w.x - u.x)
        span = max(u.dist(w), 1e-30)
        if abs(cross) <= tol * span:
            continue
        kept.append(v)
    kept.append(pts[-1])
    return kept


def _arc(pts) -> float:
    return float(sum(pts[i].dist(pts[i + 1]) for i in range(len(pts) - 1)))


def _grow_branch(
    params: Params,
    start: PlanePoint,
    direction: tuple[float, float],
    inverse: bool,
    kind: str,
    arc_budget: float,
    flat_tol: float,
    max_passes: int = 60,
) -> Polyline:
    if inverse and params.b == 0.0:
        raise NonInvertible("stable side needs the inverse map; b = 0")
    step = (lambda p: lozi_apply_inverse(params, p)) if inverse else (
        lambda p: lozi_apply(params, p)
    )
    kink_coord = (lambda p: p.y) if inverse else (lambda p: p.x)

    norm = math.hypot(*direction)
    ux, uy = direction[0] / norm, direction[1] / norm
    # Stay strictly inside the starting affine piece: the eigenline is the
    # exact local manifold there, so the seed is on the manifold.
    coord0 = kink_coord(start)
    dcoord = uy if inverse else ux
    t_kink = abs(coord0 / dcoord) if dcoord != 0.0 and coord0 != 0.0 else math.inf
    t0 = min(1e-4, 0.5 * t_kink)
    pts = [start, PlanePoint(start.x + t0 * ux, start.y + t0 * uy)]

    truncated = False
    prev_arc = 0.0
    for _ in range(max_passes):
        # Double step keeps a branch on its own side when the eigenvalue
        # is negative and the two branches swap under a single step.
        pts = _map_polyline(pts, step, kink_coord)
        pts = _map_polyline(pts, step, kink_coord)
        # The anchor is exactly fixed; re-pin it so rounding drift does not
        # get amplified along the expanding direction pass after pass.
        pts[0] = start
        pts = _drop_collinear(pts)
        arc = _arc(pts)
        if arc >= arc_budget:
            truncated = True
            break
        # Collinear dropping can shave the measured arc, so compare by
        # magnitude; converged spirals are the only true stagnation.
        if abs(arc - prev_arc) < flat_tol:
            break
        prev_arc = arc
    return Polyline(
        vertices=tuple(pts), kind=kind, truncated=truncated, arc_length=_arc(pts)
    )


_UNSTABLE_KINDS = {
    "p1_right": "unstable_right",
    "p1_left": "unstable_left_halfline",
    "p2": "unstable_right",
}


def unstable_manifold(
    params: Params,
    seed: str,
    arc_budget: float = 50.0,
    flat_tol: float = 1e-9,
) -> Polyline:
    """Unstable branch polyline seeded at a saddle.

    seed is one of p1_right (the branch through the x-axis crossing),
    p1_left (the opposite branch), or p2.
    """
    if seed not in _UNSTABLE_KINDS:
        raise ValueError(f"seed must be one of {sorted(_UNSTABLE_KINDS)}")
    fd = fixed_data(params)
    if seed == "p2":
        if fd.p2 is None or fd.unstable_slope_p2 is None:
            raise NoFixedPoint("p2 missing or non-real eigenvalues")
        start, lam = fd.p2, fd.unstable_slope_p2
        direction = (lam, 1.0)
    else:
        if fd.p1 is None or fd.unstable_slope_p1 is None:
            raise NoFixedPoint("p1 missing or non-real eigenvalues")
        start, lam = fd.p1, fd.unstable_slope_p1
        # The right branch runs through the x-axis: negated eigenvector.
        direction = (-lam, -1.0) if seed == "p1_right" else (lam, 1.0)
    return _grow_branch(
        params, start, direction, False, _UNSTABLE_KINDS[seed], arc_budget, flat_tol
    )


def stable_manifold(
    params: Params,
    seed: str = "p1_plus",
    arc_budget: float = 50.0,
    flat_tol: float = 1e-9,
) -> Polyline:
    """Stable branch polyline of p1, grown with the inverse map.

    p1_plus follows (stable_slope, 1) into the half-plane x > 0 (straight
    whenever it never meets the fold); p1_minus is the opposite branch.
    """
    if seed not in ("p1_plus", "p1_minus"):
        raise ValueError("seed must be p1_plus or p1_minus")
    fd = fixed_data(params)
    if fd.p1 is None or fd.stable_slope_p1 is None:
        raise NoFixedPoint("p1 missing or non-real eigenvalues")
    lam = fd.stable_slope_p1
    direction = (lam, 1.0) if seed == "p1_plus" else (-lam, -1.0)
    kind = "stable_halfline" if seed == "p1_plus" else "stable_right"
    return _grow_branch(params, fd.p1, direction, True, kind, arc_budget, flat_tol)


# ------------------------------------------------------------- lyapunov


def lyapunov_delta(params: Params, q: PlanePoint) -> float:
    """V(L^4 q) - V(q) with V the squared distance to the period-2 point n1."""
    fd = fixed_data(params)
    if fd.n1 is None:
        raise NoFixedPoint("period-2 pair absent; no Lyapunov center")
    img = lozi_apply_n(params, q, 4)

    def v(p: PlanePoint) -> float:
        return (p.x - fd.n1.x) ** 2 + (p.y - fd.n1.y) ** 2

    return v(img) - v(q)


# --------------------------------------------------------------- polygon


@dataclass(frozen=True)
class PolygonReport:
    corners: tuple[PlanePoint, ...]
    margin: float
    image_vertices: int


# Below this the signed-distance minimum counts as touching contact, not
# escape: the image boundary genuinely runs along polygon edges, so exact
# containment shows up as zero plus rounding dust.
_MARGIN_DUST = 1e-12


def _axis_crossing_of_unstable_line(fd: FixedData) -> PlanePoint:
    # Intersection of the unstable eigenline at p1 with the x-axis.
    lam = fd.unstable_slope_p1
    return PlanePoint(fd.p1.x - lam * fd.p1.y, 0.0)


def _convex_hull(points) -> list[PlanePoint]:
    """Monotone-chain hull, counterclockwise, no duplicates."""
    pts = sorted(set((p.x, p.y) for p in points))
    if len(pts) < 3:
        return [PlanePoint(*p) for p in pts]

    def chain(seq):
        out: list[tuple[float, float]] = []
        for p in seq:
            while len(out) >= 2:
                ox, oy = out[-2]
                vx, vy = out[-1]
                if (vx - ox) * (p[1] - oy) - (vy - oy) * (p[0] - ox) > 0.0:
                    break
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    return [PlanePoint(*p) for p in lower[:-1] + upper[:-1]]


def _signed_dist_to_convex(poly, q: PlanePoint) -> float:
    """Positive inside a counterclockwise convex polygon; distance to the
    nearest edge line."""
    best = math.inf
    n = len(poly)
    for i in range(n):
        u, w = poly[i], poly[(i + 1) % n]
        ex, ey = w.x - u.x, w.y - u.y
        elen = math.hypot(ex, ey)
        cross = ex * (q.y - u.y) - ey * (q.x - u.x)
        best = min(best, cross / elen)
    return best


def _corner_polygon(params: Params) -> list[PlanePoint]:
    fd = fixed_data(params)
    if fd.p1 is None or fd.unstable_slope_p1 is None:
        raise NoFixedPoint("polygon anchor needs the p1 saddle")
    z = _axis_crossing_of_unstable_line(fd)
    corners = [z]
    for _ in range(3):
        corners.append(lozi_apply_n(params, corners[-1], 2))
    hull = _convex_hull(corners)
    if len(hull) < 3:
        raise WrongParams("corner orbit is collinear; no polygon to test")
    return hull


def polygon_invariance(params: Params, double_steps: int = 1) -> PolygonReport:
    """Check the double-step image of the corner polygon stays inside it.

    P is the convex hull of Z, L^2 Z, L^4 Z, L^6 Z where Z is the x-axis
    crossing of the unstable eigenline at p1. The boundary maps exactly
    (fold-splitting polyline passes), and a polyline lies in a convex P
    precisely when its vertices do, so the verdict is rigorous. Shared
    corners force touching contact, hence the margin of a passing check
    is typically exactly zero. Raises NotInvariant on genuine escape.
    """
    poly = _corner_polygon(params)
    step = lambda p: lozi_apply(params, p)
    kink = lambda p: p.x
    boundary = poly + [poly[0]]
    for _ in range(2 * double_steps):
        boundary = _map_polyline(boundary, step, kink)
    boundary = _drop_collinear(boundary)

    worst = math.inf
    witness = None
    for q in boundary:
        d = _signed_dist_to_convex(poly, q)
        if d < worst:
            worst, witness = d, q
    if worst < -_MARGIN_DUST:
        raise NotInvariant(
            f"boundary image escapes the polygon by {-worst:.3e}",
            witness=(witness.x, witness.y),
            margin=worst,
        )
    return PolygonReport(
        corners=tuple(poly),
        margin=max(worst, 0.0),
        image_vertices=len(boundary),
    )


# -------------------------------------------------------------- homoclinic


@dataclass(frozen=True)
class HomoclinicResult:
    found: bool
    witness: PlanePoint | None
    tangency: bool

    @property
    def outcome(self) -> str:
        return "yes" if self.found else "no_within_budget"


def _seg_array(*polylines) -> np.ndarray:
    segs = [pl.segments() for pl in polylines if len(pl.vertices) >= 2]
    return np.concatenate(segs, axis=0) if segs else np.empty((0, 2, 2))


def _points_on_polyline(points: np.ndarray, segs: np.ndarray, tol: float) -> np.ndarray:
    """Mask of points lying within tol of any segment."""
    a0 = segs[:, 0, :]
    d = segs[:, 1, :] - a0
    denom = np.einsum("ij,ij->i", d, d)
    hit = np.zeros(len(points), dtype=bool)
    for lo in range(0, len(points), 4096):
        p = points[lo : lo + 4096]
        rel = p[:, None, :] - a0[None, :, :]
        t = np.clip(
            np.divide(
                np.einsum("pij,ij->pi", rel, d),
                denom[None, :],
                out=np.zeros((len(p), len(a0))),
                where=denom[None, :] > 0,
            ),
            0.0,
            1.0,
        )
        near = a0[None, :, :] + t[:, :, None] * d[None, :, :]
        dist = np.hypot(near[:, :, 0] - p[:, None, 0], near[:, :, 1] - p[:, None, 1])
        hit[lo : lo + 4096] = dist.min(axis=1) <= tol
    return hit


def homoclinic_intersects(
    params: Params, arc_budget: float = 50.0, touch_tol: float = 1e-10
) -> HomoclinicResult:
    """Sweep for a transversal crossing of W^u(p1) with W^s(p1).

    Both branches of each manifold are grown to the arc budget; contacts
    within 1e-8 of p1 are the saddle itself and do not count. A vertex of
    one manifold landing on the other without a proper crossing anywhere
    is reported as tangency.
    """
    if params.b == 0.0:
        raise NonInvertible("stable manifold needs the inverse map; b = 0")
    fd = fixed_data(params)
    if fd.p1 is None:
        raise NoFixedPoint("homoclinic sweep anchored at p1")
    un = [
        unstable_manifold(params, s, arc_budget=arc_budget)
        for s in ("p1_right", "p1_left")
    ]
    st = [
        stable_manifold(params, s, arc_budget=arc_budget)
        for s in ("p1_plus", "p1_minus")
    ]
    useg = _seg_array(*un)
    sseg = _seg_array(*st)
    if useg.size == 0 or sseg.size == 0:
        return HomoclinicResult(False, None, False)

    p1 = np.array([fd.p1.x, fd.p1.y])

    u1 = useg[:, 0, :]
    u2 = useg[:, 1, :]
    s1 = sseg[:, 0, :]
    s2 = sseg[:, 1, :]
    sd = s2 - s1
    chunk = max(1, int(4e6) // max(1, sseg.shape[0]))
    for lo in range(0, u1.shape[0], chunk):
        a1 = u1[lo : lo + chunk][:, None, :]
        a2 = u2[lo : lo + chunk][:, None, :]
        ud = a2 - a1
        r1 = a1 - s1[None, :, :]
        r2 = a2 - s1[None, :, :]
        d1 = sd[None, :, 0] * r1[:, :, 1] - sd[None, :, 1] * r1[:, :, 0]
        d2 = sd[None, :, 0] * r2[:, :, 1] - sd[None, :, 1] * r2[:, :, 0]
        q1 = s1[None, :, :] - a1
        q2 = s2[None, :, :] - a1
        d3 = ud[:, :, 0] * q1[:, :, 1] - ud[:, :, 1] * q1[:, :, 0]
        d4 = ud[:, :, 0] * q2[:, :, 1] - ud[:, :, 1] * q2[:, :, 0]
        proper = (d1 * d2 < 0) & (d3 * d4 < 0)
        if proper.any():
            for i, j in zip(*np.nonzero(proper)):
                t = d1[i, j] / (d1[i, j] - d2[i, j])
                pt = a1[i, 0, :] + t * (a2[i, 0, :] - a1[i, 0, :])
                if np.hypot(*(pt - p1)) > 1e-8:
                    witness = PlanePoint(float(pt[0]), float(pt[1]))
                    return HomoclinicResult(True, witness, False)

    # No proper crossing: flag grazing contact away from the saddle.
    uverts = np.unique(np.concatenate([useg[:, 0, :], useg[-1:, 1, :]]), axis=0)
    sverts = np.unique(np.concatenate([sseg[:, 0, :], sseg[-1:, 1, :]]), axis=0)
    uverts = uverts[np.hypot(*(uverts - p1).T) > 1e-8]
    sverts = sverts[np.hypot(*(sverts - p1).T) > 1e-8]
    tangency = bool(
        _points_on_polyline(uverts, sseg, touch_tol).any()
        or _points_on_polyline(sverts, useg, touch_tol).any()
    )
    return HomoclinicResult(False, None, tangency)


# ----------------------------------------------------------- zero entropy


@dataclass(frozen=True)
class ZeroEntropyVerdict:
    kind: str  # analytic_zero | numeric_zero | homoclinic | unknown
    case: str | None = None  # i | ii | iii for analytic_zero
    witness: PlanePoint | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("analytic_zero", "numeric_zero", "homoclinic", "unknown"):
            raise ValueError(f"unknown verdict kind {self.kind!r}")
        if self.kind == "analytic_zero" and self.case not in ("i", "ii", "iii"):
            raise ValueError("analytic_zero needs case i, ii, or iii")


def _numeric_zero_check(params: Params, arc_budget: float) -> bool:
    fd = fixed_data(params)
    if fd.n1 is None or not fd.period2_attracting:
        return False
    try:
        report = polygon_invariance(params)
    except (NotInvariant, WrongParams, NoFixedPoint):
        return False
    z = _axis_crossing_of_unstable_line(fd)
    targets = (fd.n1, fd.n2)
    for q0 in (z, lozi_apply(params, z)):
        q = q0
        hit = False
        for _ in range(10_000):
            q = lozi_apply_n(params, q, 4)
            if min(q.dist(t) for t in targets) < 1e-8:
                hit = True
                break
        if not hit:
            return False
    # Contraction of the squared distance to the sink on polygon samples.
    rng = np.random.default_rng(1815)
    poly = list(report.corners)
    xs = [c.x for c in poly]
    ys = [c.y for c in poly]
    checked = 0
    while checked < 64:
        q = PlanePoint(
            float(rng.uniform(min(xs), max(xs))), float(rng.uniform(min(ys), max(ys)))
        )
        if _signed_dist_to_convex(poly, q) <= 1e-9:
            continue
        if q.dist(fd.n1) < 1e-9 or q.dist(fd.n2) < 1e-9:
            continue
        if lyapunov_delta(params, q) >= 0.0:
            return False
        checked += 1
    return True


def classify_zero_entropy(params: Params, arc_budget: float = 50.0) -> ZeroEntropyVerdict:
    """Zero-entropy verdict: exact analytic regions first, then certified
    homoclinic crossings, then the numeric sink certificate."""
    a, b = params.a, params.b
    if abs(b) > 1.0:
        raise ValueError("classifier covers |b| <= 1 only")
    if -1.0 <= b < 0.0 and a <= b - 1.0:
        return ZeroEntropyVerdict(kind="analytic_zero", case="i")
    if 0.0 < b <= 1.0 and a < 1.0 - b:
        return ZeroEntropyVerdict(kind="analytic_zero", case="ii")
    if 0.0 < b <= 1.0 and a == 1.0 - b:
        return ZeroEntropyVerdict(kind="analytic_zero", case="iii")
    try:
        hom = homoclinic_intersects(params, arc_budget=arc_budget)
    except NoFixedPoint:
        return ZeroEntropyVerdict(kind="unknown")
    if hom.found:
        return ZeroEntropyVerdict(kind="homoclinic", witness=hom.witness)
    if hom.tangency:
        return ZeroEntropyVerdict(kind="unknown")
    try:
        if _numeric_zero_check(params, arc_budget):
            return ZeroEntropyVerdict(kind="numeric_zero")
    except (NoFixedPoint, NonInvertible):
        pass
    return ZeroEntropyVerdict(kind="unknown")


ZERO_ENTROPY_CODES = {
    "analytic_zero_i": 230,
    "analytic_zero_ii": 255,
    "analytic_zero_iii": 205,
    "numeric_zero": 180,
    "homoclinic": 0,
    "unknown": 128,
}


def _verdict_code(v: ZeroEntropyVerdict) -> int:
    key = v.kind if v.case is None else f"{v.kind}_{v.case}"
    return ZERO_ENTROPY_CODES[key]


@dataclass(frozen=True)
class ZeroEntropyScan:
    a_range: tuple[float, float]
    b_range: tuple[float, float]
    resolution: int
    codes: np.ndarray  # [i, j] = row i over b rank, column j over a rank
    arc_budget: float
    # [i, j] = crossing point for homoclinic pixels, NaN elsewhere
    witnesses: np.ndarray

    def a_of(self, j: int) -> float:
        lo, hi = self.a_range
        return lo + (j + 0.5) * (hi - lo) / self.resolution

    def b_of(self, i: int) -> float:
        lo, hi = self.b_range
        return lo + (i + 0.5) * (hi - lo) / self.resolution


def _scan_pixel(args) -> tuple[int, float, float]:
    a, b, arc_budget = args
    try:
        verdict = classify_zero_entropy(Params(a, b), arc_budget)
    except Exception:
        return ZERO_ENTROPY_CODES["unknown"], math.nan, math.nan
    if verdict.witness is None:
        return _verdict_code(verdict), math.nan, math.nan
    return _verdict_code(verdict), verdict.witness.x, verdict.witness.y


def scan_zero_entropy(
    a_range: tuple[float, float],
    b_range: tuple[float, float],
    resolution: int,
    arc_budget: float = 20.0,
) -> ZeroEntropyScan:
    """Classify a parameter grid; pixel errors score as unknown.

    Evaluates cell centers. Set LOZI_THREADS > 1 to fan pixels out over
    processes; results are deterministic either way.
    """
    if not (-1.0 <= b_range[0] <= 1.0 and -1.0 <= b_range[1] <= 1.0):
        raise ValueError("b grid must stay within |b| <= 1")
    if resolution < 1:
        raise ValueError("resolution must be positive")
    jobs = []
    for i in range(resolution):
        b = b_range[0] + (i + 0.5) * (b_range[1] - b_range[0]) / resolution
        for j in range(resolution):
            a = a_range[0] + (j + 0.5) * (a_range[1] - a_range[0]) / resolution
            jobs.append((a, b, arc_budget))
    workers = int(os.environ.get("LOZI_THREADS", "1"))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(_scan_pixel, jobs, chunksize=16))
    else:
        flat = [_scan_pixel(j) for j in jobs]
    codes = np.array([f[0] for f in flat], dtype=np.uint8)
    witnesses = np.array([f[1:] for f in flat], dtype=np.float64)
    return ZeroEntropyScan(
        a_range=(float(a_range[0]), float(a_range[1])),
        b_range=(float(b_range[0]), float(b_range[1])),
        resolution=resolution,
        codes=codes.reshape(resolution, resolution),
        arc_budget=arc_budget,
        witnesses=witnesses.reshape(resolution, resolution, 2),
    )


# ------------------------------------------------------------- period four


@dataclass(frozen=True)
class Period4Segment:
    """The line y = -x + (1-b^2)/(a(1+b^2)) of period-4 points at a = 1+b,
    valid inside the sign-pattern constraint region."""

    a: float
    b: float
    intercept: float

    def on_line(self, x: float) -> PlanePoint:
        return PlanePoint(x, -x + self.intercept)

    def satisfies(self, q: PlanePoint) -> bool:
        a, b = self.a, self.b
        first = 1.0 + a * q.x + b * q.y
        second = 1.0 - a * first + b * q.x
        return first >= 0.0 and second <= 0.0 and q.x <= 0.0

    def sample(self, n: int = 32) -> list[PlanePoint]:
        """Feasible points on the line, by a fine sweep over x <= 0."""
        xs = np.linspace(-4.0, 0.0, 4096)
        pts = [self.on_line(float(x)) for x in xs]
        ok = [p for p in pts if self.satisfies(p)]
        if not ok:
            return []
        stride = max(1, len(ok) // n)
        return ok[::stride][:n]


def period4_segment(b: float, a: float | None = None) -> Period4Segment:
    """Closed-form period-4 line at the boundary a = 1 + b (b > 0)."""
    if b <= 0.0:
        raise WrongParams("period-4 line needs b > 0")
    expected = 1.0 + b
    if a is not None and a != expected:
        raise WrongParams(f"line exists on a = 1 + b; got a={a}, expected {expected}")
    a_val = expected
    intercept = (1.0 - b * b) / (a_val * (1.0 + b * b))
    return Period4Segment(a=a_val, b=b, intercept=intercept)
