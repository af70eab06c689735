"""Polyline geometry: arc-length parameterization and drag-path smoothing.

Everything downstream (sampling, rendering, export) works on flat
polylines. Raw drag captures are noisy, so they are thinned to at most
64 control points, smoothed with a centripetal Catmull-Rom spline, and
flattened back to a polyline at a 1-unit chord tolerance.
"""

from __future__ import annotations

import math

Point = tuple[float, float]

MAX_CONTROL_POINTS = 64
FLATTEN_TOLERANCE = 1.0
_MAX_FLATTEN_DEPTH = 12


def _dist(a: Point, b: Point) -> float:
    return math.hypot(b[0] - a[0], b[1] - a[1])


def dedupe_points(points: list[Point]) -> list[Point]:
    """Drop consecutive duplicates (zero-length segments)."""
    out: list[Point] = []
    for p in points:
        if not out or _dist(out[-1], p) > 1e-12:
            out.append((float(p[0]), float(p[1])))
    return out


def cumulative_lengths(points: list[Point]) -> list[float]:
    """Arc length from the first point to each vertex; starts at 0."""
    acc = [0.0]
    for a, b in zip(points, points[1:]):
        acc.append(acc[-1] + _dist(a, b))
    return acc


def polyline_length(points: list[Point]) -> float:
    return cumulative_lengths(points)[-1] if points else 0.0


def point_at_fraction(points: list[Point], u: float) -> Point:
    """Point at arc length u*L along the polyline, u clamped to [0, 1].

    Degenerate polylines (one point, or all points coincident) return
    the first point for any u.
    """
    if not points:
        raise ValueError("empty polyline")
    if len(points) == 1:
        return points[0]
    cum = cumulative_lengths(points)
    total = cum[-1]
    if total <= 0.0:
        return points[0]
    u = min(1.0, max(0.0, u))
    if u == 0.0:
        return points[0]
    if u == 1.0:
        return points[-1]
    target = u * total
    # binary search for the segment containing the target length
    lo, hi = 0, len(cum) - 1
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if cum[mid] <= target:
            lo = mid
        else:
            hi = mid
    seg = cum[hi] - cum[lo]
    if seg <= 0.0:
        return points[hi]
    w = (target - cum[lo]) / seg
    ax, ay = points[lo]
    bx, by = points[hi]
    return (ax + (bx - ax) * w, ay + (by - ay) * w)


def resample_polyline(points: list[Point], count: int) -> list[Point]:
    """Uniform arc-length resample to ``count`` points, endpoints kept."""
    pts = dedupe_points(points)
    if len(pts) <= count:
        return pts
    if count < 2:
        return [pts[0]]
    out = [point_at_fraction(pts, i / (count - 1)) for i in range(count)]
    out[0], out[-1] = pts[0], pts[-1]
    return dedupe_points(out)


# ---------------------------------------------------------------------------
# centripetal Catmull-Rom
# ---------------------------------------------------------------------------

def _catmull_rom_point(p0: Point, p1: Point, p2: Point, p3: Point, u: float) -> Point:
    """Barry-Goldman evaluation of one centripetal segment at u in [0, 1]."""

    def knot(ti: float, a: Point, b: Point) -> float:
        return ti + _dist(a, b) ** 0.5

    t0 = 0.0
    t1 = knot(t0, p0, p1)
    t2 = knot(t1, p1, p2)
    t3 = knot(t2, p2, p3)
    t = t1 + (t2 - t1) * u

    def lerp(pa: Point, pb: Point, ta: float, tb: float) -> Point:
        if tb - ta <= 1e-12:
            return pa
        w = (t - ta) / (tb - ta)
        return (pa[0] + (pb[0] - pa[0]) * w, pa[1] + (pb[1] - pa[1]) * w)

    a1 = lerp(p0, p1, t0, t1)
    a2 = lerp(p1, p2, t1, t2)
    a3 = lerp(p2, p3, t2, t3)
    b1 = lerp(a1, a2, t0, t2)
    b2 = lerp(a2, a3, t1, t3)
    return lerp(b1, b2, t1, t2)


def _point_line_distance(p: Point, a: Point, b: Point) -> float:
    ab = (b[0] - a[0], b[1] - a[1])
    denom = math.hypot(*ab)
    if denom <= 1e-12:
        return _dist(p, a)
    return abs(ab[0] * (a[1] - p[1]) - ab[1] * (a[0] - p[0])) / denom


def _flatten_segment(p0, p1, p2, p3, u0, u1, q0, q1, tolerance, depth, out):
    um = 0.5 * (u0 + u1)
    qm = _catmull_rom_point(p0, p1, p2, p3, um)
    if depth < _MAX_FLATTEN_DEPTH and _point_line_distance(qm, q0, q1) > tolerance:
        _flatten_segment(p0, p1, p2, p3, u0, um, q0, qm, tolerance, depth + 1, out)
        _flatten_segment(p0, p1, p2, p3, um, u1, qm, q1, tolerance, depth + 1, out)
    else:
        out.append(q1)


def smooth_drag_path(
    raw_points: list[Point],
    max_control: int = MAX_CONTROL_POINTS,
    tolerance: float = FLATTEN_TOLERANCE,
) -> list[Point]:
    """Thin, smooth, and flatten a raw drag capture into a polyline.

    Fewer than three distinct points pass through untouched (a click or
    a straight drag needs no spline).
    """
    pts = resample_polyline(raw_points, max_control)
    if len(pts) < 3:
        return pts
    # duplicate endpoints so the spline interpolates them
    ctrl = [pts[0]] + pts + [pts[-1]]
    out: list[Point] = [pts[0]]
    for i in range(len(ctrl) - 3):
        p0, p1, p2, p3 = ctrl[i], ctrl[i + 1], ctrl[i + 2], ctrl[i + 3]
        _flatten_segment(p0, p1, p2, p3, 0.0, 1.0, p1, p2, tolerance, 0, out)
    return dedupe_points(out)
