"""Polyline geometry against a brute-force arc-length oracle."""

import bisect
import math
import random

from motioncomic.paths import (
    cumulative_lengths,
    dedupe_points,
    point_at_fraction,
    polyline_length,
    resample_polyline,
    smooth_drag_path,
)


def brute_force_point(points, u, steps=10_000):
    """Independent oracle: discretize every segment (vertices included in
    the sample set, so no chord ever cuts a corner), accumulate chord
    lengths, and walk linearly to the target cumulative length."""
    nseg = len(points) - 1
    per_seg = max(1, steps // nseg)
    dense = [points[0]]
    for (ax, ay), (bx, by) in zip(points, points[1:]):
        for k in range(1, per_seg + 1):
            w = k / per_seg
            dense.append((ax + (bx - ax) * w, ay + (by - ay) * w))
    cum = [0.0]
    for a, b in zip(dense, dense[1:]):
        cum.append(cum[-1] + math.hypot(b[0] - a[0], b[1] - a[1]))
    target = max(0.0, min(1.0, u)) * cum[-1]
    j = min(bisect.bisect_right(cum, target) - 1, len(dense) - 2)
    seg = cum[j + 1] - cum[j]
    w = 0.0 if seg <= 0 else (target - cum[j]) / seg
    a, b = dense[j], dense[j + 1]
    return (a[0] + (b[0] - a[0]) * w, a[1] + (b[1] - a[1]) * w)


def random_polyline(rng, max_points=64):
    n = rng.randint(2, max_points)
    return [(rng.uniform(0, 1600), rng.uniform(0, 900)) for _ in range(n)]


class TestArcLength:
    def test_cumulative_starts_at_zero_and_is_monotone(self):
        pts = [(0, 0), (3, 4), (3, 10)]
        cum = cumulative_lengths(pts)
        assert cum == [0.0, 5.0, 11.0]

    def test_midpoint_of_straight_line(self):
        assert point_at_fraction([(0, 0), (10, 0)], 0.5) == (5.0, 0.0)

    def test_oracle_agreement_random(self):
        rng = random.Random(42)
        worst = 0.0
        for _ in range(60):
            pts = random_polyline(rng, 16)
            for u in (0.0, 0.1, 0.37, 0.5, 0.83, 1.0, rng.random()):
                ex, ey = brute_force_point(pts, u, steps=2_000)
                gx, gy = point_at_fraction(pts, u)
                worst = max(worst, math.hypot(gx - ex, gy - ey))
        assert worst <= 1e-6

    def test_endpoints_exact(self):
        rng = random.Random(43)
        for _ in range(50):
            pts = random_polyline(rng, 8)
            assert point_at_fraction(pts, 0.0) == pts[0]
            assert point_at_fraction(pts, 1.0) == pts[-1]

    def test_degenerate_all_identical_points(self):
        pts = [(5.0, 5.0)] * 4
        assert point_at_fraction(pts, 0.7) == (5.0, 5.0)
        assert polyline_length(pts) == 0.0

    def test_clamping_outside_unit_interval(self):
        pts = [(0, 0), (10, 0)]
        assert point_at_fraction(pts, -1.0) == (0.0, 0.0)
        assert point_at_fraction(pts, 2.0) == (10.0, 0.0)


class TestResampleAndDedupe:
    def test_dedupe_drops_zero_segments(self):
        assert dedupe_points([(0, 0), (0, 0), (1, 1), (1, 1), (2, 2)]) == [(0, 0), (1, 1), (2, 2)]

    def test_resample_keeps_endpoints(self):
        pts = [(float(i), float(i % 7)) for i in range(200)]
        out = resample_polyline(pts, 64)
        assert len(out) <= 64
        assert out[0] == pts[0] and out[-1] == pts[-1]

    def test_short_input_untouched(self):
        pts = [(0.0, 0.0), (5.0, 5.0)]
        assert resample_polyline(pts, 64) == pts


class TestSmoothing:
    def test_click_passes_through(self):
        assert smooth_drag_path([(10.0, 10.0)]) == [(10.0, 10.0)]

    def test_straight_two_points_untouched(self):
        assert smooth_drag_path([(0.0, 0.0), (100.0, 0.0)]) == [(0.0, 0.0), (100.0, 0.0)]

    def test_endpoints_interpolated(self):
        rng = random.Random(44)
        raw = [(rng.uniform(0, 1600), rng.uniform(0, 900)) for _ in range(150)]
        out = smooth_drag_path(raw)
        assert len(out) >= 2
        assert math.hypot(out[0][0] - raw[0][0], out[0][1] - raw[0][1]) < 1e-9
        assert math.hypot(out[-1][0] - raw[-1][0], out[-1][1] - raw[-1][1]) < 1e-9

    def test_smoothed_curve_passes_near_control_points(self):
        # the spline interpolates its (thinned) control points; the
        # flattened polyline must come within chord tolerance of each
        raw = [(0.0, 0.0), (100.0, 80.0), (220.0, -40.0), (400.0, 60.0), (520.0, 0.0)]
        out = smooth_drag_path(raw)
        for cx, cy in raw:
            nearest = min(math.hypot(px - cx, py - cy) for px, py in out)
            assert nearest <= 1.5

    def test_no_consecutive_duplicates_in_output(self):
        rng = random.Random(45)
        raw = [(rng.uniform(0, 100), rng.uniform(0, 100)) for _ in range(40)]
        out = smooth_drag_path(raw)
        assert all(math.hypot(b[0] - a[0], b[1] - a[1]) > 1e-12 for a, b in zip(out, out[1:]))

    def test_noisy_drag_thinned_to_spline_controls(self):
        # 500 jittery samples along a line: output follows the line closely
        rng = random.Random(46)
        raw = [(i, 200.0 + rng.uniform(-1.5, 1.5)) for i in range(0, 500)]
        out = smooth_drag_path(raw)
        assert all(abs(y - 200.0) < 6.0 for _, y in out)
