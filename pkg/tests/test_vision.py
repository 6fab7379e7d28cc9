import random

import numpy as np
import pytest

from airinput.vision import (
    BackgroundModel,
    BinaryMask,
    Contour,
    DimensionMismatchError,
    GrayFrame,
    PipelineConfig,
    convex_hull,
    convexity_defects,
    count_fingers,
    extract_contours,
    fingertip_touch,
    gray_to_mask,
    mask_to_gray,
    qualifying_defects,
    read_pgm,
    run_pipeline,
    subtract,
    update_background,
    write_pgm,
)

from oracles import brute_hull, max_point_segment_distance, point_in_hull


def mask_from_rows(rows):
    """Build a BinaryMask from a list of '.#' strings."""
    bits = np.array([[c == "#" for c in row] for row in rows])
    return BinaryMask(bits.shape[1], bits.shape[0], bits)


def blob_mask(rng, size=64, discs=4):
    """Random union of filled discs, the fuzz shape for contour tests."""
    yy, xx = np.mgrid[0:size, 0:size]
    bits = np.zeros((size, size), dtype=bool)
    for _ in range(discs):
        cx, cy = rng.uniform(10, size - 10), rng.uniform(10, size - 10)
        r = rng.uniform(3, 12)
        bits |= (xx - cx) ** 2 + (yy - cy) ** 2 <= r * r
    return BinaryMask(size, size, bits)


class TestBackground:
    def test_rho_one_replaces(self):
        bg = BackgroundModel(2, 2, [0.0, 0.0, 0.0, 0.0])
        f = GrayFrame(2, 2, [10, 20, 30, 40])
        out = update_background(bg, f, 1.0)
        assert np.array_equal(out.accum, f.pixels.astype(float))

    def test_rho_zero_freezes(self):
        bg = BackgroundModel(2, 2, [1.0, 2.0, 3.0, 4.0])
        f = GrayFrame(2, 2, [9, 9, 9, 9])
        out = update_background(bg, f, 0.0)
        assert np.array_equal(out.accum, bg.accum)

    def test_geometric_convergence(self):
        c = 200.0
        bg = BackgroundModel(3, 2, np.zeros(6))
        f = GrayFrame(3, 2, np.full(6, c, dtype=np.uint8))
        for _ in range(50):
            bg = update_background(bg, f, 0.1)
        expected = c * (1.0 - 0.9 ** 50)
        assert np.allclose(bg.accum, expected, atol=1e-9)

    def test_stays_between_inputs(self):
        rng = np.random.default_rng(2)
        bg = BackgroundModel(4, 4, rng.uniform(0, 255, 16))
        f = GrayFrame(4, 4, rng.integers(0, 256, 16, dtype=np.uint8))
        out = update_background(bg, f, 0.3)
        lo = np.minimum(bg.accum, f.pixels)
        hi = np.maximum(bg.accum, f.pixels)
        assert np.all(out.accum >= lo - 1e-12)
        assert np.all(out.accum <= hi + 1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            update_background(BackgroundModel(2, 2, np.zeros(4)), GrayFrame(3, 2, np.zeros(6)), 0.5)


class TestSubtract:
    def test_identical_yields_empty(self):
        f = GrayFrame(3, 3, np.arange(9, dtype=np.uint8))
        bg = BackgroundModel.from_frame(f)
        assert not subtract(bg, f, 0).bits.any()

    def test_single_pixel_over_threshold(self):
        bg = BackgroundModel(3, 3, np.full(9, 100.0))
        pixels = np.full(9, 100, dtype=np.uint8)
        pixels[4] = 126  # theta=25: |126-100| = 26 > 25
        mask = subtract(bg, GrayFrame(3, 3, pixels), 25)
        assert mask.bits.sum() == 1
        assert mask.bits[1, 1]

    def test_threshold_is_strict(self):
        bg = BackgroundModel(1, 1, [100.0])
        mask = subtract(bg, GrayFrame(1, 1, [125]), 25)
        assert not mask.bits.any()

    def test_against_pixel_loop(self):
        rng = np.random.default_rng(7)
        accum = rng.uniform(0, 255, 64)
        pixels = rng.integers(0, 256, 64, dtype=np.uint8)
        theta = 30
        mask = subtract(BackgroundModel(8, 8, accum), GrayFrame(8, 8, pixels), theta)
        for i in range(64):
            expected = abs(float(pixels[i]) - accum[i]) > theta
            assert mask.bits[i // 8, i % 8] == expected


class TestExtractContours:
    def test_empty_mask(self):
        assert extract_contours(BinaryMask(4, 4, np.zeros((4, 4), dtype=bool))) == []

    def test_filled_3x3_block(self):
        mask = mask_from_rows(
            [
                ".....",
                ".###.",
                ".###.",
                ".###.",
                ".....",
            ]
        )
        contours = extract_contours(mask)
        assert len(contours) == 1
        # 8 border pixels, clockwise from the topmost-leftmost
        assert contours[0].points == (
            (1, 1), (2, 1), (3, 1), (3, 2), (3, 3), (2, 3), (1, 3), (1, 2),
        )

    def test_single_pixel(self):
        mask = mask_from_rows(["...", ".#.", "..."])
        assert extract_contours(mask) == [Contour(points=((1, 1),))]

    def test_two_blocks_row_major_order(self):
        mask = mask_from_rows(
            [
                "......",
                ".##...",
                ".##.#.",
                "....#.",
            ]
        )
        contours = extract_contours(mask)
        assert len(contours) == 2
        assert contours[0].points[0] == (1, 1)
        assert contours[1].points[0] == (4, 2)

    def test_holes_ignored(self):
        mask = mask_from_rows(
            [
                "#####",
                "#...#",
                "#...#",
                "#####",
            ]
        )
        contours = extract_contours(mask)
        assert len(contours) == 1
        assert (1, 1) not in contours[0].points  # interior hole border untouched

    def test_diagonal_line_is_one_component(self):
        mask = mask_from_rows(
            [
                "#....",
                ".#...",
                "..#..",
            ]
        )
        contours = extract_contours(mask)
        assert len(contours) == 1
        assert set(contours[0].points) == {(0, 0), (1, 1), (2, 2)}

    def test_contour_invariants_on_random_blobs(self):
        rng = random.Random(21)
        for _ in range(20):
            mask = blob_mask(rng)
            for contour in extract_contours(mask):
                pts = contour.points
                for a, b in zip(pts, pts[1:] + pts[:1]):
                    assert max(abs(a[0] - b[0]), abs(a[1] - b[1])) <= 1
                for x, y in pts:
                    assert mask.bits[y, x]
                    exposed = False
                    for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                        nx, ny = x + dx, y + dy
                        if not (0 <= nx < mask.width and 0 <= ny < mask.height):
                            exposed = True
                        elif not mask.bits[ny, nx]:
                            exposed = True
                    assert exposed


class TestConvexHull:
    def test_square_with_interior_point(self):
        hull = convex_hull([(0, 0), (2, 0), (2, 2), (0, 2), (1, 1)])
        assert hull == [(0, 0), (2, 0), (2, 2), (0, 2)]

    def test_collinear_points_collapse(self):
        assert convex_hull([(0, 0), (1, 1), (2, 2)]) == [(0, 0), (2, 2)]

    def test_single_and_duplicate_points(self):
        assert convex_hull([(3, 4)]) == [(3, 4)]
        assert convex_hull([(3, 4), (3, 4)]) == [(3, 4)]

    def test_starts_at_lowest_then_leftmost(self):
        hull = convex_hull([(5, 3), (1, 1), (4, 0), (0, 4)])
        assert hull[0] == (4, 0)

    def test_matches_brute_force(self):
        rng = random.Random(99)
        for _ in range(200):
            n = rng.randint(1, 32)
            pts = [(rng.randint(0, 255), rng.randint(0, 255)) for _ in range(n)]
            assert convex_hull(pts) == brute_hull(pts)

    def test_output_is_convex_and_contains_input(self):
        rng = random.Random(13)
        for _ in range(50):
            pts = [(rng.randint(0, 100), rng.randint(0, 100)) for _ in range(rng.randint(3, 40))]
            hull = convex_hull(pts)
            if len(hull) >= 3:
                for i in range(len(hull)):
                    o, a, b = hull[i], hull[(i + 1) % len(hull)], hull[(i + 2) % len(hull)]
                    cross = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
                    assert cross > 0  # strictly convex: collinear vertices excluded
            assert set(hull) <= set(pts)
            for p in pts:
                assert point_in_hull(p, hull)


# Two upright fingers on a base: one deep valley between them.
V_SHAPE = mask_from_rows(
    ["..##....##...."] * 10  # fingers: cols 2-3 and 8-9, rows 0-9
    + ["##############"] * 5  # base: rows 10-14
)

# Five fingers with convexly varying heights so each top is a hull vertex.
def open_hand_mask():
    width, height = 36, 35
    bits = np.zeros((height, width), dtype=bool)
    tops = [8, 3, 0, 3, 8]
    for k, top in enumerate(tops):
        x0 = k * 8
        bits[top:20, x0 : x0 + 4] = True
    bits[20:35, 0:36] = True
    return BinaryMask(width, height, bits)


class TestConvexityDefects:
    def test_convex_contour_has_no_defects(self):
        mask = mask_from_rows(["####", "####", "####"])
        contour = extract_contours(mask)[0]
        hull = convex_hull(contour.points)
        assert convexity_defects(contour, hull, 0.5) == []

    def test_v_shape_has_one_qualifying_valley(self):
        contour = extract_contours(V_SHAPE)[0]
        hull = convex_hull(contour.points)
        defects = convexity_defects(contour, hull, 3.0)
        quals = qualifying_defects(defects, contour, 3.0, 90.0)
        assert len(quals) == 1
        d = quals[0]
        # brute-force the same arc: every point between the hull ends
        pts = contour.points
        arc = arc_points(pts, d.start_idx, d.end_idx)
        expected = max_point_segment_distance(arc, pts[d.start_idx], pts[d.end_idx])
        assert d.depth == pytest.approx(expected, abs=1e-9)

    def test_depths_match_brute_force_on_blobs(self):
        rng = random.Random(4)
        for _ in range(30):
            mask = blob_mask(rng)
            contours = extract_contours(mask)
            if not contours:
                continue
            contour = max(contours, key=lambda c: len(c.points))
            if len(contour.points) < 3:
                continue
            hull = convex_hull(contour.points)
            for d in convexity_defects(contour, hull, 0.5):
                arc = arc_points(contour.points, d.start_idx, d.end_idx)
                expected = max_point_segment_distance(
                    arc, contour.points[d.start_idx], contour.points[d.end_idx]
                )
                assert d.depth == pytest.approx(expected, abs=1e-6)
                assert d.depth >= 0.5

    def test_far_points_lie_on_contour(self):
        contour = extract_contours(V_SHAPE)[0]
        hull = convex_hull(contour.points)
        for d in convexity_defects(contour, hull, 1.0):
            assert d.far_point in contour.points


def arc_points(pts, start, end):
    m = len(pts)
    arc = []
    k = (start + 1) % m
    while k != end:
        arc.append(pts[k])
        k = (k + 1) % m
    return arc


class TestCountFingers:
    def test_no_qualifying_defects_is_fist(self):
        mask = mask_from_rows(["#####", "#####", "#####"])
        contour = extract_contours(mask)[0]
        hull = convex_hull(contour.points)
        defects = convexity_defects(contour, hull, 2.0)
        assert count_fingers(defects, contour, 2.0) == 0

    def test_two_finger_v(self):
        contour = extract_contours(V_SHAPE)[0]
        hull = convex_hull(contour.points)
        defects = convexity_defects(contour, hull, 3.0)
        assert count_fingers(defects, contour, 3.0, 90.0) == 2

    def test_open_hand_counts_five(self):
        mask = open_hand_mask()
        contours = extract_contours(mask)
        assert len(contours) == 1
        contour = contours[0]
        hull = convex_hull(contour.points)
        defects = convexity_defects(contour, hull, 10.0)
        quals = qualifying_defects(defects, contour, 10.0, 90.0)
        assert len(quals) == 4
        assert count_fingers(defects, contour, 10.0, 90.0) == 5


class TestFingertipTouch:
    def test_coincident(self):
        assert fingertip_touch((5, 5), (5, 5), 1.0) is True

    def test_exact_threshold_is_not_touch(self):
        assert fingertip_touch((0, 0), (0, 10), 10.0) is False

    def test_three_four_five(self):
        assert fingertip_touch((0, 0), (3, 4), 6.0) is True
        assert fingertip_touch((0, 0), (3, 4), 5.0) is False

    def test_invalid_threshold(self):
        with pytest.raises(ValueError):
            fingertip_touch((0, 0), (1, 1), 0.0)


class TestPgm:
    def test_round_trip(self):
        rng = np.random.default_rng(5)
        frame = GrayFrame(7, 3, rng.integers(0, 256, 21, dtype=np.uint8))
        again = read_pgm(write_pgm(frame))
        assert again.width == 7 and again.height == 3
        assert np.array_equal(again.pixels, frame.pixels)

    def test_comments_skipped(self):
        data = b"P5\n# a comment\n2 2\n255\n" + bytes([0, 64, 128, 255])
        frame = read_pgm(data)
        assert frame.pixels[1, 1] == 255

    def test_wrong_magic(self):
        with pytest.raises(ValueError, match="P5"):
            read_pgm(b"P2\n2 2\n255\n....")

    def test_wrong_maxval(self):
        with pytest.raises(ValueError, match="maxval"):
            read_pgm(b"P5\n1 1\n65535\n\x00\x00")

    def test_mask_serializes_as_0_255(self):
        mask = mask_from_rows(["#.", ".#"])
        gray = mask_to_gray(mask)
        assert sorted(set(gray.pixels.flatten().tolist())) == [0, 255]
        assert np.array_equal(gray_to_mask(gray).bits, mask.bits)


class TestPipeline:
    def test_background_then_hand(self):
        hand = open_hand_mask()
        w, h = 48, 40
        bg_pixels = np.full((h, w), 120, dtype=np.uint8)
        hand_pixels = bg_pixels.copy()
        hand_pixels[2 : 2 + hand.height, 4 : 4 + hand.width][hand.bits] = 255
        frames = [
            ("f0", GrayFrame(w, h, bg_pixels)),
            ("f1", GrayFrame(w, h, hand_pixels)),
            ("f2", GrayFrame(w, h, hand_pixels)),
        ]
        reports = run_pipeline(frames, PipelineConfig(rho=0.05, theta=25.0, min_depth=10.0))
        assert reports[0] == {"frame": "f0", "contours": 0, "fingers": 0, "touch": False}
        assert reports[1]["contours"] == 1
        assert reports[1]["fingers"] == 5
        assert reports[2]["fingers"] == 5

    def test_deterministic(self):
        rng = np.random.default_rng(12)
        frames = [
            ("a", GrayFrame(16, 16, rng.integers(0, 256, 256, dtype=np.uint8))),
            ("b", GrayFrame(16, 16, rng.integers(0, 256, 256, dtype=np.uint8))),
        ]
        assert run_pipeline(frames) == run_pipeline(frames)
