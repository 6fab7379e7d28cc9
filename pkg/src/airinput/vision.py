"""Classical raster pipeline: background model, contours, hull, defects.

Works on grayscale frames: a running-average background model classifies
moving pixels, 8-connected foreground components get their outer borders
traced (Moore neighborhood, visually clockwise, holes ignored), and the
convex hull plus its deepest deviations ("defects") yield a finger count
and a fingertip gap test. This pipeline is exercised offline via the CLI
and fixtures; the live gesture path works on landmarks instead.

Conventions: pixel points are (x, y) tuples with y growing downward.
Hulls are reported counter-clockwise in coordinate terms (positive cross
products), which is visually clockwise on screen, starting from the
lowest-then-leftmost vertex (minimal y, then minimal x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy import ndimage

Point = tuple[int, int]


class DimensionMismatchError(ValueError):
    """Frame and model dimensions differ."""


def _as_grid(width: int, height: int, values, dtype) -> np.ndarray:
    if width < 1 or height < 1:
        raise ValueError(f"dimensions must be >= 1, got {width}x{height}")
    arr = np.asarray(values, dtype=dtype)
    if arr.ndim == 1:
        if arr.size != width * height:
            raise ValueError(f"expected {width * height} values, got {arr.size}")
        arr = arr.reshape(height, width)
    elif arr.shape != (height, width):
        raise ValueError(f"expected shape {(height, width)}, got {arr.shape}")
    return arr


@dataclass(eq=False)
class GrayFrame:
    width: int
    height: int
    pixels: np.ndarray  # uint8, shape (height, width)

    def __init__(self, width: int, height: int, pixels):
        self.width = width
        self.height = height
        self.pixels = _as_grid(width, height, pixels, np.uint8)


@dataclass(eq=False)
class BackgroundModel:
    width: int
    height: int
    accum: np.ndarray  # float64, shape (height, width)

    def __init__(self, width: int, height: int, accum):
        self.width = width
        self.height = height
        self.accum = _as_grid(width, height, accum, np.float64)

    @classmethod
    def from_frame(cls, frame: GrayFrame) -> "BackgroundModel":
        return cls(frame.width, frame.height, frame.pixels.astype(np.float64))


@dataclass(eq=False)
class BinaryMask:
    width: int
    height: int
    bits: np.ndarray  # bool, shape (height, width)

    def __init__(self, width: int, height: int, bits):
        self.width = width
        self.height = height
        self.bits = _as_grid(width, height, bits, bool)


@dataclass(frozen=True)
class Contour:
    """Closed border-pixel sequence; consecutive points are 8-neighbors."""

    points: tuple[Point, ...]


@dataclass(frozen=True)
class Defect:
    """Deepest contour deviation from one hull edge.

    start_idx/end_idx are contour indices of the hull points bounding the
    edge; far_point is the deviating pixel; depth its distance to the edge.
    """

    start_idx: int
    end_idx: int
    far_point: Point
    depth: float


def update_background(bg: BackgroundModel, f: GrayFrame, rho: float) -> BackgroundModel:
    """Blend a frame into the running average: accum' = (1-rho)*accum + rho*f."""
    if (bg.width, bg.height) != (f.width, f.height):
        raise DimensionMismatchError(
            f"model {bg.width}x{bg.height} vs frame {f.width}x{f.height}"
        )
    if not (0.0 <= rho <= 1.0):
        raise ValueError(f"rho must be in [0, 1], got {rho}")
    accum = (1.0 - rho) * bg.accum + rho * f.pixels.astype(np.float64)
    return BackgroundModel(bg.width, bg.height, accum)


def subtract(bg: BackgroundModel, f: GrayFrame, theta: float) -> BinaryMask:
    """Foreground mask: |frame - background| > theta, per pixel."""
    if (bg.width, bg.height) != (f.width, f.height):
        raise DimensionMismatchError(
            f"model {bg.width}x{bg.height} vs frame {f.width}x{f.height}"
        )
    if theta < 0:
        raise ValueError(f"theta must be >= 0, got {theta}")
    diff = np.abs(f.pixels.astype(np.float64) - bg.accum)
    return BinaryMask(f.width, f.height, diff > theta)


# Moore neighborhood in visually clockwise order (y grows downward),
# starting at West: W, NW, N, NE, E, SE, S, SW.
_OFFS = ((-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1))
_DIR_OF = {off: i for i, off in enumerate(_OFFS)}


def _trace_border(bits: np.ndarray, start: Point) -> list[Point]:
    """Moore-neighbor border trace from a component's topmost-leftmost pixel.

    Scans each pixel's neighbors clockwise starting at the backtrack
    (background) pixel we arrived around; stops when the start pixel is
    re-entered from the initial direction (a repeated walk state also
    stops, guarding degenerate shapes).
    """
    h, w = bits.shape

    def fg(x: int, y: int) -> bool:
        return 0 <= x < w and 0 <= y < h and bits[y, x]

    contour = [start]
    cur = start
    back_dir = 0  # the West neighbor of the start pixel is background
    state0 = (start, 0)
    seen = {state0}
    while True:
        found = -1
        for i in range(8):
            d = (back_dir + i) % 8
            nx, ny = cur[0] + _OFFS[d][0], cur[1] + _OFFS[d][1]
            if fg(nx, ny):
                found = d
                break
        if found < 0:
            break  # isolated pixel
        before = (found - 1) % 8  # last background pixel examined
        bpix = (cur[0] + _OFFS[before][0], cur[1] + _OFFS[before][1])
        nxt = (cur[0] + _OFFS[found][0], cur[1] + _OFFS[found][1])
        new_back = _DIR_OF[(bpix[0] - nxt[0], bpix[1] - nxt[1])]
        state = (nxt, new_back)
        if state == state0 or state in seen:
            break
        seen.add(state)
        contour.append(nxt)
        cur, back_dir = nxt, new_back
    return contour


def extract_contours(m: BinaryMask) -> list[Contour]:
    """Outer border of every 8-connected foreground component.

    One contour per component, traced clockwise from its topmost-leftmost
    pixel; components are ordered by that pixel in row-major order; holes
    are ignored.
    """
    bits = m.bits
    if not bits.any():
        return []
    labels, _ = ndimage.label(bits, structure=np.ones((3, 3), dtype=int))
    ys, xs = np.nonzero(bits)
    starts: dict[int, Point] = {}
    order: list[int] = []
    for y, x in zip(ys.tolist(), xs.tolist()):
        lab = labels[y, x]
        if lab not in starts:
            starts[lab] = (x, y)
            order.append(lab)
    return [Contour(points=tuple(_trace_border(bits, starts[lab]))) for lab in order]


def _cross(o: Sequence[float], a: Sequence[float], b: Sequence[float]) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[Point]) -> list[Point]:
    """Monotone-chain convex hull.

    Returns hull vertices in counter-clockwise order (positive cross
    products) starting from the lowest-then-leftmost vertex; collinear
    non-vertex points are excluded and duplicates collapsed.
    """
    pts = sorted(set((p[0], p[1]) for p in points))
    if not pts:
        raise ValueError("convex_hull needs at least one point")
    if len(pts) == 1:
        return [pts[0]]

    def half(seq):
        chain: list[Point] = []
        for p in seq:
            while len(chain) >= 2 and _cross(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    start = min(range(len(hull)), key=lambda i: (hull[i][1], hull[i][0]))
    return hull[start:] + hull[:start]


def _point_segment_distance(p: Sequence[float], a: Sequence[float], b: Sequence[float]) -> float:
    ax, ay = a[0], a[1]
    dx, dy = b[0] - ax, b[1] - ay
    len2 = dx * dx + dy * dy
    if len2 == 0:
        return math.hypot(p[0] - ax, p[1] - ay)
    t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / len2
    t = min(max(t, 0.0), 1.0)
    return math.hypot(p[0] - (ax + t * dx), p[1] - (ay + t * dy))


def _hull_contour_indices(points: Sequence[Point], hull: Sequence[Point]) -> list[int]:
    # Hull and contour share rotational direction, so each vertex is found
    # by scanning forward from the previous one.
    m = len(points)
    idxs: list[int] = []
    pos = 0
    for v in hull:
        for k in range(m):
            j = (pos + k) % m
            if points[j] == v:
                idxs.append(j)
                pos = j
                break
        else:
            raise ValueError(f"hull vertex {v} not found on contour")
    return idxs


def convexity_defects(c: Contour, hull: Sequence[Point], min_depth: float) -> list[Defect]:
    """Deepest contour point between each pair of consecutive hull vertices.

    Emitted only when the deviation reaches min_depth; ordered by hull
    traversal. The hull must have been computed from this contour.
    """
    points = c.points
    m = len(points)
    if len(hull) < 2 or m < 3:
        return []
    idxs = _hull_contour_indices(points, hull)
    defects: list[Defect] = []
    h = len(hull)
    for i in range(h):
        j = (i + 1) % h
        a_idx, b_idx = idxs[i], idxs[j]
        seg_a, seg_b = hull[i], hull[j]
        far: Optional[Point] = None
        far_depth = -1.0
        k = (a_idx + 1) % m
        while k != b_idx:
            d = _point_segment_distance(points[k], seg_a, seg_b)
            if d > far_depth:
                far_depth = d
                far = points[k]
            k = (k + 1) % m
        if far is not None and far_depth >= min_depth:
            defects.append(Defect(start_idx=a_idx, end_idx=b_idx, far_point=far, depth=far_depth))
    return defects


DEFAULT_MIN_DEPTH = 10.0  # pixels, tuned for 640x480
DEFAULT_MAX_ANGLE = 90.0  # degrees


def _defect_angle(c: Contour, d: Defect) -> float:
    s = c.points[d.start_idx]
    e = c.points[d.end_idx]
    f = d.far_point
    v1 = (s[0] - f[0], s[1] - f[1])
    v2 = (e[0] - f[0], e[1] - f[1])
    n1 = math.hypot(*v1)
    n2 = math.hypot(*v2)
    if n1 == 0 or n2 == 0:
        return 180.0
    cosang = (v1[0] * v2[0] + v1[1] * v2[1]) / (n1 * n2)
    return math.degrees(math.acos(min(max(cosang, -1.0), 1.0)))


def qualifying_defects(
    defects: Sequence[Defect],
    c: Contour,
    min_depth: float = DEFAULT_MIN_DEPTH,
    max_angle: float = DEFAULT_MAX_ANGLE,
) -> list[Defect]:
    """Defects deep and sharp enough to be inter-finger valleys."""
    return [
        d
        for d in defects
        if d.depth >= min_depth and _defect_angle(c, d) <= max_angle
    ]


def count_fingers(
    defects: Sequence[Defect],
    c: Contour,
    min_depth: float = DEFAULT_MIN_DEPTH,
    max_angle: float = DEFAULT_MAX_ANGLE,
) -> int:
    """Classic valley-counting heuristic: qualifying defects + 1, capped
    at 5; zero when no valley qualifies (fist or empty)."""
    q = len(qualifying_defects(defects, c, min_depth, max_angle))
    if q == 0:
        return 0
    return min(q + 1, 5)


def fingertip_touch(a: Point, b: Point, gap_threshold: float) -> bool:
    """True iff the two tips are strictly closer than the gap threshold."""
    if gap_threshold <= 0:
        raise ValueError(f"gap_threshold must be > 0, got {gap_threshold}")
    return math.hypot(a[0] - b[0], a[1] - b[1]) < gap_threshold


# ---------------------------------------------------------------------------
# PGM (P5) serialization for frames and masks


def read_pgm(data: Union[bytes, str]) -> GrayFrame:
    """Parse a binary PGM (P5, maxval 255) from bytes or a file path."""
    if isinstance(data, str):
        with open(data, "rb") as fh:
            data = fh.read()
    fields: list[bytes] = []
    pos = 0
    while len(fields) < 4:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValueError("truncated PGM header")
        fields.append(data[start:pos])
    magic, w_s, h_s, maxval_s = fields
    if magic != b"P5":
        raise ValueError(f"not a binary PGM (P5): magic {magic!r}")
    width, height, maxval = int(w_s), int(h_s), int(maxval_s)
    if maxval != 255:
        raise ValueError(f"expected maxval 255, got {maxval}")
    pos += 1  # single whitespace byte after maxval
    raster = data[pos : pos + width * height]
    if len(raster) != width * height:
        raise ValueError("PGM raster shorter than width*height")
    return GrayFrame(width, height, np.frombuffer(raster, dtype=np.uint8).copy())


def write_pgm(frame: GrayFrame) -> bytes:
    header = f"P5\n{frame.width} {frame.height}\n255\n".encode("ascii")
    return header + frame.pixels.tobytes()


def mask_to_gray(m: BinaryMask) -> GrayFrame:
    return GrayFrame(m.width, m.height, np.where(m.bits, 255, 0).astype(np.uint8))


def gray_to_mask(frame: GrayFrame) -> BinaryMask:
    return BinaryMask(frame.width, frame.height, frame.pixels > 127)


# ---------------------------------------------------------------------------
# Offline pipeline over a frame sequence (CLI `vision` subcommand)


@dataclass(frozen=True)
class PipelineConfig:
    rho: float = 0.05
    theta: float = 25.0
    min_depth: float = DEFAULT_MIN_DEPTH
    max_angle: float = DEFAULT_MAX_ANGLE
    gap_threshold: float = 25.0


def run_pipeline(
    frames: Iterable[tuple[str, GrayFrame]], cfg: PipelineConfig = PipelineConfig()
) -> list[dict]:
    """Run subtraction + contour analysis over named frames in order.

    The background initializes from the first frame. Per frame, the
    largest contour (if any) is analyzed: finger count from qualifying
    defects, and a touch flag set when any two fingertip candidates (the
    hull points flanking qualifying valleys) come closer than the gap
    threshold.
    """
    reports = []
    bg: Optional[BackgroundModel] = None
    for name, frame in frames:
        if bg is None:
            bg = BackgroundModel.from_frame(frame)
        mask = subtract(bg, frame, cfg.theta)
        contours = extract_contours(mask)
        fingers = 0
        touch = False
        if contours:
            largest = max(contours, key=lambda c: len(c.points))
            hull = convex_hull(largest.points)
            defects = convexity_defects(largest, hull, cfg.min_depth)
            quals = qualifying_defects(defects, largest, cfg.min_depth, cfg.max_angle)
            fingers = count_fingers(defects, largest, cfg.min_depth, cfg.max_angle)
            tips: list[Point] = []
            for d in quals:
                for p in (largest.points[d.start_idx], largest.points[d.end_idx]):
                    if p not in tips:
                        tips.append(p)
            touch = any(
                fingertip_touch(tips[i], tips[j], cfg.gap_threshold)
                for i in range(len(tips))
                for j in range(i + 1, len(tips))
            )
        reports.append(
            {"frame": name, "contours": len(contours), "fingers": fingers, "touch": touch}
        )
        bg = update_background(bg, frame, cfg.rho)
    return reports
