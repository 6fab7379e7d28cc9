"""Hand-landmark data model and scale-invariant geometry.

Frames carry 21 landmarks in normalized image coordinates following the
standard hand topology (wrist=0, thumb tip=4, fingertips at 8/12/16/20).
All distances here are 2-D (x, y); z is carried through but never enters
a decision. Every derived quantity is normalized by the wrist-to-middle-MCP
distance so thresholds hold regardless of hand size or camera distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence, Union

LANDMARK_COUNT = 21
WRIST = 0
MIDDLE_MCP = 9

# Coordinates slightly outside [0,1] are tolerated (trackers overshoot at
# frame edges) and clamped; anything further out is rejected.
COORD_SLACK = 0.05

DEGENERATE_EPS = 1e-6

# Default ratio separating an extended finger from a curled one; see
# Thresholds.extension_ratio for the configurable knob.
DEFAULT_EXTENSION_RATIO = 1.1


class LandmarkCountError(ValueError):
    """Frame does not contain exactly 21 landmarks."""


class RangeError(ValueError):
    """Coordinate lies beyond the tolerated slack outside [0, 1]."""


class TimestampError(ValueError):
    """Frame timestamp does not increase within its session."""


class DegenerateHandError(ValueError):
    """Hand geometry collapsed; scale reference is unusable."""


class Handedness(Enum):
    LEFT = "Left"
    RIGHT = "Right"


class FingerId(Enum):
    """The five fingers, each with its tip and PIP landmark indices.

    The thumb has no PIP; its MCP (index 2) plays the proximal-joint role.
    """

    THUMB = (4, 2)
    INDEX = (8, 6)
    MIDDLE = (12, 10)
    RING = (16, 14)
    PINKY = (20, 18)

    def __init__(self, tip: int, pip: int):
        self.tip = tip
        self.pip = pip


@dataclass(frozen=True, slots=True)
class Landmark:
    x: float
    y: float
    z: float = 0.0


@dataclass(frozen=True, slots=True)
class HandFrame:
    """One timestamped observation of a single hand.

    t is session-relative milliseconds; landmarks is a tuple of exactly 21
    Landmark values in topology order.
    """

    t: int
    handedness: Handedness
    landmarks: tuple[Landmark, ...]

    def landmark(self, index: int) -> Landmark:
        return self.landmarks[index]


RawLandmark = Union[Landmark, Mapping[str, float], Sequence[float]]


def _coerce_landmark(raw: RawLandmark) -> tuple[float, float, float]:
    if isinstance(raw, Landmark):
        return raw.x, raw.y, raw.z
    if isinstance(raw, Mapping):
        return float(raw["x"]), float(raw["y"]), float(raw.get("z", 0.0))
    vals = list(raw)
    if len(vals) == 2:
        return float(vals[0]), float(vals[1]), 0.0
    if len(vals) == 3:
        return float(vals[0]), float(vals[1]), float(vals[2])
    raise RangeError(f"landmark must have 2 or 3 coordinates, got {len(vals)}")


def _validate_coord(value: float, axis: str, index: int) -> float:
    if not math.isfinite(value):
        raise RangeError(f"landmark {index}: {axis}={value!r} is not finite")
    if value < -COORD_SLACK or value > 1.0 + COORD_SLACK:
        raise RangeError(
            f"landmark {index}: {axis}={value} outside [{-COORD_SLACK}, {1.0 + COORD_SLACK}]"
        )
    return min(max(value, 0.0), 1.0)


def validate_frame(
    raw: Union[HandFrame, Mapping],
    prev_t: Optional[int] = None,
) -> HandFrame:
    """Validate a candidate frame record into a HandFrame.

    x/y within 0.05 of [0,1] are clamped into range; further out raises
    RangeError. prev_t, when given, is the previous frame's timestamp in
    the same session and the new t must exceed it.

    Raises LandmarkCountError, RangeError, TimestampError.
    """
    if isinstance(raw, HandFrame):
        t = raw.t
        handedness = raw.handedness
        raw_landmarks: Iterable[RawLandmark] = raw.landmarks
    else:
        t = raw["t"]
        hand = raw["handedness"]
        handedness = hand if isinstance(hand, Handedness) else Handedness(hand)
        raw_landmarks = raw["landmarks"]

    if not isinstance(t, int) or isinstance(t, bool) or t < 0:
        raise TimestampError(f"timestamp must be a non-negative integer, got {t!r}")
    if prev_t is not None and t <= prev_t:
        raise TimestampError(f"timestamp {t} not greater than previous {prev_t}")

    points = list(raw_landmarks)
    if len(points) != LANDMARK_COUNT:
        raise LandmarkCountError(f"expected {LANDMARK_COUNT} landmarks, got {len(points)}")

    landmarks = []
    for i, p in enumerate(points):
        x, y, z = _coerce_landmark(p)
        landmarks.append(Landmark(_validate_coord(x, "x", i), _validate_coord(y, "y", i), z))
    return HandFrame(t=t, handedness=handedness, landmarks=tuple(landmarks))


def _dist(a: Landmark, b: Landmark) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


def hand_scale(frame: HandFrame) -> float:
    """Wrist-to-middle-MCP distance, the scale reference for all thresholds."""
    d = _dist(frame.landmark(WRIST), frame.landmark(MIDDLE_MCP))
    if d < DEGENERATE_EPS:
        raise DegenerateHandError(f"wrist to middle-MCP distance {d} below {DEGENERATE_EPS}")
    return d


def pinch_distance(frame: HandFrame, a: FingerId, b: FingerId) -> float:
    """Distance between two fingertips, normalized by hand_scale."""
    if a is b:
        raise ValueError("pinch_distance requires two distinct fingers")
    raw = _dist(frame.landmark(a.tip), frame.landmark(b.tip))
    return raw / hand_scale(frame)


def finger_extended(
    frame: HandFrame,
    finger: FingerId,
    ratio: float = DEFAULT_EXTENSION_RATIO,
) -> bool:
    """True iff the tip is `ratio` times farther from the wrist than the PIP."""
    wrist = frame.landmark(WRIST)
    d_pip = _dist(wrist, frame.landmark(finger.pip))
    if d_pip < DEGENERATE_EPS:
        raise DegenerateHandError(f"wrist to {finger.name} PIP distance {d_pip} is degenerate")
    d_tip = _dist(wrist, frame.landmark(finger.tip))
    return d_tip > ratio * d_pip
