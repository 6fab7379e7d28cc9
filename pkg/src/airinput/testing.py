"""Synthetic-hand builders for tests and fixture generation.

The template hand hangs below its index tip (y grows downward in image
coordinates) and is compact enough that any anchor with x in [0.12, 0.89]
and y in [0.01, 0.73] keeps all 21 landmarks inside [0,1]. Extension
ratios and pinch distances were chosen to sit far from the engine's
default thresholds, so fixtures built here are robust to small threshold
tweaks.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Optional

from .landmarks import FingerId, HandFrame, Handedness, Landmark

# Offsets (dx, dy) from the index tip; index 8 is the anchor itself.
BASE_OFFSETS: dict[int, tuple[float, float]] = {
    0: (0.02, 0.26),     # wrist
    1: (-0.03, 0.21),    # thumb cmc
    2: (-0.06, 0.17),    # thumb mcp
    3: (-0.075, 0.13),   # thumb ip
    4: (-0.09, 0.09),    # thumb tip
    5: (-0.01, 0.14),    # index mcp
    6: (0.0, 0.07),      # index pip
    7: (0.0, 0.035),     # index dip
    8: (0.0, 0.0),       # index tip
    9: (0.02, 0.13),     # middle mcp (hand scale = 0.13)
    10: (0.03, 0.065),   # middle pip
    11: (0.045, 0.03),   # middle dip
    12: (0.065, -0.005),  # middle tip
    13: (0.055, 0.135),  # ring mcp
    14: (0.065, 0.075),  # ring pip
    15: (0.07, 0.04),    # ring dip
    16: (0.075, 0.005),  # ring tip
    17: (0.085, 0.145),  # pinky mcp
    18: (0.095, 0.09),   # pinky pip
    19: (0.1, 0.06),     # pinky dip
    20: (0.105, 0.03),   # pinky tip
}

# Curled tip positions: tip pulled back toward the palm so the
# wrist-tip / wrist-PIP ratio falls well under the extension threshold.
FOLDED_TIP_OFFSETS: dict[int, tuple[float, float]] = {
    4: (-0.02, 0.14),
    8: (0.005, 0.12),
    12: (0.045, 0.1),
    16: (0.075, 0.11),
    20: (0.105, 0.12),
}

HAND_SCALE = 0.13  # wrist to middle MCP in the template

ALL_FINGERS = (FingerId.THUMB, FingerId.INDEX, FingerId.MIDDLE, FingerId.RING, FingerId.PINKY)


def make_hand(
    t: int,
    anchor: tuple[float, float] = (0.5, 0.45),
    extended: Iterable[FingerId] = (FingerId.INDEX,),
    handedness: Handedness = Handedness.RIGHT,
    tip_overrides: Optional[Mapping[FingerId, tuple[float, float]]] = None,
) -> HandFrame:
    """Build a valid 21-landmark frame.

    anchor places the index tip in absolute normalized coordinates;
    fingers listed in `extended` point away from the wrist, the rest are
    curled. tip_overrides pins individual fingertips to absolute
    positions (for pinch choreography) after extension is applied.
    """
    extended_set = set(extended)
    points: list[tuple[float, float]] = []
    for idx in range(21):
        dx, dy = BASE_OFFSETS[idx]
        finger = next((f for f in ALL_FINGERS if f.tip == idx), None)
        if finger is not None and finger not in extended_set:
            dx, dy = FOLDED_TIP_OFFSETS[idx]
        points.append((anchor[0] + dx, anchor[1] + dy))
    if tip_overrides:
        for finger, pos in tip_overrides.items():
            points[finger.tip] = pos
    landmarks = []
    for x, y in points:
        if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
            raise ValueError(f"landmark ({x}, {y}) escaped [0,1]; move the anchor")
        landmarks.append(Landmark(x, y, 0.0))
    return HandFrame(t=t, handedness=handedness, landmarks=tuple(landmarks))


def tap_cycle_frames(
    t0: int,
    target: tuple[float, float],
    dt: int = 33,
    handedness: Handedness = Handedness.RIGHT,
) -> list[HandFrame]:
    """Open-closed-open thumb-index pinch with the index tip held on target.

    Replaying these frames in keyboard mode yields exactly one tap at
    `target`, timestamped at the third frame.
    """
    open_hand = make_hand(t0, anchor=target, handedness=handedness)
    closed = make_hand(
        t0 + dt,
        anchor=target,
        handedness=handedness,
        tip_overrides={FingerId.THUMB: target},
    )
    reopened = make_hand(t0 + 2 * dt, anchor=target, handedness=handedness)
    return [open_hand, closed, reopened]
