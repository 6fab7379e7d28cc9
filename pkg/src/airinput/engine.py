"""Per-frame gesture state machine.

Turns an ordered HandFrame stream into gesture events: cursor motion,
left/right/double clicks, scroll, and keyboard taps. A click is a full
close-then-open traversal of a pinch channel with hysteresis (close below
tau_down, reopen above tau_up), so a hand held statically at any distance
never fires. All transitions depend only on (state, frame, thresholds),
which makes replays bit-exact.

Mouse and keyboard are separate session modes: mouse mode emits cursor,
click, and scroll events; keyboard mode emits taps anchored at the index
tip captured when the pinch closed (fingers drift during the reopening).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

from .landmarks import FingerId, HandFrame, finger_extended, pinch_distance


class OutOfOrderFrameError(ValueError):
    """Frame timestamp is not greater than the previously processed one."""


@dataclass(frozen=True, slots=True)
class Thresholds:
    tau_down: float = 0.35       # pinch close threshold (normalized)
    tau_up: float = 0.45         # pinch open threshold (normalized)
    double_window_ms: int = 400  # max release-to-press gap for a double click
    scroll_gain: float = 40.0    # lines per unit of normalized vertical motion
    margin: float = 0.15         # active-region margin of the camera frame
    alpha: float = 0.35          # cursor smoothing coefficient in (0, 1]
    extension_ratio: float = 1.1

    def __post_init__(self):
        if not (0 < self.tau_down < self.tau_up):
            raise ValueError(f"need 0 < tau_down < tau_up, got {self.tau_down}, {self.tau_up}")
        if not (0 < self.alpha <= 1):
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")
        if not (0 <= self.margin < 0.5):
            raise ValueError(f"margin must be in [0, 0.5), got {self.margin}")


class PoseClass(Enum):
    NEUTRAL = "neutral"
    POINT = "point"
    CLICK_READY = "click_ready"
    SCROLL_POSE = "scroll_pose"


class Mode(Enum):
    MOUSE = "mouse"
    KEYBOARD = "keyboard"


class PinchState(Enum):
    OPEN = "open"
    CLOSED = "closed"


class EventKind(Enum):
    CURSOR_MOVE = "cursor_move"
    LEFT_CLICK = "left_click"
    RIGHT_CLICK = "right_click"
    DOUBLE_CLICK = "double_click"
    SCROLL = "scroll"
    KEY_TAP = "key_tap"


@dataclass(frozen=True, slots=True)
class GestureEvent:
    """One engine output. x/y are set for cursor moves and key taps,
    delta for scrolls; t is always the triggering frame's time."""

    t: int
    kind: EventKind
    x: Optional[float] = None
    y: Optional[float] = None
    delta: Optional[int] = None


@dataclass(frozen=True, slots=True)
class PinchChannel:
    pair: tuple[FingerId, FingerId]
    state: PinchState = PinchState.OPEN
    t_closed: Optional[int] = None


def _left_channel() -> PinchChannel:
    return PinchChannel(pair=(FingerId.INDEX, FingerId.MIDDLE))


def _tap_channel() -> PinchChannel:
    return PinchChannel(pair=(FingerId.THUMB, FingerId.INDEX))


@dataclass(frozen=True, slots=True)
class GestureState:
    """Value-typed session state; step() returns a fresh one each frame."""

    mode: Mode = Mode.MOUSE
    left_channel: PinchChannel = field(default_factory=_left_channel)
    tap_channel: PinchChannel = field(default_factory=_tap_channel)
    cursor: Optional[tuple[float, float]] = None
    last_left_release_t: Optional[int] = None
    prev_frame: Optional[HandFrame] = None
    # Index-tip position captured when the thumb-index pinch closed;
    # becomes the KeyTap location once the pinch reopens.
    tap_anchor: Optional[tuple[float, float]] = None


def classify_pose(frame: HandFrame, th: Thresholds) -> PoseClass:
    """Coarse posture from the index/middle/ring extension predicates.

    Precedence: three fingers -> scroll; index+middle -> click-ready;
    index alone (middle folded) -> point; otherwise neutral.
    """
    ratio = th.extension_ratio
    index = finger_extended(frame, FingerId.INDEX, ratio)
    middle = finger_extended(frame, FingerId.MIDDLE, ratio)
    ring = finger_extended(frame, FingerId.RING, ratio)
    if index and middle and ring:
        return PoseClass.SCROLL_POSE
    if index and middle:
        return PoseClass.CLICK_READY
    if index:
        return PoseClass.POINT
    return PoseClass.NEUTRAL


def step_channel(
    ch: PinchChannel, d: float, t: int, th: Thresholds
) -> tuple[PinchChannel, bool]:
    """Advance one pinch channel by one distance sample.

    Open -> Closed below tau_down, Closed -> Open above tau_up (completing
    a cycle); inside the hysteresis band nothing moves.
    """
    if ch.state is PinchState.OPEN:
        if d < th.tau_down:
            return replace(ch, state=PinchState.CLOSED, t_closed=t), False
        return ch, False
    if d > th.tau_up:
        return replace(ch, state=PinchState.OPEN), True
    return ch, False


def map_to_screen(p: tuple[float, float], th: Thresholds) -> tuple[float, float]:
    """Map a camera point to screen space: the active region
    [margin, 1-margin]^2 covers the whole screen, x mirrored (the camera
    faces the user), output clamped to [0,1]^2."""
    span = 1.0 - 2.0 * th.margin
    u = (p[0] - th.margin) / span
    v = (p[1] - th.margin) / span
    x = min(max(1.0 - u, 0.0), 1.0)
    y = min(max(v, 0.0), 1.0)
    return x, y


def smooth(
    prev: Optional[tuple[float, float]], p: tuple[float, float], alpha: float
) -> tuple[float, float]:
    """Exponential moving average; passes p through when prev is absent."""
    if prev is None:
        return p
    return (alpha * p[0] + (1.0 - alpha) * prev[0], alpha * p[1] + (1.0 - alpha) * prev[1])


def _round_half_away(value: float) -> int:
    return int(math.copysign(math.floor(abs(value) + 0.5), value))


def step(
    state: GestureState, frame: HandFrame, th: Thresholds
) -> tuple[GestureState, list[GestureEvent]]:
    """Process one frame, returning the successor state and emitted events.

    Channels step on every frame regardless of pose; whether a completed
    cycle emits anything depends on mode and the pose at completion.
    """
    if state.prev_frame is not None and frame.t <= state.prev_frame.t:
        raise OutOfOrderFrameError(
            f"frame t={frame.t} after t={state.prev_frame.t}"
        )

    t = frame.t
    pose = classify_pose(frame, th)
    index_tip = frame.landmark(FingerId.INDEX.tip)

    d_left = pinch_distance(frame, FingerId.INDEX, FingerId.MIDDLE)
    d_tap = pinch_distance(frame, FingerId.THUMB, FingerId.INDEX)
    left_ch, left_done = step_channel(state.left_channel, d_left, t, th)
    tap_was_open = state.tap_channel.state is PinchState.OPEN
    tap_ch, tap_done = step_channel(state.tap_channel, d_tap, t, th)

    tap_anchor = state.tap_anchor
    if tap_was_open and tap_ch.state is PinchState.CLOSED:
        tap_anchor = (index_tip.x, index_tip.y)

    events: list[GestureEvent] = []
    cursor = state.cursor
    last_left_release = state.last_left_release_t

    if state.mode is Mode.MOUSE:
        if pose in (PoseClass.POINT, PoseClass.CLICK_READY):
            cursor = smooth(cursor, map_to_screen((index_tip.x, index_tip.y), th), th.alpha)
            events.append(GestureEvent(t=t, kind=EventKind.CURSOR_MOVE, x=cursor[0], y=cursor[1]))
        if pose is PoseClass.CLICK_READY:
            if left_done:
                events.append(GestureEvent(t=t, kind=EventKind.LEFT_CLICK))
                press_t = state.left_channel.t_closed
                if (
                    last_left_release is not None
                    and press_t is not None
                    and press_t - last_left_release <= th.double_window_ms
                ):
                    events.append(GestureEvent(t=t, kind=EventKind.DOUBLE_CLICK))
                last_left_release = t
            if tap_done:
                events.append(GestureEvent(t=t, kind=EventKind.RIGHT_CLICK))
        if pose is PoseClass.SCROLL_POSE and state.prev_frame is not None:
            prev_tip = state.prev_frame.landmark(FingerId.INDEX.tip)
            delta = _round_half_away(th.scroll_gain * (prev_tip.y - index_tip.y))
            if delta != 0:
                events.append(GestureEvent(t=t, kind=EventKind.SCROLL, delta=delta))
    else:
        if tap_done and tap_anchor is not None:
            events.append(
                GestureEvent(t=t, kind=EventKind.KEY_TAP, x=tap_anchor[0], y=tap_anchor[1])
            )
            tap_anchor = None

    new_state = replace(
        state,
        left_channel=left_ch,
        tap_channel=tap_ch,
        cursor=cursor,
        last_left_release_t=last_left_release,
        prev_frame=frame,
        tap_anchor=tap_anchor,
    )
    return new_state, events
