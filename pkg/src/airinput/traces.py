"""Trace file and event log serialization, plus deterministic replay.

A trace is line-delimited JSON: a header line (version, session, mode,
handedness, optional threshold overrides) followed by one frame per line.
Writing is canonical (fixed key order, compact separators), so
parse(write(x)) == x and repeated replays serialize byte-identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Union

from .engine import (
    EventKind,
    GestureEvent,
    GestureState,
    Mode,
    Thresholds,
    step,
)
from .landmarks import HandFrame, Handedness, validate_frame

TRACE_VERSION = "1"


class ParseError(ValueError):
    """Malformed trace/log content; carries a 1-based line number."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class VersionError(ValueError):
    """Unrecognized trace format version."""


class ReplayError(RuntimeError):
    """A frame failed during replay; carries the 0-based frame index."""

    def __init__(self, frame_index: int, reason: str):
        super().__init__(f"frame {frame_index}: {reason}")
        self.frame_index = frame_index


@dataclass(frozen=True)
class TraceHeader:
    version: str = TRACE_VERSION
    session: str = ""
    mode: Mode = Mode.MOUSE
    handedness: Handedness = Handedness.RIGHT
    thresholds: Optional[Thresholds] = None


@dataclass(frozen=True)
class TraceFile:
    header: TraceHeader
    frames: tuple[HandFrame, ...]


def thresholds_to_dict(th: Thresholds) -> dict:
    return {
        "tau_down": th.tau_down,
        "tau_up": th.tau_up,
        "double_window_ms": th.double_window_ms,
        "scroll_gain": th.scroll_gain,
        "margin": th.margin,
        "alpha": th.alpha,
        "extension_ratio": th.extension_ratio,
    }


def thresholds_from_dict(data: dict) -> Thresholds:
    """Build Thresholds from a possibly partial mapping (defaults fill in)."""
    defaults = Thresholds()
    kwargs = {}
    for name in thresholds_to_dict(defaults):
        kwargs[name] = data.get(name, getattr(defaults, name))
    return Thresholds(**kwargs)


def _frame_to_obj(frame: HandFrame) -> dict:
    return {
        "t": frame.t,
        "hand": frame.handedness.value,
        "lm": [[lm.x, lm.y, lm.z] for lm in frame.landmarks],
    }


def _frame_from_obj(obj: dict, prev_t: Optional[int]) -> HandFrame:
    return validate_frame(
        {"t": obj["t"], "handedness": obj["hand"], "landmarks": obj["lm"]},
        prev_t=prev_t,
    )


def _dumps(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"))


def write_trace(trace: TraceFile) -> str:
    head = trace.header
    header_obj = {
        "version": head.version,
        "session": head.session,
        "mode": head.mode.value,
        "handedness": head.handedness.value,
        "thresholds": thresholds_to_dict(head.thresholds) if head.thresholds else None,
    }
    lines = [_dumps(header_obj)]
    lines.extend(_dumps(_frame_to_obj(f)) for f in trace.frames)
    return "\n".join(lines) + "\n"


def parse_trace(text: Union[str, bytes]) -> TraceFile:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise ParseError(1, "missing trace header")
    try:
        head_obj = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ParseError(1, f"bad header JSON: {exc.msg}") from None
    version = head_obj.get("version")
    if version != TRACE_VERSION:
        raise VersionError(f"unsupported trace version {version!r}")
    try:
        th_obj = head_obj.get("thresholds")
        header = TraceHeader(
            version=version,
            session=head_obj.get("session", ""),
            mode=Mode(head_obj.get("mode", "mouse")),
            handedness=Handedness(head_obj.get("handedness", "Right")),
            thresholds=thresholds_from_dict(th_obj) if th_obj else None,
        )
    except (ValueError, TypeError) as exc:
        raise ParseError(1, f"bad header: {exc}") from None

    frames = []
    prev_t: Optional[int] = None
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(lineno, f"bad frame JSON: {exc.msg}") from None
        try:
            frame = _frame_from_obj(obj, prev_t)
        except (KeyError, ValueError, TypeError) as exc:
            raise ParseError(lineno, str(exc)) from None
        frames.append(frame)
        prev_t = frame.t
    return TraceFile(header=header, frames=tuple(frames))


def replay(trace: TraceFile, th: Optional[Thresholds] = None) -> list[GestureEvent]:
    """Fold the engine over a trace's frames from the initial state.

    Threshold resolution: explicit argument, else the trace override, else
    defaults. Frames not matching the session handedness are skipped.
    """
    thresholds = th or trace.header.thresholds or Thresholds()
    state = GestureState(mode=trace.header.mode)
    events: list[GestureEvent] = []
    for i, frame in enumerate(trace.frames):
        if frame.handedness is not trace.header.handedness:
            continue
        try:
            state, emitted = step(state, frame, thresholds)
        except ValueError as exc:
            raise ReplayError(i, str(exc)) from exc
        events.extend(emitted)
    return events


# ---------------------------------------------------------------------------
# Event logs: one event per line, canonical field order (t, kind, payload).


def event_to_obj(ev: GestureEvent) -> dict:
    obj: dict = {"t": ev.t, "kind": ev.kind.value}
    if ev.x is not None:
        obj["x"] = ev.x
        obj["y"] = ev.y
    if ev.delta is not None:
        obj["delta"] = ev.delta
    return obj


def event_from_obj(obj: dict) -> GestureEvent:
    return GestureEvent(
        t=int(obj["t"]),
        kind=EventKind(obj["kind"]),
        x=obj.get("x"),
        y=obj.get("y"),
        delta=obj.get("delta"),
    )


def write_events(events: list[GestureEvent]) -> str:
    return "".join(_dumps(event_to_obj(ev)) + "\n" for ev in events)


def parse_events(text: str) -> list[GestureEvent]:
    events = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            events.append(event_from_obj(json.loads(line)))
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise ParseError(lineno, f"bad event: {exc}") from None
    return events
