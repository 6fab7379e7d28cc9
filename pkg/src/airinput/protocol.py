"""Session protocol: message handling, configuration, input injection.

One session = one client connection. The first message must be a hello
carrying the session configuration; frames then flow through validation,
the gesture engine, and (in keyboard mode) hit testing, producing event /
key / highlight messages back. A malformed frame draws an error reply but
keeps the session alive; protocol-order violations and version mismatches
close it. All per-session state lives here so the transport stays dumb.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .engine import GestureEvent, GestureState, EventKind, Mode, Thresholds, step
from .keyboard import (
    ColorCycle,
    HighlightState,
    Key,
    KeyboardLayout,
    TextBuffer,
    apply_key,
    build_layout,
    hit_test,
    mark_highlight,
)
from .landmarks import Handedness, validate_frame
from .traces import event_to_obj, thresholds_from_dict

PROTOCOL_VERSION = "1"

ERR_MALFORMED = "MALFORMED"
ERR_BAD_ORDER = "BAD_ORDER"
ERR_UNSUPPORTED_VERSION = "UNSUPPORTED_VERSION"


class InputInjector:
    """Forwards recognized events to the host OS. The base class is a
    no-op stand-in; platform backends override inject()."""

    def inject(self, message: dict) -> bool:
        return True


class MockInjector(InputInjector):
    """Records every injected message in order; used in tests and CI."""

    def __init__(self):
        self.calls: list[dict] = []

    def inject(self, message: dict) -> bool:
        self.calls.append(message)
        return True


@dataclass(frozen=True)
class SessionConfig:
    mode: Mode = Mode.MOUSE
    handedness: Handedness = Handedness.RIGHT
    thresholds: Thresholds = field(default_factory=Thresholds)
    layout: KeyboardLayout = field(default_factory=build_layout)
    inject: bool = False


def _error(code: str, message: str) -> dict:
    return {"type": "error", "code": code, "message": message}


def key_to_obj(key: Key) -> dict:
    obj = {"label": key.label, "action": key.action.value, "rect": list(key.rect)}
    if key.char is not None:
        obj["char"] = key.char
    return obj


def layout_to_obj(layout: KeyboardLayout) -> dict:
    return {"name": layout.name, "keys": [key_to_obj(k) for k in layout.keys]}


_session_ids = itertools.count(1)


class Session:
    """State machine for one client connection.

    handle() consumes one decoded message and returns the outbound
    replies; check `closed` afterwards to tear the transport down.
    """

    def __init__(
        self,
        layouts: Optional[dict[str, KeyboardLayout]] = None,
        defaults: Optional[SessionConfig] = None,
        injector: Optional[InputInjector] = None,
        color_seed: int = 0,
    ):
        self.id = f"s{next(_session_ids)}"
        self._layouts = layouts or {"default": build_layout()}
        self._defaults = defaults or SessionConfig()
        self.injector = injector or MockInjector()
        self.config: Optional[SessionConfig] = None
        self.state = GestureState()
        self.text = TextBuffer()
        self.highlights = HighlightState()
        self._colors = ColorCycle(color_seed)
        self._prev_t: Optional[int] = None
        self.closed = False

    def handle(self, msg: dict) -> list[dict]:
        if self.closed:
            return []
        msg_type = msg.get("type")
        if self.config is None:
            if msg_type != "hello":
                self.closed = True
                return [_error(ERR_BAD_ORDER, "first message must be hello")]
            return self._handle_hello(msg)
        if msg_type == "hello":
            self.closed = True
            return [_error(ERR_BAD_ORDER, "session already configured")]
        if msg_type == "frame":
            return self._handle_frame(msg)
        if msg_type == "bye":
            self.closed = True
            return []
        return [_error(ERR_MALFORMED, f"unknown message type {msg_type!r}")]

    def _handle_hello(self, msg: dict) -> list[dict]:
        version = msg.get("version")
        if version != PROTOCOL_VERSION:
            self.closed = True
            return [_error(ERR_UNSUPPORTED_VERSION, f"unsupported version {version!r}")]
        raw = msg.get("config") or {}
        d = self._defaults
        try:
            layout_name = raw.get("layout", d.layout.name)
            if layout_name not in self._layouts:
                raise ValueError(f"unknown layout {layout_name!r}")
            self.config = SessionConfig(
                mode=Mode(raw["mode"]) if "mode" in raw else d.mode,
                handedness=(
                    Handedness(raw["handedness"]) if "handedness" in raw else d.handedness
                ),
                thresholds=(
                    thresholds_from_dict(raw["thresholds"])
                    if raw.get("thresholds")
                    else d.thresholds
                ),
                layout=self._layouts[layout_name],
                inject=bool(raw.get("inject", d.inject)),
            )
        except (ValueError, TypeError, KeyError) as exc:
            self.closed = True
            return [_error(ERR_MALFORMED, f"bad hello config: {exc}")]
        self.state = GestureState(mode=self.config.mode)
        return [
            {
                "type": "welcome",
                "session": self.id,
                "layout": layout_to_obj(self.config.layout),
            }
        ]

    def _handle_frame(self, msg: dict) -> list[dict]:
        assert self.config is not None
        raw = msg.get("frame")
        try:
            if not isinstance(raw, dict):
                raise ValueError("frame payload must be an object")
            frame = validate_frame(
                {
                    "t": raw["t"],
                    "handedness": raw["hand"],
                    "landmarks": raw["lm"],
                },
                prev_t=self._prev_t,
            )
        except (KeyError, ValueError, TypeError) as exc:
            return [_error(ERR_MALFORMED, f"bad frame: {exc}")]
        self._prev_t = frame.t
        if frame.handedness is not self.config.handedness:
            return []
        self.state, events = step(self.state, frame, self.config.thresholds)
        out: list[dict] = []
        for ev in events:
            out.append({"type": "event", "event": event_to_obj(ev)})
            if ev.kind is EventKind.KEY_TAP:
                out.extend(self._resolve_tap(ev))
        if self.config.inject:
            for message in out:
                if message["type"] in ("event", "key"):
                    self.injector.inject(message)
        return out

    def _resolve_tap(self, ev: GestureEvent) -> list[dict]:
        assert self.config is not None and ev.x is not None and ev.y is not None
        key = hit_test(self.config.layout, (ev.x, ev.y))
        if key is None:
            return []
        self.text = apply_key(self.text, key)
        self.highlights = mark_highlight(self.highlights, key, ev.t, self._colors)
        entry = self.highlights.entries[-1]
        return [
            {"type": "key", "label": key.label, "text": self.text.content},
            {
                "type": "highlight",
                "label": entry.label,
                "color": entry.color,
                "expiry": entry.expiry,
            },
        ]
