"""On-screen keyboard geometry, hit testing, text buffer, highlights.

The default layout is a 4-row QWERTY block in the lower screen band.
Key taps resolve by rectangle containment; points on a shared boundary go
to the key with the nearest center. Highlight colors cycle a fixed 8-color
palette from a seeded position so replays reproduce identical colors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union


class LayoutSpecError(ValueError):
    """Layout violates geometry or uniqueness constraints."""


class KeyAction(Enum):
    CHAR = "char"
    BACKSPACE = "backspace"
    SPACE = "space"
    ENTER = "enter"


@dataclass(frozen=True, slots=True)
class Key:
    label: str
    action: KeyAction
    rect: tuple[float, float, float, float]  # (x, y, w, h) in normalized screen space
    char: Optional[str] = None  # payload for CHAR actions

    @property
    def center(self) -> tuple[float, float]:
        x, y, w, h = self.rect
        return (x + w / 2.0, y + h / 2.0)

    def contains(self, p: tuple[float, float]) -> bool:
        x, y, w, h = self.rect
        return x <= p[0] <= x + w and y <= p[1] <= y + h


@dataclass(frozen=True, slots=True)
class KeyboardLayout:
    name: str
    keys: tuple[Key, ...]


# Default geometry: uniform 0.09 x 0.09 keys, 0.005 gaps, rows centered
# horizontally and stacked from the top of the y in [0.55, 0.95] band.
KEY_SIZE = 0.09
KEY_GAP = 0.005
BAND_TOP = 0.55
_ROW_PITCH = KEY_SIZE + KEY_GAP

_DEFAULT_ROWS: list[list[tuple[str, KeyAction, Optional[str]]]] = [
    [(c, KeyAction.CHAR, c) for c in "QWERTYUIOP"],
    [(c, KeyAction.CHAR, c) for c in "ASDFGHJKL"],
    [(c, KeyAction.CHAR, c) for c in "ZXCVBNM"],
    [("Space", KeyAction.SPACE, None), ("Backspace", KeyAction.BACKSPACE, None)],
]


def default_row_origin(row: int, keys_in_row: int) -> tuple[float, float]:
    """Top-left corner of the first key of a default-layout row."""
    row_width = keys_in_row * KEY_SIZE + (keys_in_row - 1) * KEY_GAP
    return ((1.0 - row_width) / 2.0, BAND_TOP + row * _ROW_PITCH)


def _rects_overlap(a: tuple, b: tuple) -> bool:
    # Interior intersection beyond float noise; shared edges are allowed.
    eps = 1e-9
    ax, ay, aw, ah = a
    bx, by, bw, bh = b
    dx = min(ax + aw, bx + bw) - max(ax, bx)
    dy = min(ay + ah, by + bh) - max(ay, by)
    return dx > eps and dy > eps


def _check_layout(name: str, keys: Sequence[Key]) -> KeyboardLayout:
    labels = set()
    for k in keys:
        x, y, w, h = k.rect
        if w <= 0 or h <= 0 or x < 0 or y < 0 or x + w > 1 + 1e-12 or y + h > 1 + 1e-12:
            raise LayoutSpecError(f"key {k.label!r} rect {k.rect} out of range")
        if k.label in labels:
            raise LayoutSpecError(f"duplicate key label {k.label!r}")
        labels.add(k.label)
    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            if _rects_overlap(keys[i].rect, keys[j].rect):
                raise LayoutSpecError(
                    f"keys {keys[i].label!r} and {keys[j].label!r} overlap"
                )
    return KeyboardLayout(name=name, keys=tuple(keys))


def build_layout(
    spec: Union[str, Sequence[Key]] = "default", name: str = "custom"
) -> KeyboardLayout:
    """Build and validate a layout; spec is "default" or a sequence of Keys."""
    if spec == "default":
        keys = []
        for row, entries in enumerate(_DEFAULT_ROWS):
            x0, y0 = default_row_origin(row, len(entries))
            for col, (label, action, char) in enumerate(entries):
                x = x0 + col * (KEY_SIZE + KEY_GAP)
                keys.append(Key(label, action, (x, y0, KEY_SIZE, KEY_SIZE), char))
        return _check_layout("default", keys)
    if isinstance(spec, str):
        raise LayoutSpecError(f"unknown layout name {spec!r}")
    return _check_layout(name, list(spec))


def parse_layout_spec(text: str, name: str = "custom") -> KeyboardLayout:
    """Parse a plain-text layout: one `label action x y w h` entry per line.

    action is one of char=<c>, space, backspace, enter; blank lines and
    #-comments are skipped; an optional `name <layout name>` line names it.
    """
    keys = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "name" and len(parts) >= 2:
            name = " ".join(parts[1:])
            continue
        if len(parts) != 6:
            raise LayoutSpecError(f"line {lineno}: expected 'label action x y w h'")
        label, action_token = parts[0], parts[1]
        try:
            rect = tuple(float(v) for v in parts[2:6])
        except ValueError as exc:
            raise LayoutSpecError(f"line {lineno}: bad rect: {exc}") from None
        char = None
        if action_token.startswith("char="):
            action = KeyAction.CHAR
            char = action_token[5:]
            if len(char) != 1:
                raise LayoutSpecError(f"line {lineno}: char= needs a single character")
        else:
            try:
                action = KeyAction(action_token)
            except ValueError:
                raise LayoutSpecError(
                    f"line {lineno}: unknown action {action_token!r}"
                ) from None
            if action is KeyAction.CHAR:
                raise LayoutSpecError(f"line {lineno}: char keys use char=<c>")
        keys.append(Key(label, action, rect, char))
    return build_layout(keys, name=name)


def hit_test(layout: KeyboardLayout, p: tuple[float, float]) -> Optional[Key]:
    """Resolve a point to the key containing it.

    On a shared boundary the nearest center wins, ties going to the
    earliest key in layout order; None when no rect contains p.
    """
    hits = [k for k in layout.keys if k.contains(p)]
    if not hits:
        return None
    if len(hits) == 1:
        return hits[0]
    best = None
    best_d = math.inf
    for k in hits:
        cx, cy = k.center
        d = (cx - p[0]) ** 2 + (cy - p[1]) ** 2
        if d < best_d:
            best, best_d = k, d
    return best


@dataclass(frozen=True, slots=True)
class TextBuffer:
    content: str = ""


def apply_key(buf: TextBuffer, key: Key) -> TextBuffer:
    if key.action is KeyAction.CHAR:
        return TextBuffer(buf.content + (key.char or key.label))
    if key.action is KeyAction.SPACE:
        return TextBuffer(buf.content + " ")
    if key.action is KeyAction.ENTER:
        return TextBuffer(buf.content + "\n")
    # Backspace: drop the last character, no-op when already empty.
    return TextBuffer(buf.content[:-1])


PALETTE = (
    "#e6194b",
    "#3cb44b",
    "#ffe119",
    "#4363d8",
    "#f58231",
    "#911eb4",
    "#46f0f0",
    "#f032e6",
)

HIGHLIGHT_LIFETIME_MS = 250


class ColorCycle:
    """Deterministic color-index source: starts at seed mod 8, wraps."""

    def __init__(self, seed: int = 0):
        self._pos = seed % len(PALETTE)

    def next_index(self) -> int:
        idx = self._pos
        self._pos = (self._pos + 1) % len(PALETTE)
        return idx


@dataclass(frozen=True, slots=True)
class HighlightEntry:
    label: str
    color: int
    expiry: int  # ms


@dataclass(frozen=True, slots=True)
class HighlightState:
    entries: tuple[HighlightEntry, ...] = ()


def prune_highlights(hs: HighlightState, t_now: int) -> HighlightState:
    live = tuple(e for e in hs.entries if e.expiry > t_now)
    return hs if live == hs.entries else HighlightState(entries=live)


def mark_highlight(
    hs: HighlightState, key: Key, t_now: int, colors: ColorCycle
) -> HighlightState:
    """Add a timed highlight for key and drop entries already expired."""
    pruned = prune_highlights(hs, t_now)
    entry = HighlightEntry(
        label=key.label, color=colors.next_index(), expiry=t_now + HIGHLIGHT_LIFETIME_MS
    )
    return HighlightState(entries=pruned.entries + (entry,))
