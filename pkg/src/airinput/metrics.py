"""Scoring of replayed events against ground truth, and report tables.

Each ground-truth entry greedily consumes the earliest unconsumed event
within its time window; detection means something was there, accuracy
means the consumed event's type matched. Session values are averaged
unweighted (macro) across sessions and rendered to two decimals, half-up.
Accuracy is correct/detected, not correct/attempts: a gesture the engine
missed entirely counts against detection, not accuracy.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from typing import Optional, Sequence

from .engine import EventKind, GestureEvent
from .traces import ParseError, _dumps

DEFAULT_WINDOW_MS = 500


class EmptyLogError(ValueError):
    """No attempt records to report on."""


class Action(Enum):
    LEFT_CLICK = "left_click"
    RIGHT_CLICK = "right_click"
    DOUBLE_CLICK = "double_click"
    SCROLL = "scroll"
    KEYPRESS = "keypress"
    POINT = "point"


ACTION_NAMES = {
    Action.LEFT_CLICK: "Left Click",
    Action.RIGHT_CLICK: "Right Click",
    Action.DOUBLE_CLICK: "Double Click",
    Action.SCROLL: "Scroll",
    Action.KEYPRESS: "Keypress",
    Action.POINT: "Point",
}

ACTION_FOR_KIND = {
    EventKind.LEFT_CLICK: Action.LEFT_CLICK,
    EventKind.RIGHT_CLICK: Action.RIGHT_CLICK,
    EventKind.DOUBLE_CLICK: Action.DOUBLE_CLICK,
    EventKind.SCROLL: Action.SCROLL,
    EventKind.KEY_TAP: Action.KEYPRESS,
    EventKind.CURSOR_MOVE: Action.POINT,
}


@dataclass(frozen=True)
class ScriptEntry:
    t: int
    action: Action


@dataclass(frozen=True)
class GroundTruthScript:
    entries: tuple[ScriptEntry, ...]

    def __post_init__(self):
        for prev, cur in zip(self.entries, self.entries[1:]):
            if cur.t < prev.t:
                raise ValueError("script timestamps must be non-decreasing")


@dataclass(frozen=True)
class AttemptRecord:
    action: Action
    detected: bool
    correct: bool
    session_id: str = ""
    machine_id: str = ""

    def __post_init__(self):
        if self.correct and not self.detected:
            raise ValueError("correct implies detected")


def score(
    events: Sequence[GestureEvent],
    script: GroundTruthScript,
    window_ms: int = DEFAULT_WINDOW_MS,
    session_id: str = "",
    machine_id: str = "",
) -> list[AttemptRecord]:
    """Match script entries to events, greedy earliest-first.

    An entry is detected when any not-yet-consumed event lies within
    +/- window_ms of its expected time; it consumes the earliest such
    event, and is correct when that event's type matches the expectation.
    """
    consumed = [False] * len(events)
    records = []
    lo = 0
    for entry in script.entries:
        while lo < len(events) and events[lo].t < entry.t - window_ms:
            lo += 1
        matched: Optional[int] = None
        for i in range(lo, len(events)):
            if events[i].t > entry.t + window_ms:
                break
            if not consumed[i]:
                matched = i
                break
        if matched is None:
            records.append(
                AttemptRecord(entry.action, False, False, session_id, machine_id)
            )
        else:
            consumed[matched] = True
            correct = ACTION_FOR_KIND[events[matched].kind] is entry.action
            records.append(
                AttemptRecord(entry.action, True, correct, session_id, machine_id)
            )
    return records


@dataclass(frozen=True)
class ReportRow:
    action: Action
    detection_rate: float  # percent
    accuracy: Optional[float]  # percent; None when no session detected anything


@dataclass(frozen=True)
class Report:
    rows: tuple[ReportRow, ...]


def compute_report(records: Sequence[AttemptRecord]) -> Report:
    """Per-action detection rate and accuracy, macro-averaged over sessions.

    A session is one (machine, session) pair. Sessions with zero
    detections of an action contribute nothing to that action's accuracy
    average; an action nobody detected reports accuracy as absent.
    """
    if not records:
        raise EmptyLogError("no attempt records")
    by_action: dict[Action, dict[tuple[str, str], list[AttemptRecord]]] = {}
    for rec in records:
        sessions = by_action.setdefault(rec.action, {})
        sessions.setdefault((rec.machine_id, rec.session_id), []).append(rec)

    rows = []
    for action in Action:
        if action not in by_action:
            continue
        rates = []
        accuracies = []
        for recs in by_action[action].values():
            detected = sum(1 for r in recs if r.detected)
            rates.append(detected / len(recs))
            if detected:
                accuracies.append(sum(1 for r in recs if r.correct) / detected)
        detection_pct = 100.0 * sum(rates) / len(rates)
        accuracy_pct = 100.0 * sum(accuracies) / len(accuracies) if accuracies else None
        rows.append(ReportRow(action, detection_pct, accuracy_pct))
    return Report(rows=tuple(rows))


def format_pct(value: float) -> str:
    """Two decimals, rounding halves up (not banker's rounding)."""
    return str(Decimal(repr(value)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def render_report(report: Report) -> str:
    header = f"{'Action':<14}{'Average Detection Rate':>24}{'Average Accuracy':>20}"
    lines = [header]
    for row in report.rows:
        det = format_pct(row.detection_rate) + "%"
        acc = (format_pct(row.accuracy) + "%") if row.accuracy is not None else "n/a"
        lines.append(f"{ACTION_NAMES[row.action]:<14}{det:>24}{acc:>20}")
    return "\n".join(lines) + "\n"


def report_to_json(report: Report) -> str:
    rows = []
    for row in report.rows:
        rows.append(
            {
                "action": row.action.value,
                "detection_rate_pct": row.detection_rate,
                "accuracy_pct": row.accuracy,
                "detection_rate": format_pct(row.detection_rate),
                "accuracy": format_pct(row.accuracy) if row.accuracy is not None else None,
            }
        )
    return json.dumps({"rows": rows}, indent=2) + "\n"


# ---------------------------------------------------------------------------
# File formats: records and scripts are line-delimited JSON.


def write_records(records: Sequence[AttemptRecord]) -> str:
    return "".join(
        _dumps(
            {
                "action": r.action.value,
                "detected": r.detected,
                "correct": r.correct,
                "session": r.session_id,
                "machine": r.machine_id,
            }
        )
        + "\n"
        for r in records
    )


def parse_records(text: str) -> list[AttemptRecord]:
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            records.append(
                AttemptRecord(
                    action=Action(obj["action"]),
                    detected=bool(obj["detected"]),
                    correct=bool(obj["correct"]),
                    session_id=obj.get("session", ""),
                    machine_id=obj.get("machine", ""),
                )
            )
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise ParseError(lineno, f"bad record: {exc}") from None
    return records


def write_script(script: GroundTruthScript) -> str:
    return "".join(
        _dumps({"t": e.t, "action": e.action.value}) + "\n" for e in script.entries
    )


def parse_script(text: str) -> GroundTruthScript:
    entries = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            entries.append(ScriptEntry(t=int(obj["t"]), action=Action(obj["action"])))
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise ParseError(lineno, f"bad script entry: {exc}") from None
    return GroundTruthScript(entries=tuple(entries))
