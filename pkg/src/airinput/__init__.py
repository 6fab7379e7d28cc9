"""airinput: deterministic gesture-input engine.

Hand-landmark frame streams in; virtual keyboard and mouse events out.
"""

from .engine import (
    EventKind,
    GestureEvent,
    GestureState,
    Mode,
    PoseClass,
    Thresholds,
    classify_pose,
    map_to_screen,
    smooth,
    step,
)
from .keyboard import (
    Key,
    KeyboardLayout,
    TextBuffer,
    apply_key,
    build_layout,
    hit_test,
)
from .landmarks import (
    FingerId,
    Handedness,
    HandFrame,
    Landmark,
    finger_extended,
    hand_scale,
    pinch_distance,
    validate_frame,
)
from .metrics import Action, AttemptRecord, GroundTruthScript, compute_report, score
from .traces import TraceFile, TraceHeader, parse_trace, replay, write_trace

__version__ = "0.1.0"

__all__ = [
    "Action",
    "AttemptRecord",
    "EventKind",
    "FingerId",
    "GestureEvent",
    "GestureState",
    "GroundTruthScript",
    "HandFrame",
    "Handedness",
    "Key",
    "KeyboardLayout",
    "Landmark",
    "Mode",
    "PoseClass",
    "TextBuffer",
    "Thresholds",
    "TraceFile",
    "TraceHeader",
    "apply_key",
    "build_layout",
    "classify_pose",
    "compute_report",
    "finger_extended",
    "hand_scale",
    "hit_test",
    "map_to_screen",
    "parse_trace",
    "pinch_distance",
    "replay",
    "score",
    "smooth",
    "step",
    "validate_frame",
    "write_trace",
]
