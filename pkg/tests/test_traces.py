import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from airinput.engine import EventKind, GestureEvent, Mode, Thresholds
from airinput.landmarks import Handedness, HandFrame, Landmark
from airinput.testing import make_hand, tap_cycle_frames
from airinput.traces import (
    ParseError,
    ReplayError,
    TraceFile,
    TraceHeader,
    VersionError,
    parse_events,
    parse_trace,
    replay,
    write_events,
    write_trace,
)


def simple_trace(frames=None, mode=Mode.KEYBOARD, handedness=Handedness.RIGHT, thresholds=None):
    if frames is None:
        frames = tap_cycle_frames(0, (0.5, 0.45))
    return TraceFile(
        header=TraceHeader(
            session="test", mode=mode, handedness=handedness, thresholds=thresholds
        ),
        frames=tuple(frames),
    )


coord = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
depth = st.floats(allow_nan=False, allow_infinity=False)
landmark = st.builds(Landmark, x=coord, y=coord, z=depth)


@st.composite
def hand_frames(draw):
    deltas = draw(st.lists(st.integers(min_value=1, max_value=5000), min_size=0, max_size=8))
    frames = []
    t = draw(st.integers(min_value=0, max_value=1000))
    for delta in deltas:
        frames.append(
            HandFrame(
                t=t,
                handedness=draw(st.sampled_from(list(Handedness))),
                landmarks=tuple(draw(st.lists(landmark, min_size=21, max_size=21))),
            )
        )
        t += delta
    return tuple(frames)


@st.composite
def trace_thresholds(draw):
    tau_down = draw(st.floats(min_value=0.05, max_value=0.5, allow_nan=False))
    tau_up = tau_down + draw(st.floats(min_value=0.01, max_value=0.5, allow_nan=False))
    return Thresholds(
        tau_down=tau_down,
        tau_up=tau_up,
        double_window_ms=draw(st.integers(min_value=0, max_value=5000)),
        scroll_gain=draw(st.floats(min_value=0.0, max_value=1000.0, allow_nan=False)),
        margin=draw(st.floats(min_value=0.0, max_value=0.49, allow_nan=False)),
        alpha=draw(st.floats(min_value=0.01, max_value=1.0, allow_nan=False)),
        extension_ratio=draw(st.floats(min_value=0.5, max_value=3.0, allow_nan=False)),
    )


trace_files = st.builds(
    TraceFile,
    header=st.builds(
        TraceHeader,
        version=st.just("1"),
        session=st.text(max_size=12),
        mode=st.sampled_from(list(Mode)),
        handedness=st.sampled_from(list(Handedness)),
        thresholds=st.none() | trace_thresholds(),
    ),
    frames=hand_frames(),
)


class TestTraceRoundTrip:
    @given(trace_files)
    def test_parse_write_identity(self, trace):
        assert parse_trace(write_trace(trace)) == trace

    def test_write_is_canonical(self):
        trace = simple_trace(frames=[make_hand(5, anchor=(0.25, 0.25))])
        text = write_trace(trace)
        line1, line2, tail = text.split("\n")
        assert tail == ""
        assert " " not in line1
        head = json.loads(line1)
        assert list(head.keys()) == ["version", "session", "mode", "handedness", "thresholds"]
        frame = json.loads(line2)
        assert list(frame.keys()) == ["t", "hand", "lm"]
        assert len(frame["lm"]) == 21
        assert write_trace(trace) == text

    def test_bytes_accepted(self):
        trace = simple_trace()
        assert parse_trace(write_trace(trace).encode()) == trace


class TestParseErrors:
    def make_lines(self, n_frames=10):
        frames = [make_hand(i * 33, anchor=(0.3, 0.3)) for i in range(n_frames)]
        return write_trace(simple_trace(frames=frames)).splitlines()

    def test_missing_header(self):
        with pytest.raises(ParseError) as err:
            parse_trace("")
        assert err.value.line == 1

    def test_unsupported_version(self):
        lines = self.make_lines()
        head = json.loads(lines[0])
        head["version"] = "99"
        lines[0] = json.dumps(head)
        with pytest.raises(VersionError):
            parse_trace("\n".join(lines))

    def test_wrong_landmark_count_reports_line(self):
        lines = self.make_lines()
        frame = json.loads(lines[6])  # line 7, 1-based
        frame["lm"] = frame["lm"][:20]
        lines[6] = json.dumps(frame)
        with pytest.raises(ParseError) as err:
            parse_trace("\n".join(lines))
        assert err.value.line == 7
        assert "21" in err.value.reason

    def test_non_monotonic_timestamp_reports_line(self):
        lines = self.make_lines(11)
        frame = json.loads(lines[11])  # line 12
        frame["t"] = 0
        lines[11] = json.dumps(frame)
        with pytest.raises(ParseError) as err:
            parse_trace("\n".join(lines))
        assert err.value.line == 12

    def test_garbage_json_line(self):
        lines = self.make_lines()
        lines[3] = "{not json"
        with pytest.raises(ParseError) as err:
            parse_trace("\n".join(lines))
        assert err.value.line == 4

    def test_out_of_range_coordinate(self):
        lines = self.make_lines()
        frame = json.loads(lines[2])
        frame["lm"][0][0] = 1.2
        lines[2] = json.dumps(frame)
        with pytest.raises(ParseError) as err:
            parse_trace("\n".join(lines))
        assert err.value.line == 3


class TestReplay:
    def test_empty_trace(self):
        assert replay(simple_trace(frames=[])) == []

    def test_tap_trace_emits_tap(self):
        events = replay(simple_trace())
        assert [e.kind for e in events] == [EventKind.KEY_TAP]

    def test_deterministic_three_runs(self):
        trace = simple_trace()
        logs = {write_events(replay(trace)) for _ in range(3)}
        assert len(logs) == 1

    def test_other_hand_ignored(self):
        frames = tap_cycle_frames(0, (0.5, 0.45), handedness=Handedness.LEFT)
        trace = simple_trace(frames=frames, handedness=Handedness.RIGHT)
        assert replay(trace) == []

    def test_explicit_thresholds_beat_header(self):
        # header thresholds never let the pinch reopen; explicit defaults do
        sticky = Thresholds(tau_down=0.35, tau_up=10.0)
        trace = simple_trace(thresholds=sticky)
        assert replay(trace) == []  # header applies
        assert len(replay(trace, Thresholds())) == 1  # explicit argument wins

    def test_replay_error_carries_frame_index(self):
        # frames constructed out of order bypass parse-time checks
        f1 = make_hand(100)
        f2 = make_hand(100)
        trace = simple_trace(frames=[f1, f2])
        with pytest.raises(ReplayError) as err:
            replay(trace)
        assert err.value.frame_index == 1


class TestEventLog:
    def test_round_trip(self):
        events = [
            GestureEvent(t=1, kind=EventKind.CURSOR_MOVE, x=0.123456789, y=0.5),
            GestureEvent(t=2, kind=EventKind.LEFT_CLICK),
            GestureEvent(t=3, kind=EventKind.SCROLL, delta=-4),
            GestureEvent(t=4, kind=EventKind.KEY_TAP, x=0.1, y=0.9),
        ]
        assert parse_events(write_events(events)) == events

    def test_float_precision_preserved(self):
        ev = GestureEvent(t=1, kind=EventKind.CURSOR_MOVE, x=0.1 + 0.2, y=1e-17)
        parsed = parse_events(write_events([ev]))[0]
        assert parsed.x == ev.x
        assert parsed.y == ev.y

    def test_bad_line_reports_position(self):
        with pytest.raises(ParseError) as err:
            parse_events('{"t":1,"kind":"left_click"}\nnope\n')
        assert err.value.line == 2
