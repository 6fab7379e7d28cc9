"""Command-line entry points.

Subcommands: serve (WebSocket gateway), replay (trace -> event log),
score (event log vs ground truth -> records), report (records -> table),
layout (validate a layout spec), vision (raster pipeline over PGM frames).
Exit codes: 0 success, 1 runtime/input failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import metrics, traces, vision
from .engine import Mode, Thresholds
from .keyboard import LayoutSpecError, build_layout, parse_layout_spec
from .landmarks import Handedness
from .protocol import SessionConfig
from .server import DEFAULT_PORT, PORT_ENV_VAR, ServerConfig, serve_forever
from .traces import thresholds_from_dict


def _load_config(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _session_config_from_file(data: dict) -> SessionConfig:
    layout = build_layout()
    layout_ref = data.get("layout", "default")
    if layout_ref != "default":
        layout = parse_layout_spec(Path(layout_ref).read_text(encoding="utf-8"))
    return SessionConfig(
        mode=Mode(data["mode"]) if "mode" in data else Mode.MOUSE,
        handedness=Handedness(data["handedness"]) if "handedness" in data else Handedness.RIGHT,
        thresholds=thresholds_from_dict(data.get("thresholds") or {}),
        layout=layout,
        inject=bool(data.get("inject", False)),
    )


def _cmd_serve(args) -> int:
    config = ServerConfig()
    if args.config:
        defaults = _session_config_from_file(_load_config(args.config))
        config = ServerConfig(defaults=defaults)
        config.layouts[defaults.layout.name] = defaults.layout
    try:
        asyncio.run(serve_forever(args.port, config, host=args.host))
    except KeyboardInterrupt:
        return 0
    except OSError as exc:
        print(f"error: cannot start server on port {args.port}: {exc}", file=sys.stderr)
        return 1
    return 0


def _cmd_replay(args) -> int:
    trace = traces.parse_trace(Path(args.trace).read_text(encoding="utf-8"))
    th: Optional[Thresholds] = None
    if args.config:
        data = _load_config(args.config)
        if data.get("thresholds"):
            th = thresholds_from_dict(data["thresholds"])
    events = traces.replay(trace, th)
    Path(args.out).write_text(traces.write_events(events), encoding="utf-8")
    return 0


def _cmd_score(args) -> int:
    events = traces.parse_events(Path(args.events).read_text(encoding="utf-8"))
    script = metrics.parse_script(Path(args.script).read_text(encoding="utf-8"))
    records = metrics.score(
        events,
        script,
        window_ms=args.window,
        session_id=args.session,
        machine_id=args.machine,
    )
    Path(args.out).write_text(metrics.write_records(records), encoding="utf-8")
    return 0


def _cmd_report(args) -> int:
    records = []
    for path in args.records:
        records.extend(metrics.parse_records(Path(path).read_text(encoding="utf-8")))
    try:
        report = metrics.compute_report(records)
    except metrics.EmptyLogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(metrics.render_report(report))
    if args.json:
        Path(args.json).write_text(metrics.report_to_json(report), encoding="utf-8")
    return 0


def _cmd_layout(args) -> int:
    try:
        layout = parse_layout_spec(Path(args.spec).read_text(encoding="utf-8"))
    except LayoutSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.check:
        print(f"layout {layout.name!r}: {len(layout.keys)} keys, ok")
    return 0


def _cmd_vision(args) -> int:
    frame_dir = Path(args.frames)
    paths = sorted(frame_dir.glob("*.pgm"))
    if not paths:
        print(f"error: no .pgm frames in {frame_dir}", file=sys.stderr)
        return 1
    cfg = vision.PipelineConfig(
        rho=args.rho,
        theta=args.theta,
        min_depth=args.min_depth,
        max_angle=args.max_angle,
        gap_threshold=args.gap,
    )
    frames = ((p.name, vision.read_pgm(str(p))) for p in paths)
    reports = vision.run_pipeline(frames, cfg)
    with open(args.out, "w", encoding="utf-8") as fh:
        for rep in reports:
            fh.write(json.dumps(rep, separators=(",", ":")) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="airinput", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the WebSocket gateway")
    p.add_argument("--port", type=int, default=int(os.environ.get(PORT_ENV_VAR, DEFAULT_PORT)))
    p.add_argument("--host", default="0.0.0.0")
    p.add_argument("--config", help="JSON session-defaults file")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("replay", help="replay a trace into an event log")
    p.add_argument("--trace", required=True)
    p.add_argument("--config", help="JSON config; its thresholds override the trace header")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("score", help="score an event log against a ground-truth script")
    p.add_argument("--events", required=True)
    p.add_argument("--script", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--window", type=int, default=metrics.DEFAULT_WINDOW_MS)
    p.add_argument("--session", default="s1")
    p.add_argument("--machine", default="m1")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("report", help="aggregate attempt records into the summary table")
    p.add_argument("--records", nargs="+", required=True)
    p.add_argument("--json", help="also write the report as JSON to this path")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("layout", help="validate a keyboard layout spec file")
    p.add_argument("--spec", required=True)
    p.add_argument("--check", action="store_true")
    p.set_defaults(func=_cmd_layout)

    p = sub.add_parser("vision", help="run the raster pipeline over a directory of PGM frames")
    p.add_argument("--frames", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--rho", type=float, default=0.05)
    p.add_argument("--theta", type=float, default=25.0)
    p.add_argument("--min-depth", type=float, default=vision.DEFAULT_MIN_DEPTH)
    p.add_argument("--max-angle", type=float, default=vision.DEFAULT_MAX_ANGLE)
    p.add_argument("--gap", type=float, default=25.0)
    p.set_defaults(func=_cmd_vision)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
