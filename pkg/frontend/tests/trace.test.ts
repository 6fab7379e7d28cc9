import { describe, expect, it } from "vitest";

import { TraceRecorder } from "../src/trace.js";
import { toWireFrame, pickHand } from "../src/landmarks.js";

function fakeLandmarks(scale = 1) {
  return Array.from({ length: 21 }, (_, i) => ({
    x: (0.1 + i * 0.01) * scale,
    y: 0.4,
    z: -0.02,
  }));
}

describe("TraceRecorder", () => {
  it("writes a replayable header plus one frame per line", () => {
    const rec = new TraceRecorder("web-1", "keyboard", "Right");
    rec.record(toWireFrame(fakeLandmarks(), "Right", 0, false));
    rec.record(toWireFrame(fakeLandmarks(), "Right", 33, false));
    const lines = rec.toTraceText().trimEnd().split("\n");
    expect(lines).toHaveLength(3);
    const header = JSON.parse(lines[0]);
    expect(header).toEqual({
      version: "1",
      session: "web-1",
      mode: "keyboard",
      handedness: "Right",
      thresholds: null,
    });
    const frame = JSON.parse(lines[1]);
    expect(Object.keys(frame)).toEqual(["t", "hand", "lm"]);
    expect(frame.lm).toHaveLength(21);
  });
});

describe("frame conversion", () => {
  it("mirrors x in keyboard mode only", () => {
    const raw = toWireFrame(fakeLandmarks(), "Right", 0, false);
    const mirrored = toWireFrame(fakeLandmarks(), "Right", 0, true);
    expect(mirrored.lm[0][0]).toBeCloseTo(1 - raw.lm[0][0], 12);
    expect(mirrored.lm[0][1]).toBe(raw.lm[0][1]);
  });

  it("clamps stray coordinates into [0,1]", () => {
    const pts = fakeLandmarks();
    pts[4] = { x: 1.2, y: -0.1, z: 0 };
    const frame = toWireFrame(pts, "Right", 5, false);
    expect(frame.lm[4][0]).toBe(1);
    expect(frame.lm[4][1]).toBe(0);
  });

  it("picks only the wanted hand", () => {
    const results = {
      multiHandLandmarks: [fakeLandmarks(), fakeLandmarks(0.5)],
      multiHandedness: [{ label: "Left" }, { label: "Right" }],
    };
    const picked = pickHand(results, "Right");
    expect(picked?.label).toBe("Right");
    expect(picked?.landmarks[1].x).toBeCloseTo(0.055, 12);
    expect(pickHand({ multiHandLandmarks: [] }, "Right")).toBeNull();
  });
});
