/** Browser entry point: wires camera, gateway connection, and canvas.
 *
 * URL query parameters: host (default location.hostname), port (default
 * 8765), mode (mouse|keyboard, default keyboard), hand (Left|Right,
 * default Right).
 */

import { GatewayClient } from "./client.js";
import { LandmarkSource } from "./landmarks.js";
import { SessionClock } from "./clock.js";
import {
  applyServerEvent,
  emptyModel,
  pruneModel,
  withSkeleton,
  type RenderModel,
} from "./model.js";
import type { HandednessLabel, Mode, SessionConfig, WireFrame } from "./protocol.js";
import { drawFrame } from "./render.js";
import { TraceRecorder, downloadTrace } from "./trace.js";

function param(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function bootstrap(): void {
  const host = param("host", window.location.hostname || "127.0.0.1");
  const port = param("port", "8765");
  let mode = (param("mode", "keyboard") as Mode) === "mouse" ? "mouse" : ("keyboard" as Mode);
  const hand = (param("hand", "Right") as HandednessLabel) === "Left" ? "Left" : "Right";

  const video = el<HTMLVideoElement>("camera");
  const canvas = el<HTMLCanvasElement>("overlay");
  const ctx = canvas.getContext("2d")!;
  const textArea = el<HTMLDivElement>("typed-text");
  const status = el<HTMLSpanElement>("status");
  const modeButton = el<HTMLButtonElement>("mode-toggle");
  const downloadButton = el<HTMLButtonElement>("download-trace");
  const tauDown = el<HTMLInputElement>("tau-down");
  const tauUp = el<HTMLInputElement>("tau-up");
  const alphaInput = el<HTMLInputElement>("alpha");

  let model: RenderModel = emptyModel();
  let recorder = new TraceRecorder(`web-${Date.now()}`, mode, hand);
  const uiClock = new SessionClock(performance.now());

  const sessionConfig = (): SessionConfig => ({
    mode,
    handedness: hand,
    thresholds: {
      tau_down: Number(tauDown.value),
      tau_up: Number(tauUp.value),
      alpha: Number(alphaInput.value),
    },
  });

  const client = new GatewayClient({
    url: `ws://${host}:${port}/`,
    config: sessionConfig(),
    makeSocket: (url) => new WebSocket(url) as never,
    onMessage: (msg) => {
      model = applyServerEvent(model, msg, uiClock.current(performance.now()));
      if (msg.type === "error") console.warn("gateway error:", msg);
    },
    onStateChange: (state) => {
      status.textContent = state.kind === "degraded" ? `degraded: ${state.reason}` : state.kind;
      status.dataset.state = state.kind;
    },
  });

  const source = new LandmarkSource({
    video,
    mode,
    wantedHand: hand,
    onFrame: (frame: WireFrame) => {
      model = withSkeleton(model, frame);
      if (client.sendFrame(frame)) recorder.record(frame);
    },
    onStatus: (s) => {
      if (s === "no-camera") {
        status.textContent = "degraded: no-camera — allow webcam access and reload";
        status.dataset.state = "degraded";
      }
    },
  });

  const applyNewSession = () => {
    // settings changes start a fresh session rather than mutating one
    recorder = new TraceRecorder(`web-${Date.now()}`, mode, hand);
    source.restartClock();
    model = { ...emptyModel(), layout: model.layout, skeleton: model.skeleton };
    client.reconfigure(sessionConfig());
  };

  modeButton.addEventListener("click", () => {
    mode = mode === "keyboard" ? "mouse" : "keyboard";
    modeButton.textContent = `mode: ${mode}`;
    applyNewSession();
  });
  for (const input of [tauDown, tauUp, alphaInput]) {
    input.addEventListener("change", applyNewSession);
  }
  downloadButton.addEventListener("click", () => downloadTrace(recorder, document));

  const render = () => {
    const now = uiClock.current(performance.now());
    model = pruneModel(model, now);
    canvas.width = canvas.clientWidth;
    canvas.height = canvas.clientHeight;
    drawFrame(ctx, model, canvas.width, canvas.height, {
      keyboardVisible: mode === "keyboard",
      // keyboard frames are pre-mirrored at acquisition; mouse frames are
      // raw, so mirror the overlay to match the mirrored video preview
      mirrorSkeletonX: mode === "mouse",
    });
    textArea.textContent = model.text || " ";
    requestAnimationFrame(render);
  };

  modeButton.textContent = `mode: ${mode}`;
  client.connect();
  void source.start();
  requestAnimationFrame(render);
}

bootstrap();
