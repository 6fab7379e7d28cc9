/** Webcam hand-landmark acquisition via the MediaPipe Hands CDN bundle.
 *
 * Emits at most 30 frames/s with strictly increasing session timestamps;
 * results with no detected hand emit nothing. In keyboard mode the x
 * coordinates are mirrored before sending so the engine's raw-space taps
 * land where the user sees their finger over the keyboard; mouse mode
 * sends raw coordinates because the engine mirrors during screen mapping.
 */

import { SessionClock } from "./clock.js";
import type { HandednessLabel, Mode, WireFrame } from "./protocol.js";

// Provided by the @mediapipe/hands and camera_utils scripts in index.html.
declare const Hands: any;
declare const Camera: any;

export const MAX_FPS = 30;

export interface AcquisitionOptions {
  video: HTMLVideoElement;
  mode: Mode;
  wantedHand: HandednessLabel;
  onFrame: (frame: WireFrame) => void;
  onStatus: (status: "running" | "no-camera") => void;
}

export interface MediapipeLandmark {
  x: number;
  y: number;
  z: number;
}

export function toWireFrame(
  landmarks: MediapipeLandmark[],
  label: HandednessLabel,
  t: number,
  mirrorX: boolean
): WireFrame {
  const clamp = (v: number) => Math.min(1, Math.max(0, v));
  const lm = landmarks.map((p): [number, number, number] => [
    clamp(mirrorX ? 1 - p.x : p.x),
    clamp(p.y),
    p.z,
  ]);
  return { t, hand: label, lm };
}

export function pickHand(
  results: { multiHandLandmarks?: MediapipeLandmark[][]; multiHandedness?: { label: string }[] },
  wanted: HandednessLabel
): { landmarks: MediapipeLandmark[]; label: HandednessLabel } | null {
  const hands = results.multiHandLandmarks ?? [];
  const labels = results.multiHandedness ?? [];
  for (let i = 0; i < hands.length; i++) {
    const label = (labels[i]?.label ?? "Right") as HandednessLabel;
    if (label === wanted && hands[i].length === 21) {
      return { landmarks: hands[i], label };
    }
  }
  return null;
}

export class LandmarkSource {
  private clock = new SessionClock(performance.now());
  private lastEmit = -Infinity;
  private camera: any = null;

  constructor(private readonly opts: AcquisitionOptions) {}

  /** Reset the session clock (used when a reconnect starts a new session). */
  restartClock(): void {
    this.clock = new SessionClock(performance.now());
    this.lastEmit = -Infinity;
  }

  async start(): Promise<void> {
    const hands = new Hands({
      locateFile: (file: string) => `https://cdn.jsdelivr.net/npm/@mediapipe/hands/${file}`,
    });
    hands.setOptions({
      maxNumHands: 2,
      modelComplexity: 0,
      minDetectionConfidence: 0.6,
      minTrackingConfidence: 0.5,
    });
    hands.onResults((results: any) => this.handleResults(results));
    this.camera = new Camera(this.opts.video, {
      onFrame: async () => {
        await hands.send({ image: this.opts.video });
      },
      width: 640,
      height: 480,
    });
    try {
      await this.camera.start();
      this.opts.onStatus("running");
    } catch {
      this.opts.onStatus("no-camera");
    }
  }

  private handleResults(results: any): void {
    const now = performance.now();
    if (now - this.lastEmit < 1000 / MAX_FPS) return;
    const picked = pickHand(results, this.opts.wantedHand);
    if (!picked) return; // no matching hand in view: skip, never fabricate
    this.lastEmit = now;
    const t = this.clock.next(now);
    const mirrorX = this.opts.mode === "keyboard";
    this.opts.onFrame(toWireFrame(picked.landmarks, picked.label, t, mirrorX));
  }
}
