/** Records every frame this client sent, downloadable as a trace file
 * (JSON-lines: header first, then one frame per line) that the engine's
 * offline replay accepts verbatim.
 */

import type { HandednessLabel, Mode, WireFrame } from "./protocol.js";

export class TraceRecorder {
  private frames: WireFrame[] = [];

  constructor(
    public readonly session: string,
    public readonly mode: Mode,
    public readonly handedness: HandednessLabel
  ) {}

  record(frame: WireFrame): void {
    this.frames.push(frame);
  }

  get count(): number {
    return this.frames.length;
  }

  clear(): void {
    this.frames = [];
  }

  toTraceText(): string {
    const header = {
      version: "1",
      session: this.session,
      mode: this.mode,
      handedness: this.handedness,
      thresholds: null,
    };
    const lines = [JSON.stringify(header)];
    for (const f of this.frames) {
      lines.push(JSON.stringify({ t: f.t, hand: f.hand, lm: f.lm }));
    }
    return lines.join("\n") + "\n";
  }
}

export function downloadTrace(recorder: TraceRecorder, doc: Document): void {
  const blob = new Blob([recorder.toTraceText()], { type: "application/jsonl" });
  const url = URL.createObjectURL(blob);
  const a = doc.createElement("a");
  a.href = url;
  a.download = `${recorder.session}.trace`;
  a.click();
  URL.revokeObjectURL(url);
}
