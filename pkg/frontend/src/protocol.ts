/** Wire types mirroring the gateway's JSON message schema (version 1). */

export const PROTOCOL_VERSION = "1";

export type Mode = "mouse" | "keyboard";
export type HandednessLabel = "Left" | "Right";

export interface KeyDef {
  label: string;
  action: "char" | "space" | "backspace" | "enter";
  rect: [number, number, number, number]; // x, y, w, h in normalized screen space
  char?: string;
}

export interface LayoutDef {
  name: string;
  keys: KeyDef[];
}

export interface WireFrame {
  t: number;
  hand: HandednessLabel;
  lm: [number, number, number][]; // 21 landmarks
}

export interface ThresholdOverrides {
  tau_down?: number;
  tau_up?: number;
  double_window_ms?: number;
  scroll_gain?: number;
  margin?: number;
  alpha?: number;
  extension_ratio?: number;
}

export interface SessionConfig {
  mode?: Mode;
  handedness?: HandednessLabel;
  thresholds?: ThresholdOverrides;
  layout?: string;
  inject?: boolean;
}

export type ClientMessage =
  | { type: "hello"; version: string; config: SessionConfig }
  | { type: "frame"; frame: WireFrame }
  | { type: "bye" };

export interface GestureEventMsg {
  t: number;
  kind: "cursor_move" | "left_click" | "right_click" | "double_click" | "scroll" | "key_tap";
  x?: number;
  y?: number;
  delta?: number;
}

export type ServerMessage =
  | { type: "welcome"; session: string; layout: LayoutDef }
  | { type: "event"; event: GestureEventMsg }
  | { type: "key"; label: string; text: string }
  | { type: "highlight"; label: string; color: number; expiry: number }
  | { type: "error"; code: string; message: string };

export function hello(config: SessionConfig): ClientMessage {
  return { type: "hello", version: PROTOCOL_VERSION, config };
}

export function parseServerMessage(data: unknown): ServerMessage | null {
  let text: string;
  if (typeof data === "string") {
    text = data;
  } else if (data && typeof (data as { toString?: unknown }).toString === "function") {
    text = String(data);
  } else {
    return null;
  }
  try {
    const msg = JSON.parse(text);
    return msg && typeof msg.type === "string" ? (msg as ServerMessage) : null;
  } catch {
    return null;
  }
}

/** The gateway's fixed 8-color highlight palette, indexed by `color`. */
export const PALETTE = [
  "#e6194b",
  "#3cb44b",
  "#ffe119",
  "#4363d8",
  "#f58231",
  "#911eb4",
  "#46f0f0",
  "#f032e6",
] as const;
