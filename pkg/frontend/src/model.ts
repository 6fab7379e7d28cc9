/** Render state and its reducer.
 *
 * Everything the canvas and text area show lives in a RenderModel, and
 * the only way server data changes it is applyServerEvent. The client
 * never interprets gestures: keys, highlights, and cursor moves all
 * originate from gateway messages.
 */

import type { LayoutDef, ServerMessage, WireFrame } from "./protocol.js";

export type ConnectionState =
  | { kind: "disconnected" }
  | { kind: "connecting" }
  | { kind: "ready" }
  | { kind: "degraded"; reason: string };

export interface HighlightEntry {
  label: string;
  color: number;
  expiry: number; // session ms
}

export interface KeyFlash {
  label: string;
  until: number; // session ms
}

export interface ClickFlash {
  x: number;
  y: number;
  kind: string;
  until: number; // session ms
}

export interface RenderModel {
  session: string | null;
  layout: LayoutDef | null;
  highlights: HighlightEntry[];
  flashes: KeyFlash[];
  cursor: { x: number; y: number } | null;
  clickFlash: ClickFlash | null;
  text: string;
  skeleton: WireFrame | null; // last frame we sent, for the overlay
  lastError: string | null;
}

export const KEY_FLASH_MS = 250;
export const CLICK_FLASH_MS = 300;

export function emptyModel(): RenderModel {
  return {
    session: null,
    layout: null,
    highlights: [],
    flashes: [],
    cursor: null,
    clickFlash: null,
    text: "",
    skeleton: null,
    lastError: null,
  };
}

/** Fold one server message into the model; `now` is session-relative ms. */
export function applyServerEvent(
  model: RenderModel,
  msg: ServerMessage,
  now: number
): RenderModel {
  switch (msg.type) {
    case "welcome":
      // fresh session: server state is per-session, so mirror that reset
      return {
        ...emptyModel(),
        session: msg.session,
        layout: msg.layout,
        skeleton: model.skeleton,
      };
    case "key":
      return {
        ...model,
        text: msg.text,
        flashes: [...model.flashes, { label: msg.label, until: now + KEY_FLASH_MS }],
      };
    case "highlight":
      return {
        ...model,
        highlights: [
          ...model.highlights,
          { label: msg.label, color: msg.color, expiry: msg.expiry },
        ],
      };
    case "event": {
      const ev = msg.event;
      if (ev.kind === "cursor_move" && ev.x !== undefined && ev.y !== undefined) {
        return { ...model, cursor: { x: ev.x, y: ev.y } };
      }
      if (ev.kind === "left_click" || ev.kind === "right_click" || ev.kind === "double_click") {
        if (model.cursor) {
          return {
            ...model,
            clickFlash: {
              x: model.cursor.x,
              y: model.cursor.y,
              kind: ev.kind,
              until: now + CLICK_FLASH_MS,
            },
          };
        }
      }
      return model;
    }
    case "error":
      return { ...model, lastError: `${msg.code}: ${msg.message}` };
    default:
      // unknown message types are ignored (forward compatibility)
      return model;
  }
}

/** Drop expired highlights and flashes; called every render tick. */
export function pruneModel(model: RenderModel, now: number): RenderModel {
  const highlights = model.highlights.filter((h) => h.expiry > now);
  const flashes = model.flashes.filter((f) => f.until > now);
  const clickFlash = model.clickFlash && model.clickFlash.until > now ? model.clickFlash : null;
  if (
    highlights.length === model.highlights.length &&
    flashes.length === model.flashes.length &&
    clickFlash === model.clickFlash
  ) {
    return model;
  }
  return { ...model, highlights, flashes, clickFlash };
}

export function withSkeleton(model: RenderModel, frame: WireFrame): RenderModel {
  return { ...model, skeleton: frame };
}
