/** Canvas painting: keyboard, highlights, cursor, skeleton, typed text.
 *
 * All geometry comes straight from the server's layout (normalized
 * screen space); the only transformation is scaling to canvas pixels.
 */

import type { RenderModel } from "./model.js";
import { PALETTE, type KeyDef, type WireFrame } from "./protocol.js";

export interface PixelRect {
  x: number;
  y: number;
  w: number;
  h: number;
}

/** Scale a normalized rect to device pixels (rounded edges, so adjacent
 * keys stay within one pixel of the layout geometry). */
export function rectToPixels(
  rect: [number, number, number, number],
  width: number,
  height: number
): PixelRect {
  const [x, y, w, h] = rect;
  const left = Math.round(x * width);
  const top = Math.round(y * height);
  return {
    x: left,
    y: top,
    w: Math.round((x + w) * width) - left,
    h: Math.round((y + h) * height) - top,
  };
}

const HAND_BONES: [number, number][] = [
  [0, 1], [1, 2], [2, 3], [3, 4],       // thumb
  [0, 5], [5, 6], [6, 7], [7, 8],       // index
  [5, 9], [9, 10], [10, 11], [11, 12],  // middle
  [9, 13], [13, 14], [14, 15], [15, 16], // ring
  [13, 17], [17, 18], [18, 19], [19, 20], // pinky
  [0, 17],                               // palm base
];

export function drawKeyboard(
  ctx: CanvasRenderingContext2D,
  model: RenderModel,
  width: number,
  height: number
): void {
  if (!model.layout) return;
  const highlightFor = new Map<string, number>();
  for (const h of model.highlights) highlightFor.set(h.label, h.color);
  const flashed = new Set(model.flashes.map((f) => f.label));

  ctx.save();
  ctx.textAlign = "center";
  ctx.textBaseline = "middle";
  for (const key of model.layout.keys) {
    const r = rectToPixels(key.rect, width, height);
    const color = highlightFor.get(key.label);
    if (color !== undefined) {
      ctx.fillStyle = PALETTE[color % PALETTE.length];
    } else if (flashed.has(key.label)) {
      ctx.fillStyle = "rgba(255, 255, 255, 0.85)";
    } else {
      ctx.fillStyle = "rgba(20, 24, 38, 0.78)";
    }
    ctx.fillRect(r.x, r.y, r.w, r.h);
    ctx.strokeStyle = "rgba(160, 180, 220, 0.9)";
    ctx.lineWidth = 1;
    ctx.strokeRect(r.x + 0.5, r.y + 0.5, r.w - 1, r.h - 1);
    ctx.fillStyle = color !== undefined || flashed.has(key.label) ? "#10131c" : "#dbe4ff";
    ctx.font = `${Math.max(10, Math.floor(r.h * 0.34))}px system-ui, sans-serif`;
    const caption = labelCaption(key);
    ctx.fillText(caption, r.x + r.w / 2, r.y + r.h / 2);
  }
  ctx.restore();
}

function labelCaption(key: KeyDef): string {
  if (key.action === "space") return "␣";
  if (key.action === "backspace") return "⌫";
  if (key.action === "enter") return "⏎";
  return key.label;
}

export function drawSkeleton(
  ctx: CanvasRenderingContext2D,
  frame: WireFrame,
  width: number,
  height: number,
  mirrorX: boolean
): void {
  const px = (i: number): [number, number] => {
    const [x, y] = frame.lm[i];
    const sx = mirrorX ? 1 - x : x;
    return [sx * width, y * height];
  };
  ctx.save();
  ctx.strokeStyle = "rgba(80, 230, 150, 0.9)";
  ctx.lineWidth = 2;
  for (const [a, b] of HAND_BONES) {
    const [ax, ay] = px(a);
    const [bx, by] = px(b);
    ctx.beginPath();
    ctx.moveTo(ax, ay);
    ctx.lineTo(bx, by);
    ctx.stroke();
  }
  ctx.fillStyle = "rgba(255, 255, 255, 0.95)";
  for (let i = 0; i < frame.lm.length; i++) {
    const [x, y] = px(i);
    ctx.beginPath();
    ctx.arc(x, y, i === 8 ? 5 : 3, 0, Math.PI * 2);
    ctx.fill();
  }
  ctx.restore();
}

export function drawCursor(
  ctx: CanvasRenderingContext2D,
  model: RenderModel,
  width: number,
  height: number
): void {
  if (!model.cursor) return;
  const { x, y } = model.cursor;
  ctx.save();
  ctx.strokeStyle = "#ffd166";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.arc(x * width, y * height, 9, 0, Math.PI * 2);
  ctx.stroke();
  if (model.clickFlash) {
    ctx.strokeStyle = model.clickFlash.kind === "right_click" ? "#ef476f" : "#06d6a0";
    ctx.beginPath();
    ctx.arc(model.clickFlash.x * width, model.clickFlash.y * height, 16, 0, Math.PI * 2);
    ctx.stroke();
  }
  ctx.restore();
}

export function drawFrame(
  ctx: CanvasRenderingContext2D,
  model: RenderModel,
  width: number,
  height: number,
  options: { keyboardVisible: boolean; mirrorSkeletonX: boolean }
): void {
  ctx.clearRect(0, 0, width, height);
  if (options.keyboardVisible) drawKeyboard(ctx, model, width, height);
  if (model.skeleton) drawSkeleton(ctx, model.skeleton, width, height, options.mirrorSkeletonX);
  drawCursor(ctx, model, width, height);
}
