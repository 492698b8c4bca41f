/**
 * Top-down 2D field renderer.
 *
 * Pure: every call paints one complete scene from the latest world frame
 * and the scenario geometry — nothing is retained between frames.  The
 * drawing surface is a structural subset of CanvasRenderingContext2D so
 * tests can substitute a recording fake.
 */

import { Obstacle, ScenarioInfo, WorldFrame } from "./frames.js";

/** The slice of CanvasRenderingContext2D the renderer needs. */
export interface Draw {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  textAlign: CanvasTextAlign;
  textBaseline: CanvasTextBaseline;
  globalAlpha: number;
  save(): void;
  restore(): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  fill(): void;
  stroke(): void;
  fillText(text: string, x: number, y: number): void;
}

export interface Viewport {
  scale: number;
  toX(worldX: number): number;
  toY(worldY: number): number;
}

export const FIELD_MARGIN_PX = 16;

/**
 * Uniform world-to-canvas mapping: world +x goes right, world +y goes UP
 * (canvas y is inverted), one scale for both axes so shapes stay round.
 */
export function makeViewport(
  info: ScenarioInfo,
  width: number,
  height: number,
  margin: number = FIELD_MARGIN_PX,
): Viewport {
  const scale = Math.min(
    (width - 2 * margin) / (2 * info.fieldHalfX),
    (height - 2 * margin) / (2 * info.fieldHalfY),
  );
  const cx = width / 2;
  const cy = height / 2;
  return {
    scale,
    toX: (x) => cx + x * scale,
    toY: (y) => cy - y * scale,
  };
}

export interface SceneView {
  frame: WorldFrame | null;
  scenario: ScenarioInfo | null;
  /** milliseconds since the last STATE frame arrived (Infinity if none) */
  staleMs: number;
  connected: boolean;
}

export const STALE_AFTER_MS = 1000;

const ROBOT_COLORS = ["#4fc3f7", "#ffb74d", "#aed581", "#f06292", "#ba68c8", "#4db6ac"];

const COLORS = {
  page: "#10141a",
  pitch: "#1d5c2f",
  mazeFloor: "#2b2f36",
  line: "rgba(255,255,255,0.75)",
  wall: "#6b7280",
  ball: "#ff9f1c",
  haltRing: "#ef4444",
  label: "#0b0e13",
  hud: "#9aa4b2",
  overlay: "rgba(8,10,14,0.72)",
  overlayText: "#e5e9f0",
};

function drawPitch(ctx: Draw, info: ScenarioInfo, vp: Viewport): void {
  const left = vp.toX(-info.fieldHalfX);
  const top = vp.toY(info.fieldHalfY);
  const w = 2 * info.fieldHalfX * vp.scale;
  const h = 2 * info.fieldHalfY * vp.scale;
  const maze = info.obstacles.length > 0;
  ctx.fillStyle = maze ? COLORS.mazeFloor : COLORS.pitch;
  ctx.fillRect(left, top, w, h);
  ctx.strokeStyle = COLORS.line;
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(left, top);
  ctx.lineTo(left + w, top);
  ctx.lineTo(left + w, top + h);
  ctx.lineTo(left, top + h);
  ctx.lineTo(left, top);
  ctx.stroke();
  if (!maze) {
    // halfway line and center circle
    ctx.beginPath();
    ctx.moveTo(vp.toX(0), top);
    ctx.lineTo(vp.toX(0), top + h);
    ctx.stroke();
    ctx.beginPath();
    ctx.arc(vp.toX(0), vp.toY(0), 0.3 * vp.scale, 0, 2 * Math.PI);
    ctx.stroke();
  }
}

function drawWalls(ctx: Draw, obstacles: Obstacle[], vp: Viewport): void {
  ctx.fillStyle = COLORS.wall;
  for (const o of obstacles) {
    ctx.beginPath();
    ctx.arc(vp.toX(o.x), vp.toY(o.y), o.r * vp.scale, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function drawRobots(ctx: Draw, frame: WorldFrame, info: ScenarioInfo, vp: Viewport): void {
  const r = info.robotRadius * vp.scale;
  for (const robot of frame.robots) {
    const x = vp.toX(robot.x);
    const y = vp.toY(robot.y);
    ctx.fillStyle = ROBOT_COLORS[robot.id % ROBOT_COLORS.length]!;
    ctx.beginPath();
    ctx.arc(x, y, r, 0, 2 * Math.PI);
    ctx.fill();
    // heading tick: world +y is up, so canvas y goes down as sin grows
    ctx.strokeStyle = COLORS.label;
    ctx.lineWidth = Math.max(1.5, r / 6);
    ctx.beginPath();
    ctx.moveTo(x, y);
    ctx.lineTo(x + r * Math.cos(robot.th), y - r * Math.sin(robot.th));
    ctx.stroke();
    if (robot.halted) {
      ctx.strokeStyle = COLORS.haltRing;
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.arc(x, y, r + 2, 0, 2 * Math.PI);
      ctx.stroke();
    }
    if (robot.dribbling) {
      ctx.fillStyle = COLORS.ball;
      ctx.beginPath();
      ctx.arc(
        x + (r + 3) * Math.cos(robot.th),
        y - (r + 3) * Math.sin(robot.th),
        Math.max(2, r / 4),
        0,
        2 * Math.PI,
      );
      ctx.fill();
    }
    ctx.fillStyle = COLORS.label;
    ctx.font = `bold ${Math.max(10, Math.round(r))}px system-ui, sans-serif`;
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    ctx.fillText(String(robot.id), x, y);
  }
}

function drawBall(ctx: Draw, frame: WorldFrame, info: ScenarioInfo, vp: Viewport): void {
  ctx.fillStyle = COLORS.ball;
  ctx.beginPath();
  ctx.arc(
    vp.toX(frame.ball.x),
    vp.toY(frame.ball.y),
    Math.max(2, info.ballRadius * vp.scale),
    0,
    2 * Math.PI,
  );
  ctx.fill();
}

function drawOverlay(ctx: Draw, width: number, height: number, text: string): void {
  ctx.fillStyle = COLORS.overlay;
  ctx.fillRect(0, 0, width, height);
  ctx.fillStyle = COLORS.overlayText;
  ctx.font = "16px system-ui, sans-serif";
  ctx.textAlign = "center";
  ctx.textBaseline = "middle";
  ctx.fillText(text, width / 2, height / 2);
}

/** Paint one complete scene. */
export function renderScene(ctx: Draw, width: number, height: number, view: SceneView): void {
  ctx.save();
  ctx.globalAlpha = 1;
  ctx.fillStyle = COLORS.page;
  ctx.fillRect(0, 0, width, height);

  if (view.scenario === null) {
    drawOverlay(ctx, width, height, view.connected ? "waiting for simulator…" : "disconnected");
    ctx.restore();
    return;
  }

  const vp = makeViewport(view.scenario, width, height);
  drawPitch(ctx, view.scenario, vp);
  drawWalls(ctx, view.scenario.obstacles, vp);
  if (view.frame !== null) {
    drawRobots(ctx, view.frame, view.scenario, vp);
    drawBall(ctx, view.frame, view.scenario, vp);
    ctx.fillStyle = COLORS.hud;
    ctx.font = "12px ui-monospace, monospace";
    ctx.textAlign = "left";
    ctx.textBaseline = "top";
    const dropped = view.frame.dropped ? `  dropped=${view.frame.dropped}` : "";
    ctx.fillText(`t=${view.frame.t.toFixed(1)}s  seq=${view.frame.seq}${dropped}`, 8, 8);
  }

  if (!view.connected) {
    drawOverlay(ctx, width, height, "disconnected — reconnecting…");
  } else if (view.staleMs > STALE_AFTER_MS) {
    drawOverlay(ctx, width, height, "no data from simulator");
  }
  ctx.restore();
}
