/**
 * Canvas rendering of the arena view. All functions are pure consumers of
 * server state: the console never simulates anything locally. Drawing goes
 * through a minimal 2-D context interface so tests can record operations.
 */

import { StateMessage, WorldMessage } from "./protocol.js";
import { Trail } from "./trail.js";

export interface Draw2D {
  save(): void;
  restore(): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  rect(x: number, y: number, w: number, h: number): void;
  fill(): void;
  stroke(): void;
  fillText(text: string, x: number, y: number): void;
  set fillStyle(v: string);
  set strokeStyle(v: string);
  set lineWidth(v: number);
  set font(v: string);
  set globalAlpha(v: number);
}

export interface Viewport {
  width: number;
  height: number;
}

/** World (meters, y up) to canvas (pixels, y down) transform. */
export class WorldTransform {
  readonly scale: number;
  readonly offsetX: number;
  readonly offsetY: number;

  constructor(arena: { width: number; height: number }, view: Viewport, margin = 20) {
    const sx = (view.width - 2 * margin) / arena.width;
    const sy = (view.height - 2 * margin) / arena.height;
    this.scale = Math.min(sx, sy);
    this.offsetX = (view.width - arena.width * this.scale) / 2;
    this.offsetY = (view.height + arena.height * this.scale) / 2;
  }

  toPx(x: number, y: number): [number, number] {
    return [this.offsetX + x * this.scale, this.offsetY - y * this.scale];
  }

  lengthToPx(len: number): number {
    return len * this.scale;
  }
}

const COLORS = {
  water: "#0b2d3d",
  arena: "#12415a",
  trail: "#53c6ef",
  robot: "#ffd166",
  robotSunk: "#6b7280",
  fin: "#ef8354",
  obstacle: "#9aa5b1",
  lightOn: "#fff3b0",
  lightOff: "#4a4a4a",
  text: "#e8eef2",
  stale: "rgba(0, 0, 0, 0.6)",
};

export function drawFrame(
  ctx: Draw2D,
  view: Viewport,
  world: WorldMessage,
  state: StateMessage,
  trail: Trail,
  stale: boolean,
): void {
  const tf = new WorldTransform(world.arena, view);
  ctx.save();
  ctx.fillStyle = COLORS.water;
  ctx.beginPath();
  ctx.rect(0, 0, view.width, view.height);
  ctx.fill();

  // Arena
  const [ax, ay] = tf.toPx(0, world.arena.height);
  ctx.fillStyle = COLORS.arena;
  ctx.beginPath();
  ctx.rect(ax, ay, tf.lengthToPx(world.arena.width), tf.lengthToPx(world.arena.height));
  ctx.fill();

  drawTrail(ctx, tf, trail);
  drawLights(ctx, tf, world, state);
  drawObstacles(ctx, tf, world, state);
  drawRobot(ctx, tf, world, state);

  if (stale) {
    ctx.fillStyle = COLORS.stale;
    ctx.beginPath();
    ctx.rect(0, 0, view.width, view.height);
    ctx.fill();
    ctx.fillStyle = COLORS.text;
    ctx.font = "24px sans-serif";
    ctx.fillText("stale", view.width / 2 - 30, view.height / 2);
  }
  ctx.restore();
}

export function drawTrail(ctx: Draw2D, tf: WorldTransform, trail: Trail): void {
  const pts = trail.toArray();
  if (pts.length < 2) return;
  ctx.strokeStyle = COLORS.trail;
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  const [x0, y0] = tf.toPx(pts[0].x, pts[0].y);
  ctx.moveTo(x0, y0);
  for (let i = 1; i < pts.length; i++) {
    const [x, y] = tf.toPx(pts[i].x, pts[i].y);
    ctx.lineTo(x, y);
  }
  ctx.stroke();
}

function drawObstacles(
  ctx: Draw2D,
  tf: WorldTransform,
  world: WorldMessage,
  state: StateMessage,
): void {
  ctx.fillStyle = COLORS.obstacle;
  world.obstacles.forEach((obs, i) => {
    const live = state.obstacles?.[i];
    const [x, y] = live ? tf.toPx(live[0], live[1]) : tf.toPx(obs.x, obs.y);
    ctx.beginPath();
    ctx.arc(x, y, tf.lengthToPx(obs.radius), 0, 2 * Math.PI);
    ctx.fill();
  });
}

function drawLights(
  ctx: Draw2D,
  tf: WorldTransform,
  world: WorldMessage,
  state: StateMessage,
): void {
  world.lights.forEach((light, i) => {
    const on = state.lights?.[i] ?? light.on;
    const [x, y] = tf.toPx(light.x, light.y);
    ctx.fillStyle = on ? COLORS.lightOn : COLORS.lightOff;
    ctx.beginPath();
    ctx.arc(x, y, on ? 9 : 6, 0, 2 * Math.PI);
    ctx.fill();
  });
}

/**
 * Robot body with a pair (or two pairs) of fins whose edge undulates with
 * the server-reported traveling-wave phase.
 */
export function drawRobot(
  ctx: Draw2D,
  tf: WorldTransform,
  world: WorldMessage,
  state: StateMessage,
): void {
  const bodyLen = (world.robot.body_length_mm / 1000) * tf.scale;
  const span = (world.robot.fin_span_mm / 1000) * tf.scale;
  const bodyWidth = bodyLen / 3;
  const [cx, cy] = tf.toPx(state.x, state.y);
  const heading = -state.theta; // canvas y is flipped

  ctx.save();
  // Body rectangle drawn as a path rotated by heading.
  const cos = Math.cos(heading);
  const sin = Math.sin(heading);
  const corner = (dx: number, dy: number): [number, number] => [
    cx + dx * cos - dy * sin,
    cy + dx * sin + dy * cos,
  ];
  ctx.fillStyle = state.sunk ? COLORS.robotSunk : COLORS.robot;
  ctx.beginPath();
  const [p0x, p0y] = corner(bodyLen / 2, -bodyWidth / 2);
  ctx.moveTo(p0x, p0y);
  for (const [dx, dy] of [
    [bodyLen / 2, bodyWidth / 2],
    [-bodyLen / 2, bodyWidth / 2],
    [-bodyLen / 2, -bodyWidth / 2],
  ] as [number, number][]) {
    const [px, py] = corner(dx, dy);
    ctx.lineTo(px, py);
  }
  ctx.fill();

  // Undulating fin edges, one polyline per side; amplitude shrinks when idle.
  const driving = state.active.length > 0 && !state.sunk;
  const amp = span * 0.18 * (driving ? 1.0 : 0.25);
  const waves = 1.5;
  ctx.strokeStyle = COLORS.fin;
  ctx.lineWidth = 2;
  for (const side of [-1, 1]) {
    ctx.beginPath();
    const n = 24;
    for (let i = 0; i <= n; i++) {
      const u = i / n; // 0 root (front) to 1 tip (rear)
      const dx = bodyLen / 2 - u * bodyLen;
      const envelope = Math.min(1, u * 5);
      const wobble =
        amp * envelope * Math.sin(2 * Math.PI * (waves * u - state.fins.phase));
      const dy = side * (bodyWidth / 2 + span * 0.8 + wobble);
      const [px, py] = corner(dx, dy);
      if (i === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    }
    ctx.stroke();
  }
  ctx.restore();
}

export interface Gauges {
  battery: string;
  power: string;
  speed: string;
  heading: string;
}

export function gaugeText(state: StateMessage): Gauges {
  const speed = Math.hypot(state.v[0], state.v[1]);
  return {
    battery: state.battery_J === null ? "tethered" : `${state.battery_J.toFixed(1)} J`,
    power: `${(state.power_W * 1000).toFixed(0)} mW`,
    speed: `${(speed * 100).toFixed(1)} cm/s`,
    heading: `${((state.theta * 180) / Math.PI).toFixed(0)} deg`,
  };
}
