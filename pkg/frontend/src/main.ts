/**
 * Browser bootstrap: wires the socket session, input, and render loop.
 */

import { commandForKey } from "./input.js";
import { TeleopSession } from "./net.js";
import { CommandKind, commandsForDesign } from "./protocol.js";
import { Draw2D, drawFrame, gaugeText } from "./render.js";
import { Trail } from "./trail.js";

const STALE_AFTER_S = 1.0;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

function serverUrl(): string {
  const params = new URLSearchParams(window.location.search);
  const override = params.get("server");
  if (override !== null) return override;
  return `ws://${window.location.hostname || "127.0.0.1"}:8765`;
}

export function start(): void {
  const canvas = el<HTMLCanvasElement>("arena");
  const ctx = canvas.getContext("2d") as unknown as Draw2D;
  const banner = el<HTMLDivElement>("banner");
  const buttons = el<HTMLDivElement>("buttons");
  const lightsBox = el<HTMLDivElement>("lights");
  const gauges = {
    battery: el<HTMLSpanElement>("gauge-battery"),
    power: el<HTMLSpanElement>("gauge-power"),
    speed: el<HTMLSpanElement>("gauge-speed"),
    heading: el<HTMLSpanElement>("gauge-heading"),
  };

  const trail = new Trail(600);
  let lastTrailKey = "";
  let activeCmd: CommandKind | null = null;
  let activeUntil = 0;

  const session = new TeleopSession(serverUrl(), {
    onWorld(world) {
      banner.textContent = `connected: ${world.scenario}`;
      banner.className = "ok";
      trail.clear();
      buildButtons(world.robot.actuator_count);
      buildLights(world.lights.length);
    },
    onState(state) {
      const key = `${state.x},${state.y}`;
      if (key !== lastTrailKey) {
        trail.push(state.x, state.y);
        lastTrailKey = key;
      }
    },
    onAck(ack) {
      if (ack.cmd !== undefined) {
        activeCmd = ack.cmd as CommandKind;
        activeUntil = performance.now() + 500;
      }
    },
    onServerError(err) {
      banner.textContent = `server error: ${err.msg}`;
      banner.className = "warn";
    },
    onStatus(status, detail) {
      if (status !== "connected") {
        banner.textContent = detail ? `${status}: ${detail}` : status;
        banner.className = status === "failed" ? "error" : "warn";
      }
    },
  });

  function buildButtons(actuatorCount: number): void {
    buttons.innerHTML = "";
    for (const cmd of commandsForDesign(actuatorCount)) {
      const b = document.createElement("button");
      b.textContent = cmd.replace("_", " ");
      b.id = `btn-${cmd}`;
      b.onclick = () => session.sendCommand(cmd);
      buttons.appendChild(b);
    }
  }

  function buildLights(count: number): void {
    lightsBox.innerHTML = "";
    for (let i = 0; i < count; i++) {
      const label = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.checked = session.world?.lights[i]?.on ?? true;
      box.onchange = () => session.toggleLight(i, box.checked);
      label.appendChild(box);
      label.appendChild(document.createTextNode(` light ${i}`));
      lightsBox.appendChild(label);
    }
  }

  document.addEventListener("keydown", (ev) => {
    const count = session.world?.robot.actuator_count ?? 2;
    const cmd = commandForKey(ev.key, count);
    if (cmd !== null) {
      ev.preventDefault();
      session.sendCommand(cmd);
    }
  });

  function frame(): void {
    const world = session.world;
    const state = session.latestState;
    if (world !== null && state !== null) {
      drawFrame(
        ctx,
        { width: canvas.width, height: canvas.height },
        world,
        state,
        trail,
        session.staleness() > STALE_AFTER_S,
      );
      const g = gaugeText(state);
      gauges.battery.textContent = g.battery;
      gauges.power.textContent = g.power;
      gauges.speed.textContent = g.speed;
      gauges.heading.textContent = g.heading;
      // Button highlight echoes the acknowledged burst window.
      for (const btn of buttons.querySelectorAll("button")) {
        btn.classList.toggle(
          "active",
          activeCmd !== null && btn.id === `btn-${activeCmd}` && performance.now() < activeUntil,
        );
      }
    }
    requestAnimationFrame(frame);
  }

  session.connect();
  requestAnimationFrame(frame);
}

if (typeof document !== "undefined") {
  window.addEventListener("DOMContentLoaded", start);
}
