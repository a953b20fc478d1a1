/**
 * End-to-end: spawn the Python simulation service, steer it over the real
 * wire protocol, and check the console-facing contracts.
 */

import { ChildProcess, spawn } from "node:child_process";
import path from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import WebSocket from "ws";

import { StateMessage, commandMessage, parseServerLine, splitLines } from "../src/protocol.js";
import { Trail } from "../src/trail.js";

const REPO_ROOT = path.resolve(__dirname, "..", "..");

let server: ChildProcess;
let port: number;

function startServer(): Promise<number> {
  return new Promise((resolve, reject) => {
    server = spawn(
      "python3",
      ["-m", "flatswim.cli", "serve", "untethered-forward", "--port", "0", "--stream-hz", "500"],
      { cwd: REPO_ROOT, stdio: ["ignore", "pipe", "pipe"] },
    );
    let buffer = "";
    const timeout = setTimeout(() => reject(new Error("server did not start")), 20000);
    server.stdout?.on("data", (chunk: Buffer) => {
      buffer += chunk.toString();
      const m = buffer.match(/ws:\/\/[\d.]+:(\d+)/);
      if (m) {
        clearTimeout(timeout);
        resolve(parseInt(m[1], 10));
      }
    });
    server.stderr?.on("data", () => undefined);
    server.on("exit", (code) => reject(new Error(`server exited early (${code})`)));
  });
}

class LineClient {
  private ws: WebSocket;
  private queue: string[] = [];
  private waiters: ((line: string) => void)[] = [];

  constructor(url: string) {
    this.ws = new WebSocket(url);
    this.ws.on("message", (data) => {
      for (const line of splitLines(data.toString())) {
        const waiter = this.waiters.shift();
        if (waiter) waiter(line);
        else this.queue.push(line);
      }
    });
  }

  ready(): Promise<void> {
    return new Promise((resolve, reject) => {
      this.ws.on("open", resolve);
      this.ws.on("error", reject);
    });
  }

  send(payload: string): void {
    this.ws.send(payload);
  }

  next(timeoutMs = 5000): Promise<string> {
    const queued = this.queue.shift();
    if (queued !== undefined) return Promise.resolve(queued);
    return new Promise((resolve, reject) => {
      const t = setTimeout(() => reject(new Error("timed out waiting for line")), timeoutMs);
      this.waiters.push((line) => {
        clearTimeout(t);
        resolve(line);
      });
    });
  }

  close(): void {
    this.ws.close();
  }
}

beforeAll(async () => {
  port = await startServer();
}, 30000);

afterAll(() => {
  server?.kill();
});

describe("console against a live server", () => {
  it(
    "a forward press advances x monotonically within 2 ticks",
    async () => {
      const client = new LineClient(`ws://127.0.0.1:${port}`);
      await client.ready();
      const world = parseServerLine(await client.next());
      expect(world.type).toBe("world");
      if (world.type !== "world") return;
      const dt = world.dt;

      client.send(commandMessage("forward"));
      let ackT: number | null = null;
      const states: StateMessage[] = [];
      // Collect the ack plus a run of state frames.
      while (states.length < 30) {
        const msg = parseServerLine(await client.next());
        if (msg.type === "ack") {
          expect(msg.cmd).toBe("forward");
          ackT = msg.t ?? null;
        } else if (msg.type === "state") {
          states.push(msg);
        }
      }
      expect(ackT).not.toBeNull();
      const after = states.filter((s) => s.t > (ackT as number) + 1e-12);
      expect(after.length).toBeGreaterThan(5);
      // Within 2 ticks of the command taking effect the robot is moving.
      const first = after.find((s) => s.t <= (ackT as number) + 2 * dt + 1e-12);
      if (first !== undefined) {
        expect(first.v[0]).toBeGreaterThan(0);
      }
      // Rendered x advances monotonically.
      for (let i = 1; i < after.length; i++) {
        expect(after[i].x).toBeGreaterThan(after[i - 1].x);
      }
      expect(after[after.length - 1].x).toBeGreaterThan(world.state.x);
      client.close();
    },
    30000,
  );

  it(
    "a recorded state stream replays to a byte-identical trail polyline",
    async () => {
      const client = new LineClient(`ws://127.0.0.1:${port}`);
      await client.ready();
      await client.next(); // world snapshot
      const recorded: StateMessage[] = [];
      while (recorded.length < 40) {
        const msg = parseServerLine(await client.next());
        if (msg.type === "state") recorded.push(msg);
      }
      client.close();

      const render = (stream: StateMessage[]): string => {
        const trail = new Trail(600);
        for (const s of stream) trail.push(s.x, s.y);
        return trail.toPolyline();
      };
      const first = render(recorded);
      const second = render(recorded);
      expect(second).toBe(first);
      expect(first.length).toBeGreaterThan(0);
    },
    30000,
  );
});
