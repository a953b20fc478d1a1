import { describe, expect, it, vi } from "vitest";

import { SocketFactory, TeleopSession } from "../src/net.js";

class FakeSocket {
  sent: string[] = [];
  onopen: ((ev?: unknown) => void) | null = null;
  onmessage: ((ev: { data: unknown }) => void) | null = null;
  onclose: ((ev?: unknown) => void) | null = null;
  onerror: ((ev?: unknown) => void) | null = null;
  closed = false;

  send(data: string) { this.sent.push(data); }
  close() { this.closed = true; this.onclose?.(); }

  open() { this.onopen?.(); }
  receive(data: string) { this.onmessage?.({ data }); }
}

const WORLD_LINE = JSON.stringify({
  type: "world",
  protocol: 1,
  scenario: "t",
  dt: 0.001,
  arena: { width: 1, height: 1 },
  robot: { variant: "PET", body_length_mm: 45, fin_span_mm: 20, actuator_count: 2, radius: 0.03 },
  obstacles: [],
  lights: [],
  state: { type: "state", t: 0, x: 0.5, y: 0.5, theta: 0, v: [0, 0], omega: 0, battery_J: null, power_W: 0, active: [], fins: { phase: 0, f_act: 0 } },
});

function makeSession(events = {}) {
  const sockets: FakeSocket[] = [];
  const factory: SocketFactory = () => {
    const s = new FakeSocket();
    sockets.push(s);
    return s;
  };
  const session = new TeleopSession("ws://test", events, factory);
  return { session, sockets };
}

describe("TeleopSession", () => {
  it("stores world snapshot then streams states into the latest-state buffer", () => {
    const { session, sockets } = makeSession();
    session.connect();
    sockets[0].open();
    sockets[0].receive(WORLD_LINE + "\n");
    expect(session.world?.scenario).toBe("t");
    expect(session.latestState?.x).toBe(0.5);
    const state2 = JSON.stringify({ type: "state", t: 1, x: 0.6, y: 0.5, theta: 0, v: [0, 0], omega: 0, battery_J: null, power_W: 0, active: [], fins: { phase: 0, f_act: 0 } });
    sockets[0].receive(state2 + "\n" + state2 + "\n");
    expect(session.latestState?.t).toBe(1);
  });

  it("drops commands while disconnected with a visible notice", () => {
    const statuses: string[] = [];
    const { session } = makeSession({ onStatus: (s: string, d?: string) => statuses.push(`${s}${d ? ":" + d : ""}`) });
    expect(session.sendCommand("forward")).toBe(false);
    expect(statuses.some((s) => s.includes("dropped"))).toBe(true);
  });

  it("sends commands when connected", () => {
    const { session, sockets } = makeSession();
    session.connect();
    sockets[0].open();
    expect(session.sendCommand("forward")).toBe(true);
    expect(sockets[0].sent).toContain('{"type":"cmd","cmd":"forward"}\n');
  });

  it("reconnects with at least 1 s of backoff", () => {
    vi.useFakeTimers();
    try {
      const { session, sockets } = makeSession();
      session.connect();
      sockets[0].open();
      sockets[0].close(); // server went away
      expect(sockets).toHaveLength(1);
      vi.advanceTimersByTime(500);
      expect(sockets).toHaveLength(1); // no retry faster than 1 s
      vi.advanceTimersByTime(600);
      expect(sockets).toHaveLength(2);
      // Second failure backs off longer.
      sockets[1].close();
      vi.advanceTimersByTime(1500);
      expect(sockets).toHaveLength(2);
      vi.advanceTimersByTime(700);
      expect(sockets).toHaveLength(3);
    } finally {
      vi.useRealTimers();
    }
  });

  it("protocol version mismatch surfaces as a failure and stops retrying", () => {
    vi.useFakeTimers();
    try {
      const statuses: string[] = [];
      const { session, sockets } = makeSession({ onStatus: (s: string, d?: string) => statuses.push(`${s} ${d ?? ""}`) });
      session.connect();
      sockets[0].open();
      const bad = JSON.parse(WORLD_LINE);
      bad.protocol = 2;
      sockets[0].receive(JSON.stringify(bad) + "\n");
      expect(statuses.some((s) => s.startsWith("failed") && s.includes("version mismatch"))).toBe(true);
      vi.advanceTimersByTime(60000);
      expect(sockets).toHaveLength(1); // no silent retry loop after a version failure
    } finally {
      vi.useRealTimers();
    }
  });

  it("tracks staleness from the last state arrival", () => {
    let wall = 1000;
    const sockets: FakeSocket[] = [];
    const session = new TeleopSession(
      "ws://test",
      {},
      () => { const s = new FakeSocket(); sockets.push(s); return s; },
      () => wall,
    );
    session.connect();
    sockets[0].open();
    sockets[0].receive(WORLD_LINE + "\n");
    wall += 2500;
    expect(session.staleness()).toBeCloseTo(2.5);
  });
});
