import { describe, expect, it } from "vitest";

import { StateMessage } from "../src/protocol.js";
import { Trail } from "../src/trail.js";

function makeStream(n: number): StateMessage[] {
  const out: StateMessage[] = [];
  for (let i = 0; i < n; i++) {
    out.push({
      type: "state",
      t: i * 0.033,
      x: 0.15 + 0.0514 * i * 0.033,
      y: 0.25 + 0.001 * Math.sin(i / 5),
      theta: 0,
      v: [0.0514, 0],
      omega: 0,
      battery_J: 399 - i * 0.02,
      power_W: 0.595,
      active: ["L", "R"],
      fins: { phase: (i * 0.033 * 30) % 1, f_act: 30 },
    });
  }
  return out;
}

describe("Trail", () => {
  it("replaying a recorded stream yields a byte-identical polyline", () => {
    const stream = makeStream(200);
    const render = (states: StateMessage[]): string => {
      const trail = new Trail(600);
      for (const s of states) trail.push(s.x, s.y);
      return trail.toPolyline();
    };
    const first = render(stream);
    const second = render(stream);
    expect(second).toBe(first);
    expect(first.split(" ")).toHaveLength(200);
  });

  it("is bounded by its capacity (ring buffer)", () => {
    const trail = new Trail(50);
    const stream = makeStream(300);
    for (const s of stream) trail.push(s.x, s.y);
    expect(trail.length).toBe(50);
    const pts = trail.toArray();
    // Oldest retained point is stream index 250.
    expect(pts[0].x).toBe(stream[250].x);
    expect(pts[49].x).toBe(stream[299].x);
  });

  it("preserves order across the wrap point", () => {
    const trail = new Trail(4);
    for (let i = 0; i < 6; i++) trail.push(i, -i);
    expect(trail.toArray().map((p) => p.x)).toEqual([2, 3, 4, 5]);
  });

  it("clear empties the buffer", () => {
    const trail = new Trail(4);
    trail.push(1, 1);
    trail.clear();
    expect(trail.length).toBe(0);
    expect(trail.toPolyline()).toBe("");
  });

  it("rejects degenerate capacity", () => {
    expect(() => new Trail(1)).toThrow();
  });
});
