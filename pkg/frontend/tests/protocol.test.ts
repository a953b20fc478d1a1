import { describe, expect, it } from "vitest";

import {
  ProtocolError,
  commandMessage,
  commandsForDesign,
  lightMessage,
  parseServerLine,
  splitLines,
} from "../src/protocol.js";

const STATE_LINE = JSON.stringify({
  type: "state",
  t: 1.5,
  x: 0.3,
  y: 0.25,
  theta: 0.1,
  v: [0.05, 0.0],
  omega: 0.0,
  battery_J: 399.0,
  power_W: 0.595,
  active: ["L", "R"],
  fins: { phase: 0.25, f_act: 30.0 },
});

describe("parseServerLine", () => {
  it("parses state messages", () => {
    const msg = parseServerLine(STATE_LINE);
    expect(msg.type).toBe("state");
    if (msg.type === "state") {
      expect(msg.x).toBeCloseTo(0.3);
      expect(msg.active).toEqual(["L", "R"]);
    }
  });

  it("parses world and checks the protocol version", () => {
    const world = {
      type: "world",
      protocol: 1,
      scenario: "untethered-forward",
      dt: 0.001,
      arena: { width: 1.3, height: 0.5 },
      robot: { variant: "PVDF", body_length_mm: 45, fin_span_mm: 20, actuator_count: 2, radius: 0.032 },
      obstacles: [],
      lights: [],
      state: JSON.parse(STATE_LINE),
    };
    const msg = parseServerLine(JSON.stringify(world));
    expect(msg.type).toBe("world");
    const stale = { ...world, protocol: 99 };
    expect(() => parseServerLine(JSON.stringify(stale))).toThrow(ProtocolError);
    expect(() => parseServerLine(JSON.stringify(stale))).toThrow(/version mismatch/);
  });

  it("rejects garbage and unknown types", () => {
    expect(() => parseServerLine("not json")).toThrow(ProtocolError);
    expect(() => parseServerLine("{}")).toThrow(ProtocolError);
    expect(() => parseServerLine('{"type":"telemetry"}')).toThrow(ProtocolError);
  });

  it("passes through ack and error", () => {
    expect(parseServerLine('{"type":"ack","cmd":"forward","t":0.5}').type).toBe("ack");
    expect(parseServerLine('{"type":"error","msg":"nope"}').type).toBe("error");
  });
});

describe("newline-delimited framing", () => {
  it("splits multi-line payloads and drops blanks", () => {
    const payload = `${STATE_LINE}\n\n${STATE_LINE}\n`;
    expect(splitLines(payload)).toHaveLength(2);
  });

  it("serializes commands with a trailing newline", () => {
    expect(commandMessage("forward")).toBe('{"type":"cmd","cmd":"forward"}\n');
    expect(lightMessage(2, false)).toBe('{"type":"light","id":2,"on":false}\n');
  });
});

describe("design gating", () => {
  it("two-actuator designs expose the 4-button set", () => {
    const cmds = commandsForDesign(2);
    expect(cmds).toContain("forward");
    expect(cmds).toContain("stop");
    expect(cmds).not.toContain("backward");
  });

  it("four-actuator designs expose the full maneuver set", () => {
    const cmds = commandsForDesign(4);
    expect(cmds).toContain("backward");
    expect(cmds).toContain("rotate_cw");
    expect(cmds).toContain("side_left");
  });
});
