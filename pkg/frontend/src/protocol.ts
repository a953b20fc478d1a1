/**
 * Wire protocol types and parsing for the simulation service.
 * Newline-delimited JSON over WebSocket; the server is authoritative.
 */

export const PROTOCOL_VERSION = 1;

export type CommandKind =
  | "forward"
  | "backward"
  | "turn_left"
  | "turn_right"
  | "side_left"
  | "side_right"
  | "rotate_cw"
  | "rotate_ccw"
  | "stop";

export const TWO_ACTUATOR_COMMANDS: CommandKind[] = [
  "forward",
  "turn_left",
  "turn_right",
  "stop",
];

export const FOUR_ACTUATOR_COMMANDS: CommandKind[] = [
  "forward",
  "backward",
  "turn_left",
  "turn_right",
  "side_left",
  "side_right",
  "rotate_cw",
  "rotate_ccw",
  "stop",
];

export interface StateMessage {
  type: "state";
  t: number;
  x: number;
  y: number;
  theta: number;
  v: [number, number];
  omega: number;
  battery_J: number | null;
  power_W: number;
  active: string[];
  fins: { phase: number; f_act: number };
  obstacles?: [number, number][];
  lights?: boolean[];
  sunk?: boolean;
}

export interface WorldMessage {
  type: "world";
  protocol: number;
  scenario: string;
  dt: number;
  arena: { width: number; height: number };
  robot: {
    variant: string;
    body_length_mm: number;
    fin_span_mm: number;
    actuator_count: number;
    radius: number;
  };
  obstacles: { x: number; y: number; radius: number }[];
  lights: { x: number; y: number; power: number; on: boolean }[];
  state: StateMessage;
}

export interface AckMessage {
  type: "ack";
  cmd?: string;
  light?: number;
  on?: boolean;
  t?: number;
}

export interface ErrorMessage {
  type: "error";
  msg: string;
}

export type ServerMessage = StateMessage | WorldMessage | AckMessage | ErrorMessage;

export class ProtocolError extends Error {}

function isFiniteNumber(x: unknown): x is number {
  return typeof x === "number" && Number.isFinite(x);
}

/** Parse one newline-delimited JSON line from the server. */
export function parseServerLine(line: string): ServerMessage {
  let raw: unknown;
  try {
    raw = JSON.parse(line);
  } catch {
    throw new ProtocolError(`unparseable server line: ${line.slice(0, 80)}`);
  }
  if (typeof raw !== "object" || raw === null || !("type" in raw)) {
    throw new ProtocolError("server message lacks a type");
  }
  const msg = raw as Record<string, unknown>;
  switch (msg.type) {
    case "state": {
      if (!isFiniteNumber(msg.t) || !isFiniteNumber(msg.x) || !isFiniteNumber(msg.y)) {
        throw new ProtocolError("state message missing pose fields");
      }
      return msg as unknown as StateMessage;
    }
    case "world": {
      if (msg.protocol !== PROTOCOL_VERSION) {
        throw new ProtocolError(
          `protocol version mismatch: server ${String(msg.protocol)}, console ${PROTOCOL_VERSION}`,
        );
      }
      if (typeof msg.arena !== "object" || msg.arena === null) {
        throw new ProtocolError("world message missing arena");
      }
      return msg as unknown as WorldMessage;
    }
    case "ack":
      return msg as unknown as AckMessage;
    case "error":
      return msg as unknown as ErrorMessage;
    default:
      throw new ProtocolError(`unknown server message type ${String(msg.type)}`);
  }
}

/** Split a socket payload into newline-delimited JSON lines. */
export function splitLines(payload: string): string[] {
  return payload
    .split("\n")
    .map((s) => s.trim())
    .filter((s) => s.length > 0);
}

export function commandMessage(cmd: CommandKind): string {
  return JSON.stringify({ type: "cmd", cmd }) + "\n";
}

export function lightMessage(id: number, on: boolean): string {
  return JSON.stringify({ type: "light", id, on }) + "\n";
}

export function commandsForDesign(actuatorCount: number): CommandKind[] {
  return actuatorCount === 4 ? FOUR_ACTUATOR_COMMANDS : TWO_ACTUATOR_COMMANDS;
}
