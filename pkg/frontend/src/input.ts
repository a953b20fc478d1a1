/**
 * Keyboard bindings for the steering commands. Arrows cover the 4-button
 * remote; the extended keys unlock the 4-actuator maneuvers when the
 * connected robot has them.
 */

import { CommandKind, commandsForDesign } from "./protocol.js";

export const KEY_BINDINGS: Record<string, CommandKind> = {
  ArrowUp: "forward",
  ArrowLeft: "turn_left",
  ArrowRight: "turn_right",
  ArrowDown: "backward",
  a: "side_left",
  d: "side_right",
  q: "rotate_ccw",
  e: "rotate_cw",
  " ": "stop",
};

/** Command for a key press, design-gated; null when unbound or unavailable. */
export function commandForKey(key: string, actuatorCount: number): CommandKind | null {
  const cmd = KEY_BINDINGS[key];
  if (cmd === undefined) return null;
  if (!commandsForDesign(actuatorCount).includes(cmd)) return null;
  return cmd;
}
