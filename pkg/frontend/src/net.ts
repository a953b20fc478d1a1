/**
 * WebSocket session with reconnect backoff and a latest-state buffer.
 * The socket events and the render loop are decoupled: handlers update the
 * buffered state, the render loop reads it at its own cadence.
 */

import {
  AckMessage,
  CommandKind,
  ErrorMessage,
  ProtocolError,
  ServerMessage,
  StateMessage,
  WorldMessage,
  commandMessage,
  lightMessage,
  parseServerLine,
  splitLines,
} from "./protocol.js";

export type ConnectionStatus = "connecting" | "connected" | "disconnected" | "failed";

export interface SessionEvents {
  onWorld?: (world: WorldMessage) => void;
  onState?: (state: StateMessage) => void;
  onAck?: (ack: AckMessage) => void;
  onServerError?: (err: ErrorMessage) => void;
  onStatus?: (status: ConnectionStatus, detail?: string) => void;
}

const MIN_RETRY_MS = 1000;
const MAX_RETRY_MS = 10000;

interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export class TeleopSession {
  latestState: StateMessage | null = null;
  world: WorldMessage | null = null;
  status: ConnectionStatus = "disconnected";
  lastStateWallMs = 0;

  private socket: SocketLike | null = null;
  private retryMs = MIN_RETRY_MS;
  private closed = false;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    readonly url: string,
    private events: SessionEvents = {},
    private socketFactory: SocketFactory = (u) => new WebSocket(u) as unknown as SocketLike,
    private now: () => number = () => Date.now(),
  ) {}

  connect(): void {
    if (this.closed) return;
    this.setStatus("connecting");
    const sock = this.socketFactory(this.url);
    this.socket = sock;
    sock.onopen = () => {
      this.retryMs = MIN_RETRY_MS;
      this.setStatus("connected");
    };
    sock.onmessage = (ev) => this.handlePayload(String(ev.data));
    sock.onerror = () => {
      // The close handler performs the retry; nothing to do here.
    };
    sock.onclose = () => {
      this.socket = null;
      if (!this.closed) {
        this.setStatus("disconnected", `retrying in ${this.retryMs / 1000} s`);
        this.scheduleReconnect();
      }
    };
  }

  close(): void {
    this.closed = true;
    if (this.timer !== null) clearTimeout(this.timer);
    this.socket?.close();
    this.setStatus("disconnected");
  }

  /** Send a steering command; returns false (with a visible status) if offline. */
  sendCommand(cmd: CommandKind): boolean {
    if (this.status !== "connected" || this.socket === null) {
      this.setStatus(this.status, `command ${cmd} dropped: not connected`);
      return false;
    }
    this.socket.send(commandMessage(cmd));
    return true;
  }

  toggleLight(id: number, on: boolean): boolean {
    if (this.status !== "connected" || this.socket === null) {
      return false;
    }
    this.socket.send(lightMessage(id, on));
    return true;
  }

  /** Seconds since the last state message arrived. */
  staleness(): number {
    if (this.lastStateWallMs === 0) return Infinity;
    return (this.now() - this.lastStateWallMs) / 1000;
  }

  private handlePayload(payload: string): void {
    for (const line of splitLines(payload)) {
      let msg: ServerMessage;
      try {
        msg = parseServerLine(line);
      } catch (err) {
        if (err instanceof ProtocolError) {
          this.setStatus("failed", err.message);
          this.socket?.close();
          this.closed = err.message.includes("protocol version");
          return;
        }
        throw err;
      }
      this.dispatch(msg);
    }
  }

  private dispatch(msg: ServerMessage): void {
    switch (msg.type) {
      case "world":
        this.world = msg;
        this.latestState = msg.state;
        this.lastStateWallMs = this.now();
        this.events.onWorld?.(msg);
        break;
      case "state":
        this.latestState = msg;
        this.lastStateWallMs = this.now();
        this.events.onState?.(msg);
        break;
      case "ack":
        this.events.onAck?.(msg);
        break;
      case "error":
        this.events.onServerError?.(msg);
        break;
    }
  }

  private scheduleReconnect(): void {
    this.timer = setTimeout(() => {
      this.timer = null;
      this.connect();
    }, this.retryMs);
    this.retryMs = Math.min(this.retryMs * 2, MAX_RETRY_MS);
  }

  private setStatus(status: ConnectionStatus, detail?: string): void {
    this.status = status;
    this.events.onStatus?.(status, detail);
  }
}
