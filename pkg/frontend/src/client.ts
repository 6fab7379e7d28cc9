/** Gateway connection: hello handshake, frame streaming, reconnect.
 *
 * The socket constructor is injectable so tests can drive the client
 * against a scripted server (or a fake socket) without a browser.
 * Reconnects use exponential backoff and always start a fresh session
 * with a new hello; server-side state is per-session by design.
 */

import { backoffDelay } from "./backoff.js";
import type { ConnectionState } from "./model.js";
import {
  ClientMessage,
  SessionConfig,
  ServerMessage,
  WireFrame,
  hello,
  parseServerMessage,
} from "./protocol.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  bufferedAmount?: number;
  onopen: (() => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: (() => void) | null;
  onerror: ((err?: unknown) => void) | null;
}

export interface GatewayClientOptions {
  url: string;
  config: SessionConfig;
  makeSocket: (url: string) => SocketLike;
  onMessage?: (msg: ServerMessage) => void;
  onStateChange?: (state: ConnectionState) => void;
  schedule?: (fn: () => void, ms: number) => void;
  /** Frames are dropped, never queued, past this many unsent bytes. */
  maxBufferedBytes?: number;
}

export class GatewayClient {
  readonly opts: GatewayClientOptions;
  state: ConnectionState = { kind: "disconnected" };
  config: SessionConfig;
  droppedFrames = 0;
  private socket: SocketLike | null = null;
  private attempts = 0;
  private stopped = false;
  private readonly schedule: (fn: () => void, ms: number) => void;
  private readonly maxBuffered: number;

  constructor(opts: GatewayClientOptions) {
    this.opts = opts;
    this.config = opts.config;
    this.schedule = opts.schedule ?? ((fn, ms) => setTimeout(fn, ms));
    this.maxBuffered = opts.maxBufferedBytes ?? 64 * 1024;
  }

  connect(): void {
    if (this.stopped) return;
    this.setState({ kind: "connecting" });
    let socket: SocketLike;
    try {
      socket = this.opts.makeSocket(this.opts.url);
    } catch (err) {
      this.setState({ kind: "degraded", reason: String(err) });
      this.scheduleReconnect();
      return;
    }
    this.socket = socket;
    socket.onopen = () => this.sendRaw(hello(this.config));
    socket.onmessage = (ev) => {
      const msg = parseServerMessage(ev.data);
      if (!msg) return;
      if (msg.type === "welcome") {
        this.attempts = 0;
        this.setState({ kind: "ready" });
      }
      this.opts.onMessage?.(msg);
    };
    socket.onerror = () => {
      /* onclose follows; nothing to do here */
    };
    socket.onclose = () => {
      if (this.socket !== socket) return; // stale socket from a reconnect
      this.socket = null;
      this.setState({ kind: "disconnected" });
      this.scheduleReconnect();
    };
  }

  /** Send one landmark frame; silently dropped unless the session is
   * ready and the socket is keeping up. Returns true when sent. */
  sendFrame(frame: WireFrame): boolean {
    if (this.state.kind !== "ready" || !this.socket) return false;
    if ((this.socket.bufferedAmount ?? 0) > this.maxBuffered) {
      this.droppedFrames += 1;
      return false;
    }
    this.sendRaw({ type: "frame", frame });
    return true;
  }

  /** Apply new session settings by starting a fresh session. */
  reconfigure(config: SessionConfig): void {
    this.config = config;
    const socket = this.socket;
    if (socket) {
      this.socket = null;
      try {
        this.sendBye(socket);
        socket.onclose = null;
        socket.close();
      } catch {
        /* old socket may already be dead */
      }
    }
    this.attempts = 0;
    this.connect();
  }

  close(): void {
    this.stopped = true;
    const socket = this.socket;
    this.socket = null;
    if (socket) {
      try {
        this.sendBye(socket);
        socket.onclose = null;
        socket.close();
      } catch {
        /* ignore */
      }
    }
    this.setState({ kind: "disconnected" });
  }

  private sendBye(socket: SocketLike): void {
    const bye: ClientMessage = { type: "bye" };
    try {
      socket.send(JSON.stringify(bye));
    } catch {
      /* closing anyway */
    }
  }

  private sendRaw(msg: ClientMessage): void {
    this.socket?.send(JSON.stringify(msg));
  }

  private scheduleReconnect(): void {
    if (this.stopped) return;
    const delay = backoffDelay(this.attempts);
    this.attempts += 1;
    this.schedule(() => this.connect(), delay);
  }

  private setState(state: ConnectionState): void {
    this.state = state;
    this.opts.onStateChange?.(state);
  }
}
