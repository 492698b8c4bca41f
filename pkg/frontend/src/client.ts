/**
 * WebSocket client for the bridge.
 *
 * Owns the socket, feeds decoded frames into the store, and translates
 * user intents into outgoing frames.  The socket constructor and clock
 * are injectable so tests can drive the client with fakes or with a
 * Node WebSocket implementation.
 */

import { parseFrame } from "./frames.js";
import { IdeStore } from "./store.js";
import { WireError, encodeText } from "./wire.js";

/** The slice of the WebSocket interface the client needs. */
export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((event: { data: unknown }) => void) | null;
  onclose: (() => void) | null;
  onerror: (() => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface ClientOptions {
  socketFactory: SocketFactory;
  now?: () => number;
  reconnectDelayMs?: number;
}

export class BridgeClient {
  private socket: SocketLike | null = null;
  private disposed = false;
  private readonly factory: SocketFactory;
  private readonly now: () => number;
  private readonly reconnectDelayMs: number;

  constructor(
    private readonly url: string,
    private readonly store: IdeStore,
    options: ClientOptions,
  ) {
    this.factory = options.socketFactory;
    this.now = options.now ?? (() => Date.now());
    this.reconnectDelayMs = options.reconnectDelayMs ?? 1000;
  }

  connect(): void {
    if (this.disposed) {
      return;
    }
    this.store.socketConnecting();
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.store.socketOpened();
      // populate the selector, the file list, and the API catalog up front
      this.requestScenarios();
      this.requestFiles();
      this.requestManifest();
    };
    socket.onmessage = (event) => {
      if (typeof event.data !== "string") {
        return;
      }
      try {
        this.store.handleFrame(parseFrame(event.data), this.now());
      } catch (exc) {
        if (exc instanceof WireError) {
          this.store.noteError(`bad frame from bridge: ${exc.message}`);
        } else {
          throw exc;
        }
      }
    };
    socket.onclose = () => {
      this.store.socketClosed();
      this.socket = null;
      if (!this.disposed) {
        setTimeout(() => this.connect(), this.reconnectDelayMs);
      }
    };
    socket.onerror = () => {
      // the close handler does the bookkeeping; browsers fire both
    };
  }

  dispose(): void {
    this.disposed = true;
    if (this.socket) {
      this.socket.close();
      this.socket = null;
    }
  }

  private send(kind: string, fields: Record<string, string> = {}): boolean {
    if (!this.socket || this.store.state.connection !== "open") {
      this.store.noteError("not connected to the bridge");
      return false;
    }
    this.socket.send(encodeText(kind, fields));
    return true;
  }

  // -- user intents --------------------------------------------------------

  run(file: string, source: string): void {
    if (this.store.state.connection !== "open") {
      this.store.noteError("cannot run: not connected to the bridge");
      return;
    }
    this.store.runRequested(file);
    this.send("RUN", { file, source });
  }

  stop(): void {
    this.store.stopRequested();
    this.send("STOP");
  }

  repl(line: string): void {
    if (this.store.state.connection !== "open") {
      this.store.noteError("cannot evaluate: not connected to the bridge");
      return;
    }
    this.store.replSubmitted(line);
    this.send("REPL", { line });
  }

  selectScenario(name: string): void {
    this.send("SCENARIO", { name });
  }

  requestScenarios(): void {
    this.send("SCENARIOS");
  }

  requestFiles(): void {
    this.send("FILES");
  }

  loadFile(file: string, revision?: number): void {
    const fields: Record<string, string> = { file };
    if (revision !== undefined) {
      fields["revision"] = String(revision);
    }
    this.send("LOAD", fields);
  }

  saveFile(file: string, source: string): void {
    this.send("SAVE", { file, source });
  }

  requestManifest(): void {
    this.send("MANIFEST");
  }
}
