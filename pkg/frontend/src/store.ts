/**
 * Single state store for the IDE.
 *
 * All incoming bridge frames and all user intents funnel through here,
 * serialized into one mutable state object; the DOM and the canvas loop
 * are read-only subscribers.  Run/stop button state therefore reflects
 * the bridge's reported status the moment the frame is applied.
 */

import {
  DiagFrame,
  Frame,
  ManifestEntry,
  ScenarioInfo,
  WorldFrame,
} from "./frames.js";

export type Connection = "connecting" | "open" | "closed";

/** What the run toolbar reflects; terminal bridge statuses map to "idle". */
export type RunStatus = "idle" | "starting" | "running" | "stopping";

export type ConsoleKind = "print" | "repl-in" | "repl-value" | "error" | "info";

export interface ConsoleLine {
  kind: ConsoleKind;
  text: string;
}

export interface FileEntry {
  name: string;
  revisions: number;
}

export interface RunExit {
  status: string;
  steps?: number;
  detail?: string;
}

export interface IdeState {
  connection: Connection;
  run: RunStatus;
  runFile: string | null;
  lastExit: RunExit | null;
  console: ConsoleLine[];
  diagnostics: DiagFrame[];
  files: FileEntry[];
  activeFile: string;
  source: string;
  /** edited since the last load/save round-trip */
  dirty: boolean;
  scenarioNames: string[];
  scenario: ScenarioInfo | null;
  selectedScenario: string | null;
  manifest: ManifestEntry[];
  replHistory: string[];
  frame: WorldFrame | null;
  /** wall-clock ms when the last STATE frame arrived; -Infinity before */
  frameAtMs: number;
  bridgeVersion: string | null;
}

const CONSOLE_LIMIT = 500;

const TERMINAL_STATES = new Set(["completed", "aborted", "stopped", "budget-exhausted"]);

export type Listener = (state: IdeState) => void;

export class IdeStore {
  readonly state: IdeState = {
    connection: "connecting",
    run: "idle",
    runFile: null,
    lastExit: null,
    console: [],
    diagnostics: [],
    files: [],
    activeFile: "main.js",
    source: "",
    dirty: false,
    scenarioNames: [],
    scenario: null,
    selectedScenario: null,
    manifest: [],
    replHistory: [],
    frame: null,
    frameAtMs: -Infinity,
    bridgeVersion: null,
  };

  private listeners = new Set<Listener>();

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  private log(kind: ConsoleKind, text: string): void {
    this.state.console.push({ kind, text });
    if (this.state.console.length > CONSOLE_LIMIT) {
      this.state.console.splice(0, this.state.console.length - CONSOLE_LIMIT);
    }
  }

  // -- socket lifecycle ------------------------------------------------

  socketConnecting(): void {
    this.state.connection = "connecting";
    this.notify();
  }

  socketOpened(): void {
    this.state.connection = "open";
    this.log("info", "connected to bridge");
    this.notify();
  }

  socketClosed(): void {
    const wasOpen = this.state.connection === "open";
    this.state.connection = "closed";
    // the bridge halts the robot and abandons the run when the socket dies
    this.state.run = "idle";
    if (wasOpen) {
      this.log("error", "connection to bridge lost");
    }
    this.notify();
  }

  noteError(text: string): void {
    this.log("error", text);
    this.notify();
  }

  // -- user intents ------------------------------------------------------

  editSource(text: string): void {
    this.state.source = text;
    this.state.dirty = true;
    this.notify();
  }

  setActiveFile(name: string, source: string): void {
    this.state.activeFile = name;
    this.state.source = source;
    this.state.dirty = false;
    this.state.diagnostics = [];
    this.notify();
  }

  runRequested(file: string): void {
    this.state.run = "starting";
    this.state.runFile = file;
    this.state.lastExit = null;
    this.state.diagnostics = [];
    this.log("info", `run ${file}`);
    this.notify();
  }

  stopRequested(): void {
    if (this.state.run === "running" || this.state.run === "starting") {
      this.state.run = "stopping";
      this.notify();
    }
  }

  replSubmitted(line: string): void {
    this.state.replHistory.push(line);
    this.log("repl-in", `› ${line}`);
    this.notify();
  }

  // -- frames from the bridge ---------------------------------------------

  handleFrame(frame: Frame, nowMs: number): void {
    switch (frame.kind) {
      case "STATUS": {
        const { state } = frame;
        if (frame.version !== undefined) {
          this.state.bridgeVersion = frame.version;
        }
        if (frame.scenario !== undefined) {
          this.state.selectedScenario = frame.scenario;
        }
        if (state === "running") {
          this.state.run = "running";
          if (frame.file !== undefined) {
            this.state.runFile = frame.file;
          }
        } else if (state === "idle") {
          this.state.run = "idle";
        } else if (TERMINAL_STATES.has(state)) {
          this.state.run = "idle";
          const exit: RunExit = { status: state };
          if (frame.steps !== undefined) exit.steps = frame.steps;
          if (frame.detail !== undefined) exit.detail = frame.detail;
          this.state.lastExit = exit;
          const steps = frame.steps !== undefined ? ` after ${frame.steps} steps` : "";
          const detail = frame.detail ? ` (${frame.detail})` : "";
          this.log(state === "completed" ? "info" : "error", `${state}${steps}${detail}`);
        } else if (state === "error") {
          this.log("error", `bridge: ${frame.detail ?? "error"}`);
          // a refused RUN never starts, so don't leave the button stuck
          if (this.state.run === "starting" && frame.detail !== "run-in-progress") {
            this.state.run = "idle";
          }
        }
        break;
      }
      case "PRINT":
        this.log("print", frame.line);
        break;
      case "DIAG": {
        this.state.diagnostics.push(frame);
        this.log(
          "error",
          `${frame.file}:${frame.line}:${frame.col}: ${frame.phase}/${frame.category}: ${frame.message}`,
        );
        break;
      }
      case "REPL":
        if (frame.value !== undefined) {
          this.log("repl-value", frame.value);
        } else if (frame.ok) {
          this.log("repl-value", "undefined");
        }
        break;
      case "SCENARIOS":
        this.state.scenarioNames = frame.names;
        break;
      case "FILES":
        this.state.files = frame.entries;
        break;
      case "FILE":
        this.state.activeFile = frame.file;
        this.state.source = frame.source;
        this.state.dirty = false;
        this.state.diagnostics = [];
        this.log("info", `loaded ${frame.file} (rev ${frame.revision})`);
        break;
      case "SAVED": {
        const entry = this.state.files.find((f) => f.name === frame.file);
        if (entry) {
          entry.revisions = Math.max(entry.revisions, frame.revision);
        } else {
          this.state.files.push({ name: frame.file, revisions: frame.revision });
        }
        if (frame.created) {
          this.log("info", `saved ${frame.file} (rev ${frame.revision})`);
        }
        if (frame.file === this.state.activeFile) {
          this.state.dirty = false;
        }
        break;
      }
      case "MANIFEST":
        this.state.manifest = frame.entries;
        break;
      case "STATE":
        this.state.frame = frame.world;
        this.state.frameAtMs = nowMs;
        break;
      case "SCENARIO":
        this.state.scenario = frame.info;
        this.state.selectedScenario = frame.info.name;
        break;
      case "UNKNOWN":
        break;
    }
    this.notify();
  }
}
