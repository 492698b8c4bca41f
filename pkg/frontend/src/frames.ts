/**
 * Typed views over decoded bridge frames.
 *
 * The bridge speaks a small vocabulary; everything the IDE consumes is
 * normalized here into plain objects so the store and renderer never
 * touch raw key=value fields.
 */

import { Message, WireError, decodeText } from "./wire.js";

export interface StatusFrame {
  kind: "STATUS";
  state: string;
  detail?: string;
  steps?: number;
  version?: string;
  scenario?: string;
  file?: string;
}

export interface PrintFrame {
  kind: "PRINT";
  line: string;
}

export interface DiagFrame {
  kind: "DIAG";
  file: string;
  line: number;
  col: number;
  endline: number;
  endcol: number;
  phase: string;
  category: string;
  message: string;
}

export interface ReplFrame {
  kind: "REPL";
  ok: boolean;
  value?: string;
}

export interface ScenariosFrame {
  kind: "SCENARIOS";
  names: string[];
}

export interface FilesFrame {
  kind: "FILES";
  entries: { name: string; revisions: number }[];
}

export interface FileFrame {
  kind: "FILE";
  file: string;
  revision: number;
  source: string;
}

export interface SavedFrame {
  kind: "SAVED";
  file: string;
  revision: number;
  created: boolean;
}

export interface ManifestEntry {
  namespace: string;
  name: string;
  params: string[];
  layer: string;
  kind: string;
  result: string;
  blocking: boolean;
  variadic: boolean;
}

export interface ManifestFrame {
  kind: "MANIFEST";
  entries: ManifestEntry[];
}

export interface RobotFrame {
  id: number;
  x: number;
  y: number;
  th: number;
  vx: number;
  vy: number;
  w: number;
  dribbling: boolean;
  halted: boolean;
}

export interface WorldFrame {
  seq: number;
  t: number;
  robots: RobotFrame[];
  ball: { x: number; y: number; vx: number; vy: number };
  /** frames the bridge discarded because this client was slow */
  dropped?: number;
}

export interface StateFrame {
  kind: "STATE";
  world: WorldFrame;
}

export interface Obstacle {
  x: number;
  y: number;
  r: number;
}

export interface ScenarioInfo {
  name: string;
  fieldHalfX: number;
  fieldHalfY: number;
  robotRadius: number;
  ballRadius: number;
  obstacles: Obstacle[];
}

export interface ScenarioFrame {
  kind: "SCENARIO";
  info: ScenarioInfo;
}

export interface UnknownFrame {
  kind: "UNKNOWN";
  raw: Message;
}

export type Frame =
  | StatusFrame
  | PrintFrame
  | DiagFrame
  | ReplFrame
  | ScenariosFrame
  | FilesFrame
  | FileFrame
  | SavedFrame
  | ManifestFrame
  | StateFrame
  | ScenarioFrame
  | UnknownFrame;

function num(message: Message, key: string): number {
  const raw = message.fields[key];
  if (raw === undefined) {
    throw new WireError(`${message.kind} frame is missing field ${key}`);
  }
  const value = Number(raw);
  if (Number.isNaN(value) && raw !== "nan") {
    throw new WireError(`field ${key}=${JSON.stringify(raw)} is not a number`);
  }
  return value;
}

function text(message: Message, key: string): string {
  const raw = message.fields[key];
  if (raw === undefined) {
    throw new WireError(`${message.kind} frame is missing field ${key}`);
  }
  return raw;
}

function parseWorld(message: Message): WorldFrame {
  const robots: RobotFrame[] = [];
  const ids = new Set<number>();
  for (const key of Object.keys(message.fields)) {
    const match = /^r(\d+)\./.exec(key);
    if (match) {
      ids.add(Number(match[1]));
    }
  }
  for (const id of [...ids].sort((a, b) => a - b)) {
    const p = `r${id}`;
    robots.push({
      id,
      x: num(message, `${p}.x`),
      y: num(message, `${p}.y`),
      th: num(message, `${p}.th`),
      vx: num(message, `${p}.vx`),
      vy: num(message, `${p}.vy`),
      w: num(message, `${p}.w`),
      dribbling: message.fields[`${p}.drb`] === "true",
      halted: message.fields[`${p}.halt`] === "true",
    });
  }
  const world: WorldFrame = {
    seq: num(message, "seq"),
    t: num(message, "t"),
    robots,
    ball: {
      x: num(message, "b.x"),
      y: num(message, "b.y"),
      vx: num(message, "b.vx"),
      vy: num(message, "b.vy"),
    },
  };
  if (message.fields["dropped"] !== undefined) {
    world.dropped = num(message, "dropped");
  }
  return world;
}

function parseScenario(message: Message): ScenarioInfo {
  const obstacles: Obstacle[] = [];
  const obs = message.fields["obs"];
  if (obs) {
    for (const part of obs.split(";")) {
      const coords = part.split(",").map(Number);
      if (coords.length !== 3 || coords.some(Number.isNaN)) {
        throw new WireError(`bad obstacle ${JSON.stringify(part)}`);
      }
      obstacles.push({ x: coords[0]!, y: coords[1]!, r: coords[2]! });
    }
  }
  return {
    name: text(message, "name"),
    fieldHalfX: num(message, "fhx"),
    fieldHalfY: num(message, "fhy"),
    robotRadius: num(message, "rr"),
    ballRadius: num(message, "br"),
    obstacles,
  };
}

/** Normalize one decoded message into a typed frame. */
export function toFrame(message: Message): Frame {
  switch (message.kind) {
    case "STATUS": {
      const frame: StatusFrame = { kind: "STATUS", state: text(message, "state") };
      if (message.fields["detail"] !== undefined) frame.detail = message.fields["detail"];
      if (message.fields["steps"] !== undefined) frame.steps = num(message, "steps");
      if (message.fields["version"] !== undefined) frame.version = message.fields["version"];
      if (message.fields["scenario"] !== undefined) frame.scenario = message.fields["scenario"];
      if (message.fields["file"] !== undefined) frame.file = message.fields["file"];
      return frame;
    }
    case "PRINT":
      return { kind: "PRINT", line: text(message, "line") };
    case "DIAG":
      return {
        kind: "DIAG",
        file: text(message, "file"),
        line: num(message, "line"),
        col: num(message, "col"),
        endline: num(message, "endline"),
        endcol: num(message, "endcol"),
        phase: text(message, "phase"),
        category: text(message, "category"),
        message: text(message, "message"),
      };
    case "REPL": {
      const frame: ReplFrame = { kind: "REPL", ok: message.fields["ok"] === "true" };
      if (message.fields["value"] !== undefined) frame.value = message.fields["value"];
      return frame;
    }
    case "SCENARIOS": {
      const names = text(message, "names");
      return { kind: "SCENARIOS", names: names ? names.split(",") : [] };
    }
    case "FILES": {
      const names = text(message, "names");
      const revisions = text(message, "revisions");
      const nameList = names ? names.split(",") : [];
      const revList = revisions ? revisions.split(",").map(Number) : [];
      return {
        kind: "FILES",
        entries: nameList.map((name, i) => ({ name, revisions: revList[i] ?? 0 })),
      };
    }
    case "FILE":
      return {
        kind: "FILE",
        file: text(message, "file"),
        revision: num(message, "revision"),
        source: text(message, "source"),
      };
    case "SAVED":
      return {
        kind: "SAVED",
        file: text(message, "file"),
        revision: num(message, "revision"),
        created: message.fields["created"] === "true",
      };
    case "MANIFEST": {
      const parsed = JSON.parse(text(message, "apis")) as { entries?: ManifestEntry[] };
      return { kind: "MANIFEST", entries: parsed.entries ?? [] };
    }
    case "STATE":
      return { kind: "STATE", world: parseWorld(message) };
    case "SCENARIO":
      return { kind: "SCENARIO", info: parseScenario(message) };
    default:
      return { kind: "UNKNOWN", raw: message };
  }
}

/** Decode one WebSocket text payload into a typed frame. */
export function parseFrame(payload: string): Frame {
  return toFrame(decodeText(payload));
}
