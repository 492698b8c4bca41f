/**
 * Browser bootstrap: builds the page behavior on top of the store, the
 * bridge client, and the canvas renderer.  All state lives in the store;
 * this module only moves it in and out of the DOM.
 */

import { BridgeClient, SocketLike } from "./client.js";
import { gutterHtml, markedHtml } from "./editor.js";
import { renderScene } from "./scene.js";
import { IdeStore } from "./store.js";

const STARTER_SOURCE = `robot.setRobotId(0);
robot.moveToXY(0.5, 0.0);
console.log("x", robot.getPosX());
console.log("y", robot.getPosY());
`;

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing element #${id}`);
  }
  return el as T;
}

function wsUrl(): string {
  const scheme = location.protocol === "https:" ? "wss" : "ws";
  return `${scheme}://${location.host}/ws`;
}

function offsetOf(source: string, line: number, col: number): number {
  const lines = source.split("\n");
  let offset = 0;
  for (let i = 0; i < Math.min(line - 1, lines.length); i++) {
    offset += lines[i]!.length + 1;
  }
  return offset + col - 1;
}

function main(): void {
  const store = new IdeStore();
  const client = new BridgeClient(wsUrl(), store, {
    socketFactory: (url) => new WebSocket(url) as unknown as SocketLike,
  });

  const runBtn = byId<HTMLButtonElement>("run");
  const stopBtn = byId<HTMLButtonElement>("stop");
  const statusChip = byId<HTMLSpanElement>("status");
  const scenarioSelect = byId<HTMLSelectElement>("scenario");
  const fileList = byId<HTMLUListElement>("file-list");
  const newFileBtn = byId<HTMLButtonElement>("new-file");
  const saveBtn = byId<HTMLButtonElement>("save");
  const fileName = byId<HTMLSpanElement>("file-name");
  const gutter = byId<HTMLDivElement>("gutter");
  const highlight = byId<HTMLPreElement>("highlight");
  const source = byId<HTMLTextAreaElement>("source");
  const diagList = byId<HTMLUListElement>("diagnostics");
  const consoleEl = byId<HTMLDivElement>("console");
  const replInput = byId<HTMLInputElement>("repl");
  const apiList = byId<HTMLUListElement>("api-list");
  const canvas = byId<HTMLCanvasElement>("field");

  source.value = STARTER_SOURCE;
  store.state.source = STARTER_SOURCE;

  // -- editor ------------------------------------------------------------

  function refreshEditor(): void {
    highlight.innerHTML = markedHtml(store.state.source, store.state.diagnostics) + "\n";
    gutter.innerHTML = gutterHtml(store.state.source, store.state.diagnostics);
    fileName.textContent = store.state.activeFile + (store.state.dirty ? " •" : "");
  }

  source.addEventListener("input", () => {
    store.editSource(source.value);
  });
  source.addEventListener("scroll", () => {
    highlight.scrollTop = source.scrollTop;
    highlight.scrollLeft = source.scrollLeft;
    gutter.scrollTop = source.scrollTop;
  });

  // -- toolbar -------------------------------------------------------------

  runBtn.addEventListener("click", () => {
    client.run(store.state.activeFile, source.value);
  });
  stopBtn.addEventListener("click", () => {
    client.stop();
  });
  scenarioSelect.addEventListener("change", () => {
    if (scenarioSelect.value) {
      client.selectScenario(scenarioSelect.value);
    }
  });

  // -- files ------------------------------------------------------------

  newFileBtn.addEventListener("click", () => {
    const name = prompt("file name (ends in .js):", "untitled.js");
    if (!name) {
      return;
    }
    if (!/^[A-Za-z0-9_][A-Za-z0-9_.-]*\.js$/.test(name)) {
      store.noteError(`invalid file name: ${name}`);
      return;
    }
    store.setActiveFile(name, "");
    source.value = "";
    refreshEditor();
  });
  saveBtn.addEventListener("click", () => {
    client.saveFile(store.state.activeFile, source.value);
  });

  // -- REPL --------------------------------------------------------------

  let historyIndex = -1;
  replInput.addEventListener("keydown", (event) => {
    const history = store.state.replHistory;
    if (event.key === "Enter") {
      const line = replInput.value.trim();
      if (line) {
        client.repl(line);
        replInput.value = "";
        historyIndex = -1;
      }
      event.preventDefault();
    } else if (event.key === "ArrowUp" && history.length > 0) {
      historyIndex = historyIndex < 0 ? history.length - 1 : Math.max(0, historyIndex - 1);
      replInput.value = history[historyIndex] ?? "";
      event.preventDefault();
    } else if (event.key === "ArrowDown" && historyIndex >= 0) {
      historyIndex += 1;
      if (historyIndex >= history.length) {
        historyIndex = -1;
        replInput.value = "";
      } else {
        replInput.value = history[historyIndex] ?? "";
      }
      event.preventDefault();
    }
  });

  // -- store-driven DOM updates -------------------------------------------

  let renderedConsole = 0;
  let renderedDiags = -1;
  let renderedFiles = "";
  let renderedScenarios = "";
  let renderedManifest = -1;
  let renderedSource: string | null = null;

  store.subscribe((state) => {
    const busy = state.run === "starting" || state.run === "running" || state.run === "stopping";
    runBtn.disabled = busy || state.connection !== "open";
    stopBtn.disabled = !busy;
    const scenario = state.selectedScenario ?? state.scenario?.name ?? "?";
    statusChip.textContent = `${state.connection} · ${state.run} · ${scenario}`;
    statusChip.dataset["run"] = state.run;
    statusChip.dataset["connection"] = state.connection;

    if (state.console.length !== renderedConsole) {
      // the console is append-only up to its cap; rebuild is cheap and safe
      consoleEl.innerHTML = state.console
        .map((line) => `<div class="${line.kind}">${escapeText(line.text)}</div>`)
        .join("");
      consoleEl.scrollTop = consoleEl.scrollHeight;
      renderedConsole = state.console.length;
    }

    if (state.diagnostics.length !== renderedDiags || state.source !== renderedSource) {
      renderedDiags = state.diagnostics.length;
      renderedSource = state.source;
      if (source.value !== state.source) {
        source.value = state.source;
      }
      refreshEditor();
      diagList.innerHTML = state.diagnostics
        .map(
          (d, i) =>
            `<li data-index="${i}"><b>${d.line}:${d.col}</b> ${escapeText(d.category)} — ` +
            `${escapeText(d.message)}</li>`,
        )
        .join("");
    }

    const filesKey = JSON.stringify(state.files) + "|" + state.activeFile;
    if (filesKey !== renderedFiles) {
      renderedFiles = filesKey;
      fileList.innerHTML = state.files
        .map(
          (f) =>
            `<li data-file="${f.name}"${f.name === state.activeFile ? ' class="active"' : ""}>` +
            `${escapeText(f.name)} <small>r${f.revisions}</small></li>`,
        )
        .join("");
    }

    const scenarioKey = state.scenarioNames.join(",") + "|" + scenario;
    if (scenarioKey !== renderedScenarios) {
      renderedScenarios = scenarioKey;
      scenarioSelect.innerHTML = state.scenarioNames
        .map((name) => `<option${name === scenario ? " selected" : ""}>${name}</option>`)
        .join("");
    }

    if (state.manifest.length !== renderedManifest) {
      renderedManifest = state.manifest.length;
      apiList.innerHTML = state.manifest
        .map((entry) => {
          const params = entry.params.join(", ") + (entry.variadic ? ", …" : "");
          return `<li><code>${entry.namespace}.${entry.name}(${params})</code></li>`;
        })
        .join("");
    }
  });

  diagList.addEventListener("click", (event) => {
    const item = (event.target as HTMLElement).closest("li[data-index]");
    if (!item) {
      return;
    }
    const diag = store.state.diagnostics[Number(item.getAttribute("data-index"))];
    if (!diag) {
      return;
    }
    source.focus();
    source.setSelectionRange(
      offsetOf(source.value, diag.line, diag.col),
      offsetOf(source.value, diag.endline, diag.endcol) + 1,
    );
  });

  fileList.addEventListener("click", (event) => {
    const item = (event.target as HTMLElement).closest("li[data-file]");
    if (item) {
      client.loadFile(item.getAttribute("data-file")!);
    }
  });

  // -- canvas loop ---------------------------------------------------------

  const ctx = canvas.getContext("2d");
  if (!ctx) {
    throw new Error("canvas 2d context unavailable");
  }
  function paint(): void {
    const dpr = window.devicePixelRatio || 1;
    const width = Math.max(1, Math.round(canvas.clientWidth * dpr));
    const height = Math.max(1, Math.round(canvas.clientHeight * dpr));
    if (canvas.width !== width || canvas.height !== height) {
      canvas.width = width;
      canvas.height = height;
    }
    renderScene(ctx!, width, height, {
      frame: store.state.frame,
      scenario: store.state.scenario,
      staleMs: Date.now() - store.state.frameAtMs,
      connected: store.state.connection === "open",
    });
    requestAnimationFrame(paint);
  }
  requestAnimationFrame(paint);

  refreshEditor();
  client.connect();
}

function escapeText(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

main();
