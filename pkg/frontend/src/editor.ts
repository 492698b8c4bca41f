/**
 * Editor marker rendering.
 *
 * The editor is a plain textarea stacked on a highlight layer; these
 * pure functions turn the source text plus diagnostic spans into the
 * HTML for that layer and for the line-number gutter.  Spans use the
 * bridge convention: 1-based lines and columns, both ends inclusive.
 */

export interface Marker {
  line: number;
  col: number;
  endline: number;
  endcol: number;
  category: string;
  message: string;
}

function escapeHtml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Inclusive 1-based column intervals of `marker` on `lineNo`, clamped to the line. */
function intervalOnLine(
  marker: Marker,
  lineNo: number,
  lineLength: number,
): [number, number] | null {
  if (lineNo < marker.line || lineNo > marker.endline) {
    return null;
  }
  const start = lineNo === marker.line ? marker.col : 1;
  // a span can point just past the text (e.g. at end of file)
  const end = Math.min(lineNo === marker.endline ? marker.endcol : lineLength, lineLength);
  if (lineLength === 0 || start > lineLength) {
    return null;
  }
  return [Math.max(1, start), Math.max(end, Math.max(1, start))];
}

function mergeIntervals(intervals: [number, number][]): [number, number][] {
  const sorted = [...intervals].sort((a, b) => a[0] - b[0]);
  const merged: [number, number][] = [];
  for (const [start, end] of sorted) {
    const last = merged[merged.length - 1];
    if (last && start <= last[1] + 1) {
      last[1] = Math.max(last[1], end);
    } else {
      merged.push([start, end]);
    }
  }
  return merged;
}

/**
 * The highlight-layer HTML: the full source, escaped, with marked spans
 * wrapped in `<mark class="diag">`.  Character content is identical to
 * the source so the layer lines up under the textarea glyph for glyph.
 */
export function markedHtml(source: string, markers: Marker[]): string {
  const lines = source.split("\n");
  const out: string[] = [];
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i]!;
    const lineNo = i + 1;
    const intervals: [number, number][] = [];
    for (const marker of markers) {
      const interval = intervalOnLine(marker, lineNo, line.length);
      if (interval) {
        intervals.push(interval);
      }
    }
    if (intervals.length === 0) {
      out.push(escapeHtml(line));
      continue;
    }
    const merged = mergeIntervals(intervals);
    let html = "";
    let cursor = 0; // 0-based index into the line
    for (const [start, end] of merged) {
      html += escapeHtml(line.slice(cursor, start - 1));
      html += `<mark class="diag">${escapeHtml(line.slice(start - 1, end))}</mark>`;
      cursor = end;
    }
    html += escapeHtml(line.slice(cursor));
    out.push(html);
  }
  return out.join("\n");
}

/** Line numbers for the gutter; lines carrying a marker get a dot. */
export function gutterHtml(source: string, markers: Marker[]): string {
  const lineCount = source.split("\n").length;
  const flagged = new Set<number>();
  for (const marker of markers) {
    for (let line = marker.line; line <= marker.endline; line++) {
      flagged.add(line);
    }
  }
  const out: string[] = [];
  for (let lineNo = 1; lineNo <= lineCount; lineNo++) {
    const cls = flagged.has(lineNo) ? ' class="has-diag"' : "";
    out.push(`<div${cls}>${lineNo}</div>`);
  }
  return out.join("");
}
