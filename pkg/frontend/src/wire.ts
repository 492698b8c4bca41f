/**
 * Text-frame codec for the bridge WebSocket.
 *
 * Frames are single lines of the form `KIND key=value key=value ...`.
 * Five characters are escaped inside values (space, percent, equals,
 * newline, carriage return); everything else travels literally.  The
 * decoder accepts any `%XX` hex escape.
 */

export class WireError extends Error {}

const ESCAPES: ReadonlyMap<string, string> = new Map([
  [" ", "%20"],
  ["%", "%25"],
  ["=", "%3D"],
  ["\n", "%0A"],
  ["\r", "%0D"],
]);

const KIND_RE = /^[A-Z_]+$/;
const HEX_RE = /^[0-9A-Fa-f]{2}$/;

export function escapeValue(value: string): string {
  let out = "";
  for (const ch of value) {
    out += ESCAPES.get(ch) ?? ch;
  }
  return out;
}

export function unescapeValue(value: string): string {
  if (!value.includes("%")) {
    return value;
  }
  let out = "";
  let i = 0;
  while (i < value.length) {
    const ch = value[i]!;
    if (ch === "%") {
      const code = value.slice(i + 1, i + 3);
      if (code.length !== 2) {
        throw new WireError(`truncated escape in ${JSON.stringify(value)}`);
      }
      if (!HEX_RE.test(code)) {
        throw new WireError(`bad escape %${code} in ${JSON.stringify(value)}`);
      }
      out += String.fromCharCode(parseInt(code, 16));
      i += 3;
    } else {
      out += ch;
      i += 1;
    }
  }
  return out;
}

/** A decoded frame: the kind plus its key=value fields (last key wins). */
export interface Message {
  kind: string;
  fields: Record<string, string>;
}

export function encodeText(kind: string, fields: Record<string, string> = {}): string {
  if (!KIND_RE.test(kind)) {
    throw new WireError(`bad message kind ${JSON.stringify(kind)}`);
  }
  const parts = [kind];
  for (const [key, value] of Object.entries(fields)) {
    if (!key || [...key].some((ch) => ESCAPES.has(ch))) {
      throw new WireError(`bad field name ${JSON.stringify(key)}`);
    }
    parts.push(`${key}=${escapeValue(value)}`);
  }
  return parts.join(" ");
}

export function decodeText(text: string): Message {
  const line = text.replace(/[\r\n]+$/, "");
  if (!line) {
    throw new WireError("empty frame");
  }
  const parts = line.split(" ");
  const kind = parts[0]!;
  if (!KIND_RE.test(kind)) {
    throw new WireError(`unknown message kind ${JSON.stringify(kind)}`);
  }
  const fields: Record<string, string> = {};
  for (const part of parts.slice(1)) {
    if (!part) {
      throw new WireError("empty field (double space?)");
    }
    const eq = part.indexOf("=");
    if (eq <= 0) {
      throw new WireError(`field ${JSON.stringify(part)} is not key=value`);
    }
    fields[part.slice(0, eq)] = unescapeValue(part.slice(eq + 1));
  }
  return { kind, fields };
}
