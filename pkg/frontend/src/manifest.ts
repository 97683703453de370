/**
 * Sidecar manifest reader.
 *
 * Every CSV ships with a `<basename>.manifest` holding the full run
 * configuration as `key = value` lines plus `# key: value` provenance
 * comments.  Figures pull their legend text from here so parameters are
 * never re-entered by hand.
 */

import { readFileSync, existsSync } from "node:fs";

export interface Manifest {
  params: Map<string, string>;
  comments: Map<string, string>;
}

export function parseManifest(text: string): Manifest {
  const params = new Map<string, string>();
  const comments = new Map<string, string>();
  for (const raw of text.split(/\r\n|\n/)) {
    const line = raw.trim();
    if (line.length === 0) continue;
    if (line.startsWith("#")) {
      const m = line.slice(1).match(/^\s*([^:]+):\s*(.*)$/);
      if (m) comments.set(m[1].trim(), m[2].trim());
      continue;
    }
    const eq = line.indexOf("=");
    if (eq > 0) {
      params.set(line.slice(0, eq).trim(), line.slice(eq + 1).trim());
    }
  }
  return { params, comments };
}

/** Manifest sitting next to a CSV, or null when absent. */
export function manifestFor(csvPath: string): Manifest | null {
  const path = csvPath.replace(/\.csv$/i, ".manifest");
  if (!existsSync(path)) return null;
  return parseManifest(readFileSync(path, "utf8"));
}

const LEGEND_KEYS = ["d", "r0", "rr", "D", "dt", "n-tx", "particles", "seed", "mode"];

/** Compact one-line parameter description for figure legends. */
export function legendText(manifest: Manifest | null, exclude: string[] = []): string {
  if (manifest === null) return "";
  const parts: string[] = [];
  for (const key of LEGEND_KEYS) {
    if (exclude.includes(key)) continue;
    const value = manifest.params.get(key);
    if (value !== undefined) parts.push(`${key}=${value}`);
  }
  return parts.join(", ");
}
