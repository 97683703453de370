/**
 * Minimal SVG plotting toolkit: scales, axes, and shape helpers that
 * assemble an SVG document as a string.  No DOM, no dependencies, and no
 * nondeterminism: the same inputs always produce the same bytes.
 */

export type ScaleKind = "linear" | "log";

export interface Scale {
  kind: ScaleKind;
  domain: [number, number];
  range: [number, number];
  apply(value: number): number;
  ticks(count: number): number[];
}

export function makeScale(kind: ScaleKind, domain: [number, number], range: [number, number]): Scale {
  let [d0, d1] = domain;
  if (kind === "log" && (d0 <= 0 || d1 <= 0)) {
    throw new Error(`log scale needs a positive domain, got [${d0}, ${d1}]`);
  }
  if (d0 === d1) {
    // degenerate domain: widen symmetrically so points land mid-range
    d0 = d0 - (Math.abs(d0) || 1) * 0.5;
    d1 = d1 + (Math.abs(d1) || 1) * 0.5;
    if (kind === "log" && d0 <= 0) d0 = d1 / 10;
  }
  const fwd = (v: number) => (kind === "log" ? Math.log10(v) : v);
  const lo = fwd(d0);
  const hi = fwd(d1);
  const apply = (value: number) =>
    range[0] + ((fwd(value) - lo) / (hi - lo)) * (range[1] - range[0]);

  const ticks = (count: number): number[] => {
    if (kind === "log") {
      const out: number[] = [];
      for (let e = Math.ceil(lo); e <= Math.floor(hi); e++) out.push(10 ** e);
      if (out.length >= 2) return out;
      // narrow log range: fall back to a few linear ticks
    }
    const span = d1 - d0;
    const step = 10 ** Math.floor(Math.log10(span / count));
    const mult = span / count / step >= 5 ? 5 : span / count / step >= 2 ? 2 : 1;
    const s = step * mult;
    const out: number[] = [];
    for (let v = Math.ceil(d0 / s) * s; v <= d1 + 1e-12 * span; v += s) out.push(v);
    return out;
  };

  return { kind, domain: [d0, d1], range, apply, ticks };
}

export function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(0).replace("+", "");
  return String(Number(v.toPrecision(6)));
}

const esc = (s: string) => s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export interface Frame {
  width: number;
  height: number;
  margin: { top: number; right: number; bottom: number; left: number };
}

export const DEFAULT_FRAME: Frame = {
  width: 760,
  height: 520,
  margin: { top: 48, right: 24, bottom: 64, left: 78 },
};

export class SvgCanvas {
  private parts: string[] = [];

  constructor(readonly frame: Frame) {}

  add(fragment: string): void {
    this.parts.push(fragment);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1): void {
    this.add(
      `<line x1="${r2(x1)}" y1="${r2(y1)}" x2="${r2(x2)}" y2="${r2(y2)}" stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  text(x: number, y: number, content: string, opts: { anchor?: string; size?: number; rotate?: boolean } = {}): void {
    const anchor = opts.anchor ?? "middle";
    const size = opts.size ?? 12;
    const transform = opts.rotate ? ` transform="rotate(-90 ${r2(x)} ${r2(y)})"` : "";
    this.add(
      `<text x="${r2(x)}" y="${r2(y)}" text-anchor="${anchor}" font-size="${size}" font-family="sans-serif"${transform}>${esc(content)}</text>`,
    );
  }

  path(points: Array<[number, number]>, stroke: string, width = 1.5): void {
    if (points.length === 0) return;
    const d = points
      .map(([x, y], i) => `${i === 0 ? "M" : "L"}${r2(x)} ${r2(y)}`)
      .join(" ");
    this.add(`<path d="${d}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`);
  }

  marker(x: number, y: number, fill: string, radius = 3.5): void {
    this.add(`<circle cx="${r2(x)}" cy="${r2(y)}" r="${radius}" fill="${fill}" class="marker"/>`);
  }

  bar(x: number, y: number, w: number, h: number, fill: string): void {
    this.add(
      `<rect x="${r2(x)}" y="${r2(y)}" width="${r2(Math.max(w, 0.1))}" height="${r2(Math.max(h, 0))}" fill="${fill}" class="bar"/>`,
    );
  }

  errorBar(x: number, y0: number, y1: number, stroke: string): void {
    this.line(x, y0, x, y1, stroke, 1);
    this.line(x - 3, y0, x + 3, y0, stroke, 1);
    this.line(x - 3, y1, x + 3, y1, stroke, 1);
  }

  axes(xs: Scale, ys: Scale, xLabel: string, yLabel: string): void {
    const { margin, width, height } = this.frame;
    const x0 = margin.left;
    const x1 = width - margin.right;
    const y0 = height - margin.bottom;
    const y1 = margin.top;
    this.line(x0, y0, x1, y0, "#000");
    this.line(x0, y0, x0, y1, "#000");
    for (const t of xs.ticks(6)) {
      const px = xs.apply(t);
      this.line(px, y0, px, y0 + 5, "#000");
      this.text(px, y0 + 20, fmtTick(t));
    }
    for (const t of ys.ticks(6)) {
      const py = ys.apply(t);
      this.line(x0 - 5, py, x0, py, "#000");
      this.text(x0 - 8, py + 4, fmtTick(t), { anchor: "end" });
    }
    this.text((x0 + x1) / 2, height - 16, xLabel);
    this.text(22, (y0 + y1) / 2, yLabel, { rotate: true });
  }

  legend(entries: Array<{ label: string; color: string; marker?: boolean }>): void {
    const x = this.frame.margin.left + 12;
    let y = this.frame.margin.top + 6;
    for (const entry of entries) {
      if (entry.marker) {
        this.marker(x + 9, y - 4, entry.color);
      } else {
        this.line(x, y - 4, x + 18, y - 4, entry.color, 2);
      }
      this.text(x + 26, y, entry.label, { anchor: "start", size: 11 });
      y += 16;
    }
  }

  title(content: string): void {
    this.text(this.frame.width / 2, 24, content, { size: 14 });
  }

  render(): string {
    const { width, height } = this.frame;
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">\n` +
      `<rect width="${width}" height="${height}" fill="white"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

function r2(v: number): number {
  return Math.round(v * 100) / 100;
}

export function plotArea(frame: Frame): { x: [number, number]; y: [number, number] } {
  return {
    x: [frame.margin.left, frame.width - frame.margin.right],
    y: [frame.height - frame.margin.bottom, frame.margin.top],
  };
}
