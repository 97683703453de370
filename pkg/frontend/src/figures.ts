/**
 * The three figure kinds.
 *
 * Everything plotted is taken verbatim from the CSVs (counts, expectations,
 * peak metrics); no rescaling or normalization happens here, so simulated
 * markers landing on the analytic curve means the model matched the runs.
 */

import { readFileSync } from "node:fs";
import { column, parseCsv, requireColumns, type Table } from "./csv.js";
import { legendText, manifestFor } from "./manifest.js";
import { DEFAULT_FRAME, SvgCanvas, makeScale, plotArea, type ScaleKind } from "./svg.js";

export type FigureKind = "histogram" | "peak_time_vs_d" | "peak_amp_vs_d";

export interface FigureSpec {
  kind: FigureKind;
  inputs: string[];
  output: string;
  xScale?: ScaleKind;
  yScale?: ScaleKind;
}

export const REQUIRED_COLUMNS: Record<FigureKind, string[]> = {
  histogram: ["bin_start_s", "bin_end_s", "sim_count", "analytic_expected", "poisson_sigma"],
  peak_time_vs_d: ["d_um", "D_um2_s", "analytic_tpeak_s", "sim_tpeak_s", "sim_std_s", "rel_err"],
  peak_amp_vs_d: ["d_um", "rr_um", "D_um2_s", "analytic_npeak", "sim_npeak", "sim_std", "rel_err"],
};

const SERIES_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"];
const SIM_COLOR = "#ff7f0e";

interface LoadedInput {
  path: string;
  table: Table;
  legend: string;
}

function loadInputs(spec: FigureSpec): LoadedInput[] {
  if (spec.inputs.length === 0) {
    throw new Error("no input CSVs given");
  }
  // the sweep figures plot against d, so the baseline d is not legend-worthy
  const exclude = spec.kind === "histogram" ? [] : ["d", "r0"];
  return spec.inputs.map((path) => {
    const table = parseCsv(readFileSync(path, "utf8"));
    requireColumns(table, REQUIRED_COLUMNS[spec.kind]);
    return { path, table, legend: legendText(manifestFor(path), exclude) };
  });
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (Number.isFinite(v)) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (!(lo < Infinity)) throw new Error("no finite values to plot");
  return [lo, hi];
}

function renderHistogram(spec: FigureSpec): string {
  const input = loadInputs(spec)[0];
  const starts = column(input.table, "bin_start_s");
  const ends = column(input.table, "bin_end_s");
  const counts = column(input.table, "sim_count");
  const expected = column(input.table, "analytic_expected");

  const canvas = new SvgCanvas(DEFAULT_FRAME);
  const area = plotArea(DEFAULT_FRAME);
  const xs = makeScale(spec.xScale ?? "linear", [starts[0], ends[ends.length - 1]], area.x);
  const yTop = Math.max(...counts, ...expected) * 1.08 || 1;
  const ys = makeScale(spec.yScale ?? "linear", [0, yTop], area.y);

  for (let i = 0; i < counts.length; i++) {
    if (counts[i] <= 0) continue;
    const x0 = xs.apply(starts[i]);
    const x1 = xs.apply(ends[i]);
    canvas.bar(x0, ys.apply(counts[i]), x1 - x0, ys.apply(0) - ys.apply(counts[i]), "#9ecae1");
  }
  canvas.path(
    starts.map((s, i): [number, number] => [
      xs.apply((s + ends[i]) / 2),
      ys.apply(expected[i]),
    ]),
    SERIES_COLORS[0],
  );
  canvas.axes(xs, ys, "time (s)", "molecules absorbed per bin");
  canvas.title("Absorption histogram: simulation vs analytic expectation");
  canvas.legend([
    { label: `simulated counts ${input.legend}`.trim(), color: "#9ecae1" },
    { label: "analytic per-bin expectation", color: SERIES_COLORS[0] },
  ]);
  return canvas.render();
}

function renderSweep(spec: FigureSpec): string {
  const isTime = spec.kind === "peak_time_vs_d";
  const analyticCol = isTime ? "analytic_tpeak_s" : "analytic_npeak";
  const simCol = isTime ? "sim_tpeak_s" : "sim_npeak";
  const stdCol = isTime ? "sim_std_s" : "sim_std";
  const inputs = loadInputs(spec);

  const allD: number[] = [];
  const allY: number[] = [];
  for (const input of inputs) {
    allD.push(...column(input.table, "d_um"));
    for (const col of [analyticCol, simCol]) {
      allY.push(...column(input.table, col).filter((v) => v > 0));
    }
  }
  const canvas = new SvgCanvas(DEFAULT_FRAME);
  const area = plotArea(DEFAULT_FRAME);
  const xKind = spec.xScale ?? "linear";
  const yKind = spec.yScale ?? (isTime ? "linear" : "log");
  const [dLo, dHi] = extent(allD);
  const [yLo, yHi] = extent(allY);
  const xs = makeScale(xKind, [dLo, dHi], area.x);
  const pad = yKind === "log" ? [yLo / 1.4, yHi * 1.4] : [0, yHi * 1.1];
  const ys = makeScale(yKind, [pad[0], pad[1]], area.y);

  const legendEntries: Array<{ label: string; color: string; marker?: boolean }> = [];
  inputs.forEach((input, idx) => {
    const color = SERIES_COLORS[idx % SERIES_COLORS.length];
    const d = column(input.table, "d_um");
    const analytic = column(input.table, analyticCol);
    const sim = column(input.table, simCol);
    const std = column(input.table, stdCol);
    canvas.path(d.map((v, i): [number, number] => [xs.apply(v), ys.apply(analytic[i])]), color);
    for (let i = 0; i < d.length; i++) {
      const px = xs.apply(d[i]);
      if (std[i] > 0 && (yKind !== "log" || sim[i] - std[i] > 0)) {
        canvas.errorBar(px, ys.apply(sim[i] - std[i]), ys.apply(sim[i] + std[i]), SIM_COLOR);
      }
      canvas.marker(px, ys.apply(sim[i]), SIM_COLOR);
    }
    legendEntries.push({ label: `analytic ${input.legend}`.trim(), color });
  });
  legendEntries.push({ label: "simulation", color: SIM_COLOR, marker: true });

  canvas.axes(xs, ys, "distance d (um)", isTime ? "peak time (s)" : "peak amplitude (molecules/bin)");
  canvas.title(
    isTime ? "Pulse peak time vs distance" : "Pulse peak amplitude vs distance",
  );
  canvas.legend(legendEntries);
  return canvas.render();
}

export function renderFigure(spec: FigureSpec): string {
  switch (spec.kind) {
    case "histogram":
      return renderHistogram(spec);
    case "peak_time_vs_d":
    case "peak_amp_vs_d":
      return renderSweep(spec);
  }
}
