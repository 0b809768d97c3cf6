// Turn validated CSV tables into drawable series. Row order is
// preserved exactly as read; only declared axis transforms happen
// later, in the SVG layer.
import { parseFlag, parseNumeric, type CsvTable } from "./csv.js";
import { BUDGET_FIELD_COLUMNS } from "./schema.js";

export interface BudgetPoint {
  x: number;
  y: number;
}

export interface BudgetSeries {
  label: string;
  points: BudgetPoint[];
}

export interface BudgetPanel {
  title: string;
  series: BudgetSeries[];
}

// One panel per variant in encounter order, one series per component
// power field. Non-finite powers mark absent components and are
// simply not drawn.
export function buildBudgetPanels(table: CsvTable): BudgetPanel[] {
  const byVariant = new Map<string, Record<string, string>[]>();
  for (const row of table.rows) {
    const variant = (row["variant"] ?? "").trim();
    if (variant === "") {
      throw new Error('empty value in column "variant"');
    }
    const bucket = byVariant.get(variant);
    if (bucket === undefined) {
      byVariant.set(variant, [row]);
    } else {
      bucket.push(row);
    }
  }
  const panels: BudgetPanel[] = [];
  for (const [variant, rows] of byVariant) {
    const series: BudgetSeries[] = BUDGET_FIELD_COLUMNS.map((field) => {
      const points: BudgetPoint[] = [];
      for (const row of rows) {
        const x = parseNumeric(row["p_tx_dbm"], "p_tx_dbm");
        const y = parseNumeric(row[field], field);
        if (Number.isFinite(x) && Number.isFinite(y)) {
          points.push({ x, y });
        }
      }
      return { label: field, points };
    });
    panels.push({ title: variant, series });
  }
  return panels;
}

export interface SinrPoint {
  x: number;
  mean: number;
  std: number;
  trials: number;
}

export interface SinrSeries {
  label: string;
  points: SinrPoint[];
}

// One series per canceller variant for the transmit-power sweep and
// per (variant, calibration state) for the sample-size sweep. Trials
// sharing an x position aggregate to mean and sample standard
// deviation; a single trial reports zero spread.
export function buildSinrSeries(
  kind: "sinr-ptx" | "sinr-n",
  table: CsvTable,
): SinrSeries[] {
  const xColumn = kind === "sinr-ptx" ? "p_tx_dbm" : "n_est";
  const groups = new Map<string, Map<number, number[]>>();
  for (const row of table.rows) {
    const variant = (row["variant"] ?? "").trim();
    if (variant === "") {
      throw new Error('empty value in column "variant"');
    }
    let label = variant;
    if (kind === "sinr-n") {
      const calibrated = parseFlag(row["calibrated"], "calibrated");
      label = `${variant} ${calibrated ? "calibrated" : "uncalibrated"}`;
    }
    const x = parseNumeric(row[xColumn], xColumn);
    if (!Number.isFinite(x)) {
      continue;
    }
    if (kind === "sinr-n" && x <= 0) {
      throw new Error(
        `column "n_est" must be positive for the log-scaled axis, got ${x}`,
      );
    }
    const y = parseNumeric(row["sinr_db"], "sinr_db");
    let bySample = groups.get(label);
    if (bySample === undefined) {
      bySample = new Map<number, number[]>();
      groups.set(label, bySample);
    }
    let values = bySample.get(x);
    if (values === undefined) {
      values = [];
      bySample.set(x, values);
    }
    if (Number.isFinite(y)) {
      values.push(y);
    }
  }
  const series: SinrSeries[] = [];
  for (const [label, bySample] of groups) {
    const points: SinrPoint[] = [];
    for (const [x, values] of bySample) {
      if (values.length === 0) {
        continue;
      }
      points.push({ x, ...aggregate(values) });
    }
    series.push({ label, points });
  }
  return series;
}

function aggregate(values: number[]): {
  mean: number;
  std: number;
  trials: number;
} {
  const n = values.length;
  let sum = 0;
  for (const v of values) {
    sum += v;
  }
  const mean = sum / n;
  if (n < 2) {
    return { mean, std: 0, trials: n };
  }
  let ss = 0;
  for (const v of values) {
    ss += (v - mean) * (v - mean);
  }
  return { mean, std: Math.sqrt(ss / (n - 1)), trials: n };
}
