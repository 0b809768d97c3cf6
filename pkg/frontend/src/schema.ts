// Column contracts for the harness CSV outputs. The renderer never
// recomputes simulation quantities; it only reads these columns.
import type { CsvTable } from "./csv.js";

export type FigureKind = "budget" | "sinr-ptx" | "sinr-n";

export const FIGURE_KINDS: readonly FigureKind[] = [
  "budget",
  "sinr-ptx",
  "sinr-n",
];

export function isFigureKind(value: string): value is FigureKind {
  return (FIGURE_KINDS as readonly string[]).includes(value);
}

export const BUDGET_COLUMNS = [
  "variant",
  "p_tx_dbm",
  "g_rx_db",
  "p_soi_dbm",
  "p_n_dbm",
  "p_si_dbm",
  "p_si_im_dbm",
  "p_nl_tx_dbm",
  "p_nl_rx_dbm",
  "p_q_tot_dbm",
  "sinr_db",
] as const;

export const SWEEP_COLUMNS = [
  "experiment",
  "variant",
  "p_tx_dbm",
  "n_est",
  "calibrated",
  "trial",
  "seed",
  "sinr_db",
  "warnings",
] as const;

// Component power fields drawn as budget lines. The gain and SINR
// columns travel in the same CSV but are dB ratios, not dBm powers,
// so they stay off the power axis.
export const BUDGET_FIELD_COLUMNS = [
  "p_soi_dbm",
  "p_n_dbm",
  "p_si_dbm",
  "p_si_im_dbm",
  "p_nl_tx_dbm",
  "p_nl_rx_dbm",
  "p_q_tot_dbm",
] as const;

export function requiredColumns(kind: FigureKind): readonly string[] {
  return kind === "budget" ? BUDGET_COLUMNS : SWEEP_COLUMNS;
}

export function validateColumns(kind: FigureKind, table: CsvTable): void {
  for (const name of requiredColumns(kind)) {
    if (!table.columns.includes(name)) {
      throw new Error(`${kind} CSV is missing required column "${name}"`);
    }
  }
}

export function expectedExperiment(kind: FigureKind): string | null {
  if (kind === "sinr-ptx") return "sinr-vs-ptx";
  if (kind === "sinr-n") return "sinr-vs-n";
  return null;
}
