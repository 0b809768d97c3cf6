// Orchestrates the pipeline: parse CSV, validate the schema for the
// requested figure kind, build series, emit SVG.
import { readFileSync, writeFileSync } from "node:fs";
import { parseCsv, type CsvTable } from "./csv.js";
import {
  expectedExperiment,
  FIGURE_KINDS,
  isFigureKind,
  validateColumns,
  type FigureKind,
} from "./schema.js";
import { buildBudgetPanels, buildSinrSeries } from "./series.js";
import { renderBudgetSvg, renderSinrSvg } from "./svg.js";

export interface RenderSpec {
  kind: string;
  input: string;
  input2?: string | undefined;
  output: string;
}

function loadTable(kind: FigureKind, csvText: string): CsvTable {
  const table = parseCsv(csvText);
  validateColumns(kind, table);
  const expected = expectedExperiment(kind);
  if (expected !== null) {
    for (const row of table.rows) {
      const got = (row["experiment"] ?? "").trim();
      if (got !== expected) {
        throw new Error(
          `kind "${kind}" expects experiment "${expected}" rows, found "${got}"`,
        );
      }
    }
  }
  return table;
}

export function renderToSvg(
  kind: FigureKind,
  csvText: string,
  extraCsvText?: string,
): string {
  const table = loadTable(kind, csvText);
  if (extraCsvText !== undefined) {
    const extra = loadTable(kind, extraCsvText);
    table.rows.push(...extra.rows);
  }
  if (table.rows.length === 0) {
    throw new Error(`${kind} CSV contains no data rows`);
  }
  if (kind === "budget") {
    return renderBudgetSvg(buildBudgetPanels(table), {
      title: "component power levels",
      xLabel: "transmit power (dBm)",
      yLabel: "power (dBm)",
    });
  }
  const series = buildSinrSeries(kind, table);
  if (kind === "sinr-ptx") {
    return renderSinrSvg(series, {
      logX: false,
      title: "SINR vs transmit power",
      xLabel: "transmit power (dBm)",
      yLabel: "SINR (dB)",
    });
  }
  return renderSinrSvg(series, {
    logX: true,
    title: "SINR vs estimation sample count",
    xLabel: "estimation samples",
    yLabel: "SINR (dB)",
  });
}

export function renderFile(spec: RenderSpec): string {
  if (!isFigureKind(spec.kind)) {
    throw new Error(
      `unknown figure kind "${spec.kind}"; expected one of: ${FIGURE_KINDS.join(", ")}`,
    );
  }
  if (!spec.output.toLowerCase().endsWith(".svg")) {
    throw new Error(
      `output path must end in .svg, got "${spec.output}"`,
    );
  }
  const csvText = readFileSync(spec.input, "utf8");
  const extraCsvText =
    spec.input2 === undefined ? undefined : readFileSync(spec.input2, "utf8");
  const svg = renderToSvg(spec.kind, csvText, extraCsvText);
  writeFileSync(spec.output, svg + "\n");
  return spec.output;
}
