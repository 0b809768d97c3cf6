// CSV ingestion shared by every figure kind. Values stay strings at
// this layer; numeric interpretation happens per column because the
// harness encodes absent power components as "-inf".
import Papa from "papaparse";

export interface CsvTable {
  columns: string[];
  rows: Record<string, string>[];
}

export function parseCsv(text: string): CsvTable {
  const parsed = Papa.parse<Record<string, string>>(text, {
    header: true,
    delimiter: ",",
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0]!;
    const where = first.row === undefined ? "" : ` at data row ${first.row}`;
    throw new Error(`CSV parse failed${where}: ${first.message}`);
  }
  const columns = parsed.meta.fields ?? [];
  if (columns.length === 0 || (columns.length === 1 && columns[0] === "")) {
    throw new Error("CSV has no header row");
  }
  return { columns, rows: parsed.data };
}

const SPECIAL_NUMBERS = new Map<string, number>([
  ["inf", Infinity],
  ["+inf", Infinity],
  ["-inf", -Infinity],
  ["infinity", Infinity],
  ["+infinity", Infinity],
  ["-infinity", -Infinity],
  ["nan", NaN],
  ["-nan", NaN],
]);

export function parseNumeric(text: string | undefined, column: string): number {
  const raw = (text ?? "").trim();
  if (SPECIAL_NUMBERS.has(raw.toLowerCase())) {
    return SPECIAL_NUMBERS.get(raw.toLowerCase())!;
  }
  if (raw === "") {
    throw new Error(`empty value in numeric column "${column}"`);
  }
  const value = Number(raw);
  if (Number.isNaN(value)) {
    throw new Error(`cannot parse "${raw}" in numeric column "${column}"`);
  }
  return value;
}

export function parseFlag(text: string | undefined, column: string): boolean {
  const raw = (text ?? "").trim().toLowerCase();
  if (raw === "true") return true;
  if (raw === "false") return false;
  throw new Error(
    `expected "true" or "false" in column "${column}", got "${(text ?? "").trim()}"`,
  );
}
