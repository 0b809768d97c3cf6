#!/usr/bin/env node
// Entry point for the `render` executable.
import { parseArgs } from "node:util";
import { renderFile } from "./render.js";

const USAGE =
  "usage: render --kind <budget|sinr-ptx|sinr-n> --in <csv> [--in2 <csv>] --out <img>";

function fail(message: string): never {
  process.stderr.write(`error: ${message}\n${USAGE}\n`);
  process.exit(2);
}

function main(argv: string[]): void {
  let values: {
    kind?: string;
    in?: string;
    in2?: string;
    out?: string;
    help?: boolean;
  };
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        kind: { type: "string" },
        in: { type: "string" },
        in2: { type: "string" },
        out: { type: "string" },
        help: { type: "boolean", short: "h" },
      },
      strict: true,
      allowPositionals: false,
    }));
  } catch (err) {
    fail((err as Error).message);
  }
  if (values.help === true) {
    process.stdout.write(`${USAGE}\n`);
    return;
  }
  const missing: string[] = [];
  if (values.kind === undefined) missing.push("--kind");
  if (values.in === undefined) missing.push("--in");
  if (values.out === undefined) missing.push("--out");
  if (missing.length > 0) {
    fail(`missing required option(s): ${missing.join(", ")}`);
  }
  try {
    const written = renderFile({
      kind: values.kind!,
      input: values.in!,
      input2: values.in2,
      output: values.out!,
    });
    process.stdout.write(`wrote ${written}\n`);
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    process.exit(2);
  }
}

main(process.argv.slice(2));
