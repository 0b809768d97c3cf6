// Pure SVG string construction. Rendering depends only on the series
// passed in: no timestamps, random identifiers, or environment
// lookups, so equal inputs yield byte-equal documents.
import {
  scaleLinear,
  scaleLog,
  type ScaleLinear,
  type ScaleLogarithmic,
} from "d3-scale";
import type { BudgetPanel, SinrSeries } from "./series.js";

type Scale = ScaleLinear<number, number> | ScaleLogarithmic<number, number>;

export const PALETTE = [
  "#1f77b4",
  "#ff7f0e",
  "#2ca02c",
  "#d62728",
  "#9467bd",
  "#8c564b",
  "#e377c2",
  "#7f7f7f",
  "#bcbd22",
  "#17becf",
] as const;

function colorFor(index: number): string {
  return PALETTE[index % PALETTE.length]!;
}

// Coordinates round to 0.01 px so formatting is stable across runs.
export function fmt(value: number): string {
  const rounded = Math.round(value * 100) / 100;
  return Object.is(rounded, -0) ? "0" : String(rounded);
}

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&apos;");
}

function finiteExtent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo > hi) {
    throw new Error("no finite data points to draw");
  }
  return [lo, hi];
}

function padLinear([lo, hi]: [number, number]): [number, number] {
  if (lo === hi) {
    return [lo - 1, hi + 1];
  }
  const pad = 0.05 * (hi - lo);
  return [lo - pad, hi + pad];
}

function padLog([lo, hi]: [number, number]): [number, number] {
  if (lo === hi) {
    return [lo / 2, hi * 2];
  }
  return [lo, hi];
}

export function decadeTicks([lo, hi]: [number, number]): number[] {
  const first = Math.ceil(Math.log10(lo) - 1e-9);
  const last = Math.floor(Math.log10(hi) + 1e-9);
  const ticks: number[] = [];
  for (let e = first; e <= last; e++) {
    ticks.push(Math.pow(10, e));
  }
  return ticks;
}

function decadeLabel(value: number): string {
  const exponent = Math.round(Math.log10(value));
  return `10<tspan font-size="8" dy="-6">${exponent}</tspan>`;
}

interface TickLabel {
  value: number;
  markup: string;
}

function xTicks(scale: Scale, logX: boolean): TickLabel[] {
  if (logX) {
    const domain = scale.domain() as [number, number];
    const decades = decadeTicks(domain);
    if (decades.length >= 2) {
      return decades.map((value) => ({ value, markup: decadeLabel(value) }));
    }
  }
  return scale.ticks(logX ? 5 : 7).map((value) => ({
    value,
    markup: esc(String(value)),
  }));
}

function xAxisSvg(
  scale: Scale,
  ticks: TickLabel[],
  plotW: number,
  plotH: number,
  label: string,
): string {
  const parts: string[] = [
    `<line class="axis-line" x1="0" y1="${fmt(plotH)}" x2="${fmt(plotW)}" y2="${fmt(plotH)}" stroke="#444"/>`,
  ];
  for (const tick of ticks) {
    parts.push(
      `<g class="x-tick" data-value="${esc(String(tick.value))}" transform="translate(${fmt(scale(tick.value))},${fmt(plotH)})">` +
        `<line y2="5" stroke="#444"/>` +
        `<text y="19" text-anchor="middle" fill="#333">${tick.markup}</text>` +
        `</g>`,
    );
  }
  parts.push(
    `<text class="x-label" x="${fmt(plotW / 2)}" y="${fmt(plotH + 40)}" text-anchor="middle" fill="#111">${esc(label)}</text>`,
  );
  return `<g class="x-axis">${parts.join("")}</g>`;
}

function yAxisSvg(
  scale: Scale,
  plotW: number,
  plotH: number,
  label: string,
): string {
  const parts: string[] = [
    `<line class="axis-line" x1="0" y1="0" x2="0" y2="${fmt(plotH)}" stroke="#444"/>`,
  ];
  for (const tick of scale.ticks(7)) {
    parts.push(
      `<g class="y-tick" data-value="${esc(String(tick))}" transform="translate(0,${fmt(scale(tick))})">` +
        `<line x2="-5" stroke="#444"/>` +
        `<line class="grid" x2="${fmt(plotW)}" stroke="#000" stroke-opacity="0.07"/>` +
        `<text x="-9" dy="0.32em" text-anchor="end" fill="#333">${esc(String(tick))}</text>` +
        `</g>`,
    );
  }
  parts.push(
    `<text class="y-label" transform="translate(-48,${fmt(plotH / 2)}) rotate(-90)" text-anchor="middle" fill="#111">${esc(label)}</text>`,
  );
  return `<g class="y-axis">${parts.join("")}</g>`;
}

function legendSvg(labels: string[], x0: number, y: number): string {
  const parts: string[] = [];
  let x = x0;
  labels.forEach((label, i) => {
    parts.push(
      `<g class="legend-item" transform="translate(${fmt(x)},${fmt(y)})">` +
        `<rect width="12" height="12" y="-10" fill="${colorFor(i)}"/>` +
        `<text x="16" fill="#111">${esc(label)}</text>` +
        `</g>`,
    );
    x += 16 + label.length * 6.6 + 18;
  });
  return `<g class="legend">${parts.join("")}</g>`;
}

function linePath(pts: Array<{ px: number; py: number }>): string {
  return pts
    .map((p, i) => `${i === 0 ? "M" : "L"}${fmt(p.px)},${fmt(p.py)}`)
    .join("");
}

function svgDocument(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="system-ui, sans-serif" font-size="11">` +
    `<rect class="bg" width="${width}" height="${height}" fill="#ffffff"/>` +
    body +
    `</svg>`
  );
}

export interface BudgetRenderOptions {
  title: string;
  xLabel: string;
  yLabel: string;
}

export function renderBudgetSvg(
  panels: BudgetPanel[],
  opts: BudgetRenderOptions,
): string {
  const plotW = 330;
  const plotH = 300;
  const marginLeft = 64;
  const marginRight = 18;
  const top = 68;
  const bottom = 58;
  const stride = marginLeft + plotW + marginRight;
  const width = stride * Math.max(panels.length, 1);
  const height = top + plotH + bottom;

  const xs: number[] = [];
  const ys: number[] = [];
  for (const panel of panels) {
    for (const series of panel.series) {
      for (const point of series.points) {
        xs.push(point.x);
        ys.push(point.y);
      }
    }
  }
  const x = scaleLinear()
    .domain(padLinear(finiteExtent(xs)))
    .range([0, plotW])
    .nice();
  const y = scaleLinear()
    .domain(padLinear(finiteExtent(ys)))
    .range([plotH, 0])
    .nice();
  const ticks = xTicks(x, false);

  const fieldLabels = panels[0] !== undefined
    ? panels[0].series.map((s) => s.label)
    : [];
  const parts: string[] = [
    `<text class="title" x="${fmt(width / 2)}" y="24" text-anchor="middle" font-size="15" font-weight="600" fill="#111">${esc(opts.title)}</text>`,
    legendSvg(fieldLabels, marginLeft, 46),
  ];
  panels.forEach((panel, panelIndex) => {
    const inner: string[] = [
      xAxisSvg(x, ticks, plotW, plotH, opts.xLabel),
      yAxisSvg(y, plotW, plotH, opts.yLabel),
      `<text class="panel-title" x="${fmt(plotW / 2)}" y="-8" text-anchor="middle" font-weight="600" fill="#111">${esc(panel.title)}</text>`,
    ];
    panel.series.forEach((series, seriesIndex) => {
      const color = colorFor(seriesIndex);
      const pts = series.points.map((p) => ({ px: x(p.x), py: y(p.y) }));
      const pieces: string[] = [];
      if (pts.length >= 2) {
        pieces.push(
          `<path class="line" d="${linePath(pts)}" fill="none" stroke="${color}" stroke-width="1.6"/>`,
        );
      }
      for (const p of pts) {
        pieces.push(
          `<circle class="pt" cx="${fmt(p.px)}" cy="${fmt(p.py)}" r="2.5" fill="${color}"/>`,
        );
      }
      inner.push(
        `<g class="series" data-series="${esc(series.label)}">${pieces.join("")}</g>`,
      );
    });
    parts.push(
      `<g class="panel" data-panel="${esc(panel.title)}" transform="translate(${fmt(panelIndex * stride + marginLeft)},${fmt(top)})">${inner.join("")}</g>`,
    );
  });
  return svgDocument(width, height, parts.join(""));
}

export interface SinrRenderOptions {
  logX: boolean;
  title: string;
  xLabel: string;
  yLabel: string;
}

export function renderSinrSvg(
  series: SinrSeries[],
  opts: SinrRenderOptions,
): string {
  const plotW = 640;
  const plotH = 330;
  const marginLeft = 64;
  const top = 68;
  const width = marginLeft + plotW + 24;
  const height = top + plotH + 58;

  const xs: number[] = [];
  const ys: number[] = [];
  for (const s of series) {
    for (const p of s.points) {
      xs.push(p.x);
      ys.push(p.mean - p.std, p.mean + p.std);
    }
  }
  const xDomainRaw = finiteExtent(xs);
  const x: Scale = opts.logX
    ? scaleLog().domain(padLog(xDomainRaw)).range([0, plotW])
    : scaleLinear().domain(padLinear(xDomainRaw)).range([0, plotW]).nice();
  const y = scaleLinear()
    .domain(padLinear(finiteExtent(ys)))
    .range([plotH, 0])
    .nice();

  const parts: string[] = [
    `<text class="title" x="${fmt(width / 2)}" y="24" text-anchor="middle" font-size="15" font-weight="600" fill="#111">${esc(opts.title)}</text>`,
    legendSvg(series.map((s) => s.label), marginLeft, 46),
  ];
  const inner: string[] = [
    xAxisSvg(x, xTicks(x, opts.logX), plotW, plotH, opts.xLabel),
    yAxisSvg(y, plotW, plotH, opts.yLabel),
  ];
  series.forEach((s, seriesIndex) => {
    const color = colorFor(seriesIndex);
    const pts = s.points.map((p) => ({
      px: x(p.x),
      upper: y(p.mean + p.std),
      lower: y(p.mean - p.std),
      py: y(p.mean),
    }));
    const pieces: string[] = [];
    if (pts.length >= 1) {
      const forward = pts
        .map((p, i) => `${i === 0 ? "M" : "L"}${fmt(p.px)},${fmt(p.upper)}`)
        .join("");
      const backward = [...pts]
        .reverse()
        .map((p) => `L${fmt(p.px)},${fmt(p.lower)}`)
        .join("");
      pieces.push(
        `<path class="band" d="${forward}${backward}Z" fill="${color}" fill-opacity="0.18" stroke="none"/>`,
      );
    }
    if (pts.length >= 2) {
      pieces.push(
        `<path class="line" d="${linePath(pts)}" fill="none" stroke="${color}" stroke-width="1.8"/>`,
      );
    }
    for (const p of pts) {
      pieces.push(
        `<circle class="pt" cx="${fmt(p.px)}" cy="${fmt(p.py)}" r="3" fill="${color}"/>`,
      );
    }
    inner.push(
      `<g class="series" data-series="${esc(s.label)}">${pieces.join("")}</g>`,
    );
  });
  parts.push(
    `<g class="panel" transform="translate(${fmt(marginLeft)},${fmt(top)})">${inner.join("")}</g>`,
  );
  return svgDocument(width, height, parts.join(""));
}
