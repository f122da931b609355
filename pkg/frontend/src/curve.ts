// Bar chart of guaranteed correct rejections against rejection count.
// Clicking bar r selects the r hypotheses with smallest p-values.

import type { CurveResponse } from "./api";

const WIDTH = 560;
const HEIGHT = 220;
const MARGIN = { left: 34, bottom: 26, top: 8, right: 8 };

export function renderCurve(
  container: HTMLElement,
  curve: CurveResponse,
  onBarClick: (r: number) => void,
): void {
  container.replaceChildren();
  const n = curve.points.length;
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  svg.setAttribute("class", "curve-chart");
  svg.setAttribute("role", "img");

  const plotWidth = WIDTH - MARGIN.left - MARGIN.right;
  const plotHeight = HEIGHT - MARGIN.top - MARGIN.bottom;
  const barSpace = plotWidth / n;
  const maxValue = Math.max(1, ...curve.points.map((p) => p.f_lower));

  for (const { r, f_lower } of curve.points) {
    const height = (f_lower / maxValue) * plotHeight;
    const bar = document.createElementNS("http://www.w3.org/2000/svg", "rect");
    bar.setAttribute("x", String(MARGIN.left + (r - 1) * barSpace + 2));
    bar.setAttribute("y", String(MARGIN.top + plotHeight - height));
    bar.setAttribute("width", String(Math.max(1, barSpace - 4)));
    // zero bars keep a sliver so they stay clickable
    bar.setAttribute("height", String(Math.max(height, 2)));
    bar.setAttribute("class", f_lower > 0 ? "curve-bar" : "curve-bar empty");
    bar.dataset.r = String(r);
    bar.dataset.fLower = String(f_lower);
    const title = document.createElementNS("http://www.w3.org/2000/svg", "title");
    title.textContent = `top ${r}: at least ${f_lower} correct`;
    bar.appendChild(title);
    bar.addEventListener("click", () => onBarClick(r));
    svg.appendChild(bar);

    const label = document.createElementNS("http://www.w3.org/2000/svg", "text");
    label.setAttribute("x", String(MARGIN.left + (r - 1) * barSpace + barSpace / 2));
    label.setAttribute("y", String(HEIGHT - 8));
    label.setAttribute("class", "curve-tick");
    label.setAttribute("text-anchor", "middle");
    label.textContent = String(r);
    svg.appendChild(label);
  }

  const axis = document.createElementNS("http://www.w3.org/2000/svg", "text");
  axis.setAttribute("x", "4");
  axis.setAttribute("y", String(MARGIN.top + 12));
  axis.setAttribute("class", "curve-axis");
  axis.textContent = `≥ correct (max ${maxValue})`;
  svg.appendChild(axis);
  container.appendChild(svg);
}
