// Sortable checkbox table of hypotheses.

import type { SelectionState, SortKey } from "./state";

export function renderTable(
  container: HTMLElement,
  state: SelectionState,
  onToggle: (name: string) => void,
  onSort: (key: SortKey) => void,
): void {
  container.replaceChildren();
  const table = document.createElement("table");
  table.className = "hypothesis-table";

  const head = table.createTHead().insertRow();
  const columns: Array<[SortKey, string]> = [
    ["selected", "reject"],
    ["name", "hypothesis"],
    ["p", state.pvalues ? "p-value" : "z-score"],
  ];
  for (const [key, label] of columns) {
    const th = document.createElement("th");
    const button = document.createElement("button");
    button.type = "button";
    button.dataset.sort = key;
    const arrow = state.sortKey === key ? (state.sortAscending ? " ▲" : " ▼") : "";
    button.textContent = label + arrow;
    button.addEventListener("click", () => onSort(key));
    th.appendChild(button);
    head.appendChild(th);
  }

  const body = table.createTBody();
  for (const i of state.rowOrder()) {
    const name = state.names[i];
    const row = body.insertRow();
    row.dataset.name = name;
    const tickCell = row.insertCell();
    const tick = document.createElement("input");
    tick.type = "checkbox";
    tick.checked = state.selected.has(name);
    tick.dataset.name = name;
    tick.addEventListener("change", () => onToggle(name));
    tickCell.appendChild(tick);
    row.insertCell().textContent = name;
    const value = state.pvalues ? state.pvalues[i] : state.zscores?.[i] ?? NaN;
    row.insertCell().textContent = value.toFixed(4).replace(/0+$/, "").replace(/\.$/, ".0");
  }
  container.appendChild(table);
}
