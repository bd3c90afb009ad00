/** Concordance tables.
 *
 * KWIC renders as a three-column table — left context right-aligned, the
 * keyword in a centered middle column, right context left-aligned — so the
 * keywords line up vertically. KWOC and KWAC are left-aligned two-column
 * lists. Clicking any row asks the text pane to scroll to that mention.
 */

import { Client, ConcordanceEntry } from "./api.js";
import { h } from "./dom.js";

export type RowClickHandler = (mentionId: string) => void;

export function kwicRow(entry: ConcordanceEntry, onClick: RowClickHandler): HTMLTableRowElement {
  return h(
    "tr",
    { class: "kwic-row", dataset: { mentionId: entry.mention_id }, onclick: () => onClick(entry.mention_id) },
    h("td", { class: "kwic-left" }, entry.left_context),
    h("td", { class: "kwic-keyword" }, entry.keyword),
    h("td", { class: "kwic-right" }, entry.right_context),
  );
}

export function outFrontRow(
  entry: ConcordanceEntry,
  onClick: RowClickHandler,
): HTMLTableRowElement {
  const body =
    entry.style === "KWOC"
      ? entry.line
      : entry.right_context
        ? `${entry.keyword} ${entry.right_context} / ${entry.left_context}`
        : `${entry.keyword} / ${entry.left_context}`;
  return h(
    "tr",
    { class: "outfront-row", dataset: { mentionId: entry.mention_id }, onclick: () => onClick(entry.mention_id) },
    h("td", { class: "outfront-keyword" }, entry.style === "KWOC" ? entry.keyword : ""),
    h("td", { class: "outfront-body" }, body),
  );
}

export function concordanceTable(
  entries: ConcordanceEntry[],
  style: string,
  onClick: RowClickHandler,
): HTMLTableElement {
  const table = h("table", { class: `concordance concordance-${style.toLowerCase()}` });
  const tbody = h("tbody", {});
  for (const entry of entries) {
    tbody.append(style === "KWIC" ? kwicRow(entry, onClick) : outFrontRow(entry, onClick));
  }
  table.append(tbody);
  return table;
}

export interface ConcordanceControls {
  root: HTMLElement;
  show: (entityId: string) => Promise<void>;
}

export function createConcordancePanel(
  api: Client,
  docId: string,
  onRowClick: RowClickHandler,
  onError: (err: unknown) => void,
): ConcordanceControls {
  const styleSelect = h("select", {},
    h("option", { value: "KWIC" }, "KWIC"),
    h("option", { value: "KWOC" }, "KWOC"),
    h("option", { value: "KWAC" }, "KWAC"),
  );
  const windowInput = h("input", { type: "number", min: "1", value: "5" });
  const sortSelect = h("select", {},
    h("option", { value: "keyword_then_right" }, "alphabetical"),
    h("option", { value: "position" }, "document order"),
  );
  const title = h("h3", {}, "Concordance");
  const tableHolder = h("div", { class: "concordance-holder" });
  const root = h(
    "section",
    { class: "panel concordance-panel" },
    title,
    h("div", { class: "concordance-controls" },
      styleSelect,
      h("label", {}, " window ", windowInput),
      sortSelect,
    ),
    tableHolder,
  );

  let currentEntity: string | null = null;

  async function show(entityId: string): Promise<void> {
    currentEntity = entityId;
    try {
      const data = await api.concordance(docId, entityId, {
        style: (styleSelect as HTMLSelectElement).value,
        window: Number((windowInput as HTMLInputElement).value) || 5,
        sort: (sortSelect as HTMLSelectElement).value,
      });
      title.textContent = `Concordance — ${entityId}`;
      tableHolder.textContent = "";
      tableHolder.append(concordanceTable(data.entries, data.style, onRowClick));
    } catch (err) {
      onError(err);
    }
  }

  const rerun = () => {
    if (currentEntity) void show(currentEntity);
  };
  styleSelect.addEventListener("change", rerun);
  windowInput.addEventListener("change", rerun);
  sortSelect.addEventListener("change", rerun);

  return { root, show };
}
