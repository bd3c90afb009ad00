/** Wikidata reconciliation panel.
 *
 * Search candidates for the selected entity's label, inspect the returned
 * descriptions, and link one (which also records the Treccani identifier the
 * server resolves, or its "Not Detected" fallback). Linked entities can be
 * unlinked again.
 */

import { Client, Entity } from "./api.js";
import { h, clear } from "./dom.js";

export interface ReconcilePanel {
  root: HTMLElement;
  showFor: (entity: Entity) => Promise<void>;
}

export function createReconcilePanel(
  api: Client,
  docId: string,
  onChanged: () => Promise<void>,
  onError: (err: unknown) => void,
): ReconcilePanel {
  const title = h("h3", {}, "Reconciliation");
  const status = h("p", { class: "reconcile-status" }, "select an entity");
  const results = h("div", { class: "reconcile-results" });
  const searchBox = h("input", { type: "search", placeholder: "search label" }) as HTMLInputElement;
  const searchButton = h("button", { type: "button" }, "Search");
  const unlinkButton = h("button", { type: "button", hidden: true }, "Unlink");
  const root = h(
    "section",
    { class: "panel reconcile-panel" },
    title,
    status,
    h("div", { class: "reconcile-controls" }, searchBox, searchButton, unlinkButton),
    results,
  );

  let current: Entity | null = null;

  function describe(entity: Entity): string {
    if (!entity.wikidata_linked) return "not linked";
    return `linked: ${entity.wikidata_id} · Treccani: ${entity.treccani_id ?? "—"}`;
  }

  async function runSearch(): Promise<void> {
    if (!current) return;
    const label = searchBox.value.trim() || current.label;
    clear(results);
    try {
      const { candidates } = await api.reconcileSearch(label);
      if (!candidates.length) {
        results.append(h("p", {}, "no candidates"));
        return;
      }
      for (const candidate of candidates) {
        const pick = h("button", { type: "button", class: "candidate-pick" }, "link");
        pick.addEventListener("click", () => {
          if (!current) return;
          void api
            .linkWikidata(docId, current.entity_id, candidate.qid)
            .then(async ({ entity }) => {
              current = entity;
              status.textContent = describe(entity);
              unlinkButton.hidden = false;
              await onChanged();
            })
            .catch(onError);
        });
        results.append(
          h(
            "div",
            { class: "candidate" },
            h("strong", {}, candidate.qid),
            ` ${candidate.label} — ${candidate.description || "no description"} `,
            pick,
          ),
        );
      }
    } catch (err) {
      onError(err);
    }
  }

  searchButton.addEventListener("click", () => void runSearch());
  searchBox.addEventListener("keydown", (event) => {
    if ((event as KeyboardEvent).key === "Enter") void runSearch();
  });
  unlinkButton.addEventListener("click", () => {
    if (!current) return;
    void api
      .unlinkWikidata(docId, current.entity_id)
      .then(async ({ entity }) => {
        current = entity;
        status.textContent = describe(entity);
        unlinkButton.hidden = true;
        await onChanged();
      })
      .catch(onError);
  });

  return {
    root,
    showFor: async (entity: Entity) => {
      current = entity;
      title.textContent = `Reconciliation — ${entity.label}`;
      status.textContent = describe(entity);
      unlinkButton.hidden = !entity.wikidata_linked;
      searchBox.value = entity.label;
      clear(results);
    },
  };
}
