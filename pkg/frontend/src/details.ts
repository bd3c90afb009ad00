/** Entity details editor: rename, sort key, and aliases.
 *
 * Renaming changes the label everyone sees; the sort key only reorders the
 * entity panel (useful for surname-first filing). Aliases are alternative
 * surface forms kept on the entity, e.g. after a merge.
 */

import { Client, Entity } from "./api.js";
import { h, clear } from "./dom.js";

export interface EntityDetailsPanel {
  root: HTMLElement;
  showFor: (entity: Entity) => void;
}

export function createEntityDetailsPanel(
  api: Client,
  docId: string,
  onChanged: () => Promise<void>,
  onError: (err: unknown) => void,
): EntityDetailsPanel {
  const title = h("h3", {}, "Entity");
  const labelInput = h("input", { type: "text", placeholder: "label" }) as HTMLInputElement;
  const renameButton = h("button", { type: "button" }, "Rename");
  const sortInput = h("input", { type: "text", placeholder: "sort key" }) as HTMLInputElement;
  const sortButton = h("button", { type: "button" }, "Set sort key");
  const aliasInput = h("input", { type: "text", placeholder: "new alias" }) as HTMLInputElement;
  const aliasButton = h("button", { type: "button" }, "Add alias");
  const aliasList = h("p", { class: "alias-list" });
  const root = h(
    "section",
    { class: "panel details-panel", hidden: true },
    title,
    h("div", { class: "details-row" }, labelInput, renameButton),
    h("div", { class: "details-row" }, sortInput, sortButton),
    h("div", { class: "details-row" }, aliasInput, aliasButton),
    aliasList,
  );

  let current: Entity | null = null;

  function render(entity: Entity): void {
    current = entity;
    root.hidden = false;
    title.textContent = `Entity — ${entity.entity_id}`;
    labelInput.value = entity.label;
    sortInput.value = entity.sort_key;
    aliasInput.value = "";
    clear(aliasList);
    aliasList.textContent = entity.aliases.length
      ? `also: ${entity.aliases.join(", ")}`
      : "no aliases";
  }

  function apply(change: (entity: Entity) => Promise<{ entity: Entity }>): void {
    if (!current) return;
    void change(current)
      .then(async ({ entity }) => {
        render(entity);
        await onChanged();
      })
      .catch(onError);
  }

  renameButton.addEventListener("click", () =>
    apply((entity) => api.setLabel(docId, entity.entity_id, labelInput.value.trim())),
  );
  sortButton.addEventListener("click", () =>
    apply((entity) => api.setSortKey(docId, entity.entity_id, sortInput.value.trim())),
  );
  aliasButton.addEventListener("click", () => {
    const alias = aliasInput.value.trim();
    if (!alias) return;
    apply((entity) => api.addAlias(docId, entity.entity_id, alias));
  });

  return { root, showFor: render };
}
