/** Entity panels: one list per category plus Scrap and Trash bins.
 *
 * Every count shown comes from the server's entity listing — the panels are
 * re-fetched after each operation, so they can never drift from the stored
 * state. Drag an entity card onto another card to merge the two, or onto
 * the Scrap/Trash bins (or back onto a category panel) to move it; the drag
 * payload travels through the native drag-and-drop dataTransfer channel.
 */

import { Client, Entity } from "./api.js";
import { h, clear } from "./dom.js";

export const ENTITY_MIME = "application/x-entity-id";

export type DropTarget =
  | { kind: "entity"; entityId: string }
  | { kind: "bin"; location: "active" | "scrap" | "trash" };

/** Apply a completed drag: entity-on-entity merges (source folded into the
 * drop target), entity-on-bin moves between active/scrap/trash. */
export async function applyEntityDrop(
  api: Client,
  docId: string,
  sourceId: string,
  target: DropTarget,
): Promise<void> {
  if (target.kind === "entity") {
    if (target.entityId === sourceId) return;
    await api.merge(docId, sourceId, target.entityId);
    return;
  }
  await api.setLocation(docId, sourceId, target.location);
}

export interface EntityPanelHooks {
  onSelect: (entityId: string) => void;
  onChanged: () => Promise<void>;
  onError: (err: unknown) => void;
}

function entityCard(
  api: Client,
  docId: string,
  entity: Entity,
  hooks: EntityPanelHooks,
): HTMLElement {
  const badge = entity.wikidata_linked ? ` · ${entity.wikidata_id}` : "";
  const card = h(
    "div",
    {
      class: "entity-card",
      draggable: true,
      dataset: { entityId: entity.entity_id },
      title: entity.aliases.length ? `also: ${entity.aliases.join(", ")}` : "",
    },
    h("span", { class: "entity-label" }, entity.label),
    h("span", { class: "entity-count" }, ` ×${entity.occurrences}${badge}`),
  );
  card.addEventListener("click", () => hooks.onSelect(entity.entity_id));
  card.addEventListener("dragstart", (event) => {
    event.dataTransfer?.setData(ENTITY_MIME, entity.entity_id);
  });
  card.addEventListener("dragover", (event) => event.preventDefault());
  card.addEventListener("drop", (event) => {
    event.preventDefault();
    event.stopPropagation();
    const sourceId = event.dataTransfer?.getData(ENTITY_MIME);
    if (!sourceId) return;
    void applyEntityDrop(api, docId, sourceId, {
      kind: "entity",
      entityId: entity.entity_id,
    })
      .then(hooks.onChanged)
      .catch(hooks.onError);
  });
  return card;
}

function dropBin(
  api: Client,
  docId: string,
  label: string,
  location: "active" | "scrap" | "trash",
  hooks: EntityPanelHooks,
  extra?: HTMLElement,
): HTMLElement {
  const bin = h("div", { class: `entity-bin bin-${location}` }, h("h4", {}, label), extra ?? null);
  bin.addEventListener("dragover", (event) => {
    event.preventDefault();
    bin.classList.add("drop-ready");
  });
  bin.addEventListener("dragleave", () => bin.classList.remove("drop-ready"));
  bin.addEventListener("drop", (event) => {
    event.preventDefault();
    bin.classList.remove("drop-ready");
    const sourceId = event.dataTransfer?.getData(ENTITY_MIME);
    if (!sourceId) return;
    void applyEntityDrop(api, docId, sourceId, { kind: "bin", location })
      .then(hooks.onChanged)
      .catch(hooks.onError);
  });
  return bin;
}

export interface EntityPanels {
  root: HTMLElement;
  refresh: () => Promise<void>;
}

export function createEntityPanels(
  api: Client,
  docId: string,
  hooks: EntityPanelHooks,
): EntityPanels {
  const categoriesHolder = h("div", { class: "entity-categories" });
  const emptyTrashButton = h("button", { type: "button" }, "Empty Trash");
  const scrapBin = dropBin(api, docId, "Scrap", "scrap", hooks);
  const trashBin = dropBin(api, docId, "Trash", "trash", hooks, emptyTrashButton);
  const root = h(
    "section",
    { class: "panel entity-panel" },
    h("h3", {}, "Entities"),
    categoriesHolder,
    h("div", { class: "entity-bins" }, scrapBin, trashBin),
  );

  emptyTrashButton.addEventListener("click", () => {
    void api
      .emptyTrash(docId)
      .then(hooks.onChanged)
      .catch(hooks.onError);
  });

  async function refresh(): Promise<void> {
    const [cats, active, scrapped, trashed] = await Promise.all([
      api.categories(docId),
      api.entities(docId),
      api.entities(docId, { location: "scrap" }),
      api.entities(docId, { location: "trash" }),
    ]);
    clear(categoriesHolder);
    for (const category of cats.categories) {
      const rows = active.entities.filter((e) => e.category === category.name);
      const list = h("div", { class: "entity-list" });
      for (const entity of rows) list.append(entityCard(api, docId, entity, hooks));
      const panel = h(
        "div",
        { class: `entity-category cat-${category.display_class}` },
        h("h4", {}, `${category.name} (${rows.length})`),
        list,
      );
      panel.addEventListener("dragover", (event) => event.preventDefault());
      panel.addEventListener("drop", (event) => {
        event.preventDefault();
        const sourceId = event.dataTransfer?.getData(ENTITY_MIME);
        if (!sourceId) return;
        void applyEntityDrop(api, docId, sourceId, { kind: "bin", location: "active" })
          .then(hooks.onChanged)
          .catch(hooks.onError);
      });
      categoriesHolder.append(panel);
    }
    const fillBin = (bin: HTMLElement, rows: Entity[]) => {
      bin.querySelectorAll(".entity-card").forEach((el) => el.remove());
      for (const entity of rows) bin.append(entityCard(api, docId, entity, hooks));
    };
    fillBin(scrapBin, scrapped.entities);
    fillBin(trashBin, trashed.entities);
  }

  return { root, refresh };
}
