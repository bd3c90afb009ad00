/** Application shell: login, layout, and the wiring between panels.
 *
 * Data flows one way: every mutation goes to the server, then the affected
 * panels re-fetch. The text pane always shows the server's rendered markup,
 * and entity panels always show the server's listings, so nothing the UI
 * displays can drift from the stored document. A stale save (someone else
 * saved first) surfaces as a reload prompt.
 */

import { ApiError, Client, DocInfo, Entity } from "./api.js";
import { createAccountControls } from "./account.js";
import { createAnnotator, flashMention, Annotator } from "./annotator.js";
import { createConcordancePanel } from "./concordance.js";
import { createEntityDetailsPanel } from "./details.js";
import { createDocumentsPanel } from "./documents.js";
import { h, clear } from "./dom.js";
import { createEntityPanels } from "./entities.js";
import { createExportButtons } from "./exports.js";
import { createMetadataPanel } from "./metadata.js";
import { createReconcilePanel } from "./reconcile.js";

const api = new Client("/api/v1");

const errorBar = h("div", { class: "error-bar", hidden: true });

function showError(err: unknown): void {
  if (err instanceof ApiError) {
    errorBar.textContent = `${err.code}: ${err.message}${err.field ? ` (field: ${err.field})` : ""}`;
  } else {
    errorBar.textContent = String(err);
  }
  errorBar.hidden = false;
  window.setTimeout(() => {
    errorBar.hidden = true;
  }, 6000);
}

api.onConflict = () => {
  if (window.confirm("This document was saved elsewhere; reload to pick up the latest revision?")) {
    window.location.reload();
  }
};

function loginView(onLoggedIn: () => void): HTMLElement {
  const username = h("input", { type: "text", placeholder: "username", autocomplete: "username" }) as HTMLInputElement;
  const password = h("input", { type: "password", placeholder: "password", autocomplete: "current-password" }) as HTMLInputElement;
  const message = h("p", { class: "login-message" });
  const form = h(
    "form",
    { class: "login-form" },
    h("h2", {}, "docmarks"),
    username,
    password,
    h("button", { type: "submit" }, "Sign in"),
    message,
  );
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void api
      .login(username.value, password.value)
      .then(onLoggedIn)
      .catch((err: unknown) => {
        message.textContent = err instanceof ApiError ? err.message : String(err);
      });
  });
  return h("div", { class: "login-wrap" }, form);
}

function workbench(root: HTMLElement): void {
  let current: DocInfo | null = null;
  let revision = 0;
  let annotator: Annotator | null = null;
  let selectedEntity: Entity | null = null;

  const textPane = h("div", { class: "text-pane" });
  const toolbar = h("div", { class: "toolbar" });
  const docTitle = h("span", { class: "doc-title" }, "no document open");
  const saveButton = h("button", { type: "button", disabled: true }, "Save");
  const editToggle = h("input", { type: "checkbox", checked: true }) as HTMLInputElement;
  const statusSelect = h("select", { disabled: true },
    h("option", { value: "ToBeStarted" }, "to be started"),
    h("option", { value: "InProgress" }, "in progress"),
    h("option", { value: "Finished" }, "finished"),
  ) as HTMLSelectElement;
  const headerRight = h("span", { class: "header-right" });

  const header = h(
    "header",
    { class: "app-header" },
    docTitle,
    statusSelect,
    saveButton,
    h("label", { class: "edit-toggle" }, editToggle, " edit mode"),
    headerRight,
    createAccountControls(api),
  );

  const concordancePanel = createConcordancePanel(
    api,
    "",
    (mentionId) => {
      flashMention(textPane, mentionId);
    },
    showError,
  );

  // panels that need a doc id are re-created on open; holders keep the layout
  const documentsHolder = h("div", {});
  const entitiesHolder = h("div", {});
  const detailsHolder = h("div", {});
  const reconcileHolder = h("div", {});
  const metadataHolder = h("div", {});
  const concordanceHolder = h("div", {});

  const layout = h(
    "div",
    { class: "workbench" },
    header,
    errorBar,
    h("div", { class: "columns" },
      h("div", { class: "col col-left" }, documentsHolder, entitiesHolder),
      h("div", { class: "col col-center" }, toolbar, textPane),
      h("div", { class: "col col-right" },
        concordanceHolder, detailsHolder, reconcileHolder, metadataHolder),
    ),
  );
  clear(root).append(layout);

  const documentsPanel = createDocumentsPanel(api, (info) => void openDocument(info), showError);
  documentsHolder.append(documentsPanel.root);
  void documentsPanel.refresh();

  async function refreshAfterChange(): Promise<void> {
    if (!current) return;
    await annotator?.refresh();
    await entityPanels?.refresh();
    const info = await api.docInfo(current.doc_id);
    docTitle.textContent = `${info.doc_id} · r${revision}${info.status === "Finished" ? " ✓" : ""}`;
    if (selectedEntity) {
      try {
        const { entity } = await api.entity(current.doc_id, selectedEntity.entity_id);
        selectedEntity = entity;
        details?.showFor(entity);
        await concordance.show(entity.entity_id);
      } catch {
        selectedEntity = null; // merged away or purged
      }
    }
  }

  let entityPanels: ReturnType<typeof createEntityPanels> | null = null;
  let details: ReturnType<typeof createEntityDetailsPanel> | null = null;
  let concordance = concordancePanel;

  async function openDocument(info: DocInfo): Promise<void> {
    current = info;
    revision = info.revision;
    selectedEntity = null;
    docTitle.textContent = `${info.doc_id} · r${info.revision}`;
    statusSelect.disabled = false;
    statusSelect.value = info.status;
    (saveButton as HTMLButtonElement).disabled = false;

    const cats = await api.categories(info.doc_id);
    annotator = createAnnotator(
      api,
      info.doc_id,
      textPane,
      toolbar,
      cats.categories.map((c) => c.name),
      { onChanged: refreshAfterChange, onError: showError },
    );
    annotator.setEditMode(editToggle.checked);
    await annotator.refresh();

    entityPanels = createEntityPanels(api, info.doc_id, {
      onSelect: (entityId) => {
        void api
          .entity(info.doc_id, entityId)
          .then(async ({ entity }) => {
            selectedEntity = entity;
            details?.showFor(entity);
            await reconcile.showFor(entity);
            await concordance.show(entity.entity_id);
          })
          .catch(showError);
      },
      onChanged: refreshAfterChange,
      onError: showError,
    });
    clear(entitiesHolder).append(entityPanels.root);
    await entityPanels.refresh();

    concordance = createConcordancePanel(
      api,
      info.doc_id,
      (mentionId) => {
        flashMention(textPane, mentionId);
      },
      showError,
    );
    clear(concordanceHolder).append(concordance.root);

    details = createEntityDetailsPanel(api, info.doc_id, refreshAfterChange, showError);
    clear(detailsHolder).append(details.root);

    const reconcile = createReconcilePanel(api, info.doc_id, refreshAfterChange, showError);
    clear(reconcileHolder).append(reconcile.root);

    const metadata = createMetadataPanel(api, info.doc_id, showError);
    clear(metadataHolder).append(metadata.root);
    await metadata.load();

    clear(headerRight).append(createExportButtons(api, info.doc_id, showError));
  }

  saveButton.addEventListener("click", () => {
    if (!current) return;
    void api
      .save(current.doc_id, revision)
      .then(async (saved) => {
        revision = saved.revision;
        docTitle.textContent = `${saved.doc_id} · r${saved.revision}`;
        await documentsPanel.refresh();
      })
      .catch(showError);
  });

  statusSelect.addEventListener("change", () => {
    if (!current) return;
    void api
      .setStatus(current.doc_id, statusSelect.value)
      .then(() => documentsPanel.refresh())
      .catch(showError);
  });

  editToggle.addEventListener("change", () => {
    annotator?.setEditMode(editToggle.checked);
  });
}

const appRoot = document.getElementById("app");
if (appRoot) {
  const start = () => workbench(appRoot);
  appRoot.append(loginView(start));
}
