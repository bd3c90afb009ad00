/** Document list, upload, status, and save controls. */

import { Client, DocInfo } from "./api.js";
import { h, clear } from "./dom.js";

export interface DocumentsPanel {
  root: HTMLElement;
  refresh: () => Promise<void>;
}

export function createDocumentsPanel(
  api: Client,
  onOpen: (info: DocInfo) => void,
  onError: (err: unknown) => void,
): DocumentsPanel {
  const statusFilter = h("select", {},
    h("option", { value: "" }, "any status"),
    h("option", { value: "ToBeStarted" }, "to be started"),
    h("option", { value: "InProgress" }, "in progress"),
    h("option", { value: "Finished" }, "finished"),
  ) as HTMLSelectElement;
  const searchBox = h("input", { type: "search", placeholder: "filter by id" }) as HTMLInputElement;
  const list = h("ul", { class: "document-list" });

  const idInput = h("input", { type: "text", placeholder: "new document id" }) as HTMLInputElement;
  const fileInput = h("input", { type: "file", accept: ".txt,.html" }) as HTMLInputElement;
  const uploadButton = h("button", { type: "button" }, "Upload");

  const root = h(
    "section",
    { class: "panel documents-panel" },
    h("h3", {}, "Documents"),
    h("div", { class: "document-controls" }, statusFilter, searchBox),
    list,
    h("div", { class: "document-upload" }, idInput, fileInput, uploadButton),
  );

  async function refresh(): Promise<void> {
    try {
      const { documents } = await api.listDocuments({
        status: statusFilter.value || undefined,
        q: searchBox.value || undefined,
      });
      clear(list);
      for (const info of documents) {
        const item = h(
          "li",
          { class: "document-item", dataset: { docId: info.doc_id } },
          h("strong", {}, info.doc_id),
          h("span", { class: "document-meta" },
            ` ${info.status} · r${info.revision} · ${info.mentions} mentions`),
        );
        item.addEventListener("click", () => onOpen(info));
        list.append(item);
      }
    } catch (err) {
      onError(err);
    }
  }

  statusFilter.addEventListener("change", () => void refresh());
  searchBox.addEventListener("input", () => void refresh());

  uploadButton.addEventListener("click", () => {
    const file = fileInput.files && fileInput.files[0];
    if (!file) return;
    const docId = idInput.value.trim() || file.name.replace(/\.[^.]*$/, "");
    void file
      .text()
      .then((content) => api.upload(docId, content))
      .then(async (info) => {
        await refresh();
        onOpen(info);
      })
      .catch(onError);
  });

  return { root, refresh };
}
