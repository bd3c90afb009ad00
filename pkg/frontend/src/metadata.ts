/** Archival-metadata editor.
 *
 * A plain form over GET/PUT metadata. Validation failures come back with the
 * offending field named; that field is outlined and the server's message is
 * shown verbatim next to the form.
 */

import { ApiError, Client } from "./api.js";
import { h } from "./dom.js";

const TEXT_FIELDS: Array<[string, string]> = [
  ["document_number", "Document number (three digits, 001-999)"],
  ["author_role", "Author / role"],
  ["researcher_curator", "Researcher / curator"],
  ["abstract", "Abstract"],
  ["publication_status", "Publication status"],
  ["event_place", "Event place"],
  ["event_date", "Event date (year or D-M-YYYY)"],
  ["additional_notes", "Additional notes"],
];

const LIST_FIELDS: Array<[string, string]> = [
  ["document_type", "Document types (comma separated)"],
  ["document_subject", "Subjects (comma separated)"],
  ["provenance", "Provenance (comma separated)"],
];

export interface MetadataPanel {
  root: HTMLElement;
  load: () => Promise<void>;
}

export function createMetadataPanel(
  api: Client,
  docId: string,
  onError: (err: unknown) => void,
): MetadataPanel {
  const inputs = new Map<string, HTMLInputElement>();
  const message = h("p", { class: "metadata-message" });
  const form = h("form", { class: "metadata-form" });

  for (const [name, label] of [...TEXT_FIELDS, ...LIST_FIELDS]) {
    const input = h("input", { type: "text", name }) as HTMLInputElement;
    inputs.set(name, input);
    form.append(h("label", { class: "metadata-field", dataset: { field: name } }, label, input));
  }
  const saveButton = h("button", { type: "submit" }, "Save metadata");
  form.append(saveButton);

  const root = h("section", { class: "panel metadata-panel" }, h("h3", {}, "Metadata"), form, message);

  function clearErrors(): void {
    message.textContent = "";
    form.querySelectorAll(".field-error").forEach((el) => el.classList.remove("field-error"));
  }

  function showError(err: unknown): void {
    if (err instanceof ApiError) {
      message.textContent = `${err.code}: ${err.message}`;
      if (err.field) {
        const input = inputs.get(err.field);
        input?.closest(".metadata-field")?.classList.add("field-error");
      }
    } else {
      onError(err);
    }
  }

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    clearErrors();
    const record: Record<string, unknown> = {};
    for (const [name] of TEXT_FIELDS) {
      const value = inputs.get(name)!.value.trim();
      if (value) record[name] = value;
    }
    for (const [name] of LIST_FIELDS) {
      const value = inputs.get(name)!.value.trim();
      if (value) record[name] = value.split(",").map((part) => part.trim()).filter(Boolean);
    }
    if (!("document_number" in record)) record["document_number"] = "";
    void api
      .putMetadata(docId, record)
      .then(() => {
        message.textContent = "saved";
      })
      .catch(showError);
  });

  async function load(): Promise<void> {
    clearErrors();
    const { metadata } = await api.getMetadata(docId);
    for (const [name, input] of inputs) {
      const value = metadata ? metadata[name] : "";
      input.value = Array.isArray(value) ? value.join(", ") : value ? String(value) : "";
    }
  }

  return { root, load };
}
