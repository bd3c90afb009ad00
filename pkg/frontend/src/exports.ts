/** Download buttons.
 *
 * The file content is always fetched from the server's export endpoints —
 * the UI never assembles an export itself — and handed to the browser as a
 * blob download.
 */

import { Client } from "./api.js";
import { h } from "./dom.js";

export const EXPORT_FORMATS: Array<{ format: "html" | "tei" | "entities"; label: string; filename: (docId: string) => string; mime: string }> = [
  { format: "html", label: "HTML", filename: (d) => `${d}.html`, mime: "text/html" },
  { format: "tei", label: "TEI", filename: (d) => `${d}.xml`, mime: "application/xml" },
  { format: "entities", label: "Entities", filename: (d) => `${d}-entities.json`, mime: "application/json" },
];

/** Fetch the export body; this is the exact payload the download delivers. */
export function fetchExport(
  api: Client,
  docId: string,
  format: "html" | "tei" | "entities",
): Promise<string> {
  return api.exportDocument(docId, format);
}

export function triggerDownload(filename: string, text: string, mime: string): void {
  const blob = new Blob([text], { type: mime });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = filename;
  document.body.append(anchor);
  anchor.click();
  anchor.remove();
  URL.revokeObjectURL(url);
}

export function createExportButtons(
  api: Client,
  docId: string,
  onError: (err: unknown) => void,
): HTMLElement {
  const holder = h("span", { class: "export-buttons" });
  for (const spec of EXPORT_FORMATS) {
    const button = h("button", { type: "button" }, `↓ ${spec.label}`);
    button.addEventListener("click", () => {
      void fetchExport(api, docId, spec.format)
        .then((text) => triggerDownload(spec.filename(docId), text, spec.mime))
        .catch(onError);
    });
    holder.append(button);
  }
  return holder;
}
