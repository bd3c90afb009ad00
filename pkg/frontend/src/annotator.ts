/** The annotated-text pane.
 *
 * The document body shown here is exactly the server's rendered markup: the
 * full page from GET /documents/{id}/html is parsed and its body content is
 * adopted wholesale — this module never builds document markup of its own.
 *
 * Selections are translated to Unicode-scalar offsets (the server counts
 * code points, while DOM APIs count UTF-16 units, so astral characters need
 * explicit handling) and sent to the marking endpoints.
 */

import { Client, Span } from "./api.js";

/** Count Unicode scalars in a JS string (code points, not UTF-16 units). */
export function scalarLength(text: string): number {
  let count = 0;
  for (const _ of text) count += 1;
  return count;
}

/** Scalar offset of the position `utf16Offset` inside `text`. */
export function scalarOffsetWithin(text: string, utf16Offset: number): number {
  return scalarLength(text.slice(0, utf16Offset));
}

/** Scalar offset of (node, offsetInNode) relative to the document text shown
 * inside `root`, counting every text node in document order. Returns null
 * when the node is not inside root. Element offsets count child nodes, per
 * the DOM Range convention. */
export function scalarOffsetOf(root: Node, node: Node, offsetInNode: number): number | null {
  if (!root.contains(node)) return null;
  let total = 0;
  const walk = (current: Node): boolean => {
    if (current === node) {
      if (current.nodeType === Node.TEXT_NODE) {
        total += scalarOffsetWithin((current as Text).data, offsetInNode);
      } else {
        const children = Array.from(current.childNodes).slice(0, offsetInNode);
        for (const child of children) total += scalarLength(child.textContent ?? "");
      }
      return true;
    }
    if (current.nodeType === Node.TEXT_NODE) {
      total += scalarLength((current as Text).data);
      return false;
    }
    for (const child of Array.from(current.childNodes)) {
      if (walk(child)) return true;
    }
    return false;
  };
  return walk(root) ? total : null;
}

/** The current selection as a scalar span within root, or null. */
export function selectionSpan(root: HTMLElement, selection: Selection | null): Span | null {
  if (!selection || selection.rangeCount === 0 || selection.isCollapsed) return null;
  const range = selection.getRangeAt(0);
  const start = scalarOffsetOf(root, range.startContainer, range.startOffset);
  const end = scalarOffsetOf(root, range.endContainer, range.endOffset);
  if (start === null || end === null || start === end) return null;
  return start <= end ? { start, end } : { start: end, end: start };
}

/** Replace the pane content with the body of the server-rendered page. */
export function showServerHtml(pane: HTMLElement, pageHtml: string): void {
  const parsed = new DOMParser().parseFromString(pageHtml, "text/html");
  pane.textContent = "";
  for (const node of Array.from(parsed.body.childNodes)) {
    pane.append(pane.ownerDocument.importNode(node, true));
  }
}

/** Scroll to and briefly highlight the span whose about attribute names the
 * mention. Returns false when the mention is not in the pane. */
export function flashMention(pane: HTMLElement, mentionId: string): boolean {
  const target = pane.querySelector(`[about="#${mentionId}"]`);
  if (!target) return false;
  target.scrollIntoView({ behavior: "smooth", block: "center" });
  target.classList.remove("flash");
  // restart the animation even when the same row is clicked twice
  void (target as HTMLElement).offsetWidth;
  target.classList.add("flash");
  window.setTimeout(() => target.classList.remove("flash"), 1600);
  return true;
}

export interface AnnotatorHooks {
  onChanged: () => Promise<void>;
  onError: (err: unknown) => void;
}

export interface Annotator {
  pane: HTMLElement;
  toolbar: HTMLElement;
  refresh: () => Promise<void>;
  setEditMode: (on: boolean) => void;
}

/** Wire the toolbar buttons: one per category, plus extend-to-word and
 * highlight-all toggles. The caller provides the pane and toolbar shells. */
export function createAnnotator(
  api: Client,
  docId: string,
  pane: HTMLElement,
  toolbar: HTMLElement,
  categoryNames: string[],
  hooks: AnnotatorHooks,
): Annotator {
  const doc = pane.ownerDocument;
  const extendToggle = doc.createElement("input");
  extendToggle.type = "checkbox";
  extendToggle.checked = true;
  const highlightToggle = doc.createElement("input");
  highlightToggle.type = "checkbox";

  async function markCurrentSelection(category: string): Promise<void> {
    const selection = doc.defaultView ? doc.defaultView.getSelection() : null;
    let span = selectionSpan(pane, selection);
    if (!span) return;
    try {
      if (extendToggle.checked) span = await api.extend(docId, span);
      if (highlightToggle.checked) {
        await api.highlightAll(docId, span, category);
      } else {
        await api.mark(docId, span, category);
      }
      await hooks.onChanged();
    } catch (err) {
      hooks.onError(err);
    }
  }

  toolbar.textContent = "";
  for (const name of categoryNames) {
    const button = doc.createElement("button");
    button.type = "button";
    button.className = "category-button";
    button.textContent = name;
    button.addEventListener("click", () => void markCurrentSelection(name));
    toolbar.append(button);
  }
  const extendLabel = doc.createElement("label");
  extendLabel.append(extendToggle, doc.createTextNode(" extend to word"));
  const highlightLabel = doc.createElement("label");
  highlightLabel.append(highlightToggle, doc.createTextNode(" highlight all"));
  toolbar.append(extendLabel, highlightLabel);

  return {
    pane,
    toolbar,
    refresh: async () => {
      showServerHtml(pane, await api.documentHtml(docId));
    },
    setEditMode: (on: boolean) => {
      toolbar.hidden = !on;
    },
  };
}
