import type { Annotation, FileDiff, RefactoringType, Side, TextRange } from "../model/types.js";
import type { Slot } from "../state/workspace.js";
import { boundRanges, slotsOf } from "../state/workspace.js";
import { isGap, lineSegments, paneRows, splitLine } from "./highlights.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const TAG_CLASS = { Context: "ctx", Delete: "del", Insert: "ins" } as const;

/** One diff pane as an HTML table. Bound parameter ranges render as
 * <mark> spans; each code cell carries data attributes so click
 * handlers can recover the (path, line, column) under the cursor. */
export function renderPane(
  diff: FileDiff,
  side: Side,
  bound: TextRange[],
): string {
  const path = (side === "before" ? diff.pathBefore : diff.pathAfter) ?? "";
  const rows: string[] = [];
  for (const row of paneRows(diff, side)) {
    if (isGap(row)) {
      rows.push('<tr class="gap"><td>&middot;&middot;&middot;</td><td></td></tr>');
      continue;
    }
    const segments = lineSegments(bound, path, row.line, row.text);
    const parts = splitLine(row.text, segments)
      .map((p) =>
        p.marked ? `<mark>${escapeHtml(p.text)}</mark>` : escapeHtml(p.text),
      )
      .join("");
    rows.push(
      `<tr class="${TAG_CLASS[row.tag]}"><td class="num">${row.line}</td>` +
        `<td class="code" data-side="${side}" data-path="${escapeHtml(path)}"` +
        ` data-line="${row.line}">${parts}</td></tr>`,
    );
  }
  return `<table class="pane" data-side="${side}">${rows.join("")}</table>`;
}

/** The parameter slot list for the current annotation, with fill state
 * and the active slot highlighted. */
export function renderSlots(
  type: RefactoringType,
  annotation: Annotation,
  active: Slot | null,
): string {
  const items = slotsOf(type).map((slot) => {
    const ranges = boundRanges(annotation, slot.side, slot.name);
    const classes = ["slot"];
    if (active && active.side === slot.side && active.name === slot.name) {
      classes.push("active");
    }
    if (ranges.length > 0) classes.push("filled");
    else if (slot.schema.required) classes.push("missing");
    const count = slot.schema.multiple ? ` (${ranges.length})` : "";
    return (
      `<li class="${classes.join(" ")}" data-side="${slot.side}"` +
      ` data-name="${escapeHtml(slot.name)}">` +
      `${slot.side}: ${escapeHtml(slot.name)}` +
      ` <em>${slot.schema.type}</em>${count}</li>`
    );
  });
  return `<ul class="slots">${items.join("")}</ul>`;
}
