import { ApiClient } from "./api/client.js";
import type { Side } from "./model/types.js";
import { Workspace } from "./state/workspace.js";
import { renderPane, renderSlots, escapeHtml } from "./view/render.js";

const api = new ApiClient(
  (window as { REFANN_API?: string }).REFANN_API ?? "http://127.0.0.1:8080",
  localStorage.getItem("annotator") ?? "ui",
);
const ws = new Workspace(api);

function el(id: string): HTMLElement {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found;
}

function columnAt(event: MouseEvent): number {
  const doc = document as Document & {
    caretPositionFromPoint?(x: number, y: number): { offset: number } | null;
  };
  const pos = doc.caretPositionFromPoint?.(event.clientX, event.clientY);
  return (pos?.offset ?? 0) + 1;
}

function render(): void {
  const view = ws.view();
  el("error").textContent = view.lastError ?? "";
  if (view.commit) {
    el("commit-title").textContent =
      `${view.commit.commit.repository} @ ${view.commit.commit.sha.slice(0, 10)}`;
  }
  const annotation = view.annotation;
  const sidebar = el("sidebar");
  if (annotation) {
    const type = ws.typeOf(annotation);
    sidebar.innerHTML =
      `<p>${escapeHtml(annotation.type)} v${annotation.version}` +
      ` [${annotation.status}]</p>` +
      renderSlots(type, annotation, view.activeSlot) +
      '<button id="verify">Verify</button>';
  } else {
    const options = view.types
      .map((t) => `<option>${escapeHtml(t.name)}</option>`)
      .join("");
    sidebar.innerHTML =
      `<select id="type-pick">${options}</select>` +
      '<button id="start">Start annotation</button>';
  }
  for (const side of ["before", "after"] as const) {
    const pane = el(`pane-${side}`);
    const bound = annotation
      ? Object.values(annotation.parameters[side]).flat()
      : [];
    pane.innerHTML = ws.diff
      .map((file) => renderPane(file, side, bound))
      .join("");
  }
}

async function onPaneClick(event: MouseEvent): Promise<void> {
  const cell = (event.target as HTMLElement).closest<HTMLElement>("td.code");
  if (!cell) return;
  const side = cell.dataset["side"] as Side;
  const path = cell.dataset["path"] ?? "";
  const line = Number(cell.dataset["line"]);
  await ws.clickAt(side, path, line, columnAt(event));
  render();
}

async function onSidebarClick(event: MouseEvent): Promise<void> {
  const target = event.target as HTMLElement;
  if (target.id === "start") {
    const pick = el("type-pick") as HTMLSelectElement;
    await ws.startAnnotation(pick.value);
  } else if (target.id === "verify") {
    await ws.setStatus("Verified");
  } else {
    const slot = target.closest<HTMLElement>("li.slot");
    if (!slot) return;
    ws.selectSlot(slot.dataset["side"] as Side, slot.dataset["name"] ?? "");
  }
  render();
}

async function boot(): Promise<void> {
  await ws.loadTypes();
  const { commits } = await api.listCommits();
  const list = el("commits");
  list.innerHTML = commits
    .map((c) => `<li data-id="${escapeHtml(c.id)}">${escapeHtml(c.id)}</li>`)
    .join("");
  list.addEventListener("click", async (event) => {
    const item = (event.target as HTMLElement).closest<HTMLElement>("li");
    if (!item) return;
    await ws.openCommit(item.dataset["id"] ?? "");
    render();
  });
  el("panes").addEventListener("click", onPaneClick);
  el("sidebar").addEventListener("click", onSidebarClick);
}

boot().catch((err) => {
  el("error").textContent = String(err);
});
