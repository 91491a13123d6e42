// Board rendering: a blocks-world grid for scenario presets, or a plain
// state card for uploaded games the service has no geometry for.

import type { SessionView } from "./api.js";
import type { SceneModel } from "./model.js";
import { meterModel, regretBadge, statusText } from "./model.js";

const CELL = 64;

export function renderScene(
  container: HTMLElement,
  scene: SceneModel,
  lastRobotAction: string | null,
): void {
  container.innerHTML = "";
  if (scene.kind === "generic") {
    const card = document.createElement("div");
    card.className = "generic-state";
    card.innerHTML = `
      <div class="state-id">${escapeHtml(scene.state)}</div>
      <div class="labels">${scene.labels
        .map((l) => `<span class="chip">${escapeHtml(l)}</span>`)
        .join("")}</div>`;
    container.appendChild(card);
    return;
  }
  for (const region of scene.regions) {
    const panel = document.createElement("div");
    panel.className = `region region-${region.name}`;
    const title = document.createElement("div");
    title.className = "region-title";
    title.textContent =
      region.name === "human" ? "near you" : "robot side";
    panel.appendChild(title);

    const maxX = Math.max(...region.cells.map((c) => c.x), 0);
    const maxY = Math.max(...region.cells.map((c) => c.y), 0);
    const grid = document.createElement("div");
    grid.className = "grid";
    grid.style.width = `${(maxX + 1) * CELL}px`;
    grid.style.height = `${(maxY + 1) * CELL}px`;
    for (const cell of region.cells) {
      const slot = document.createElement("div");
      slot.className = "slot";
      slot.style.left = `${cell.x * CELL}px`;
      slot.style.top = `${cell.y * CELL}px`;
      slot.title = cell.slot;
      if (cell.block) {
        const block = document.createElement("div");
        block.className = "block" + (cell.pending ? " pending" : "");
        block.style.background = cell.color ?? "gray";
        block.textContent = cell.block;
        slot.appendChild(block);
      }
      grid.appendChild(slot);
    }
    panel.appendChild(grid);
    container.appendChild(panel);
  }
  if (lastRobotAction) {
    const note = document.createElement("div");
    note.className = "last-action";
    note.textContent = `robot: ${lastRobotAction}`;
    container.appendChild(note);
  }
}

export function renderStatus(
  statusEl: HTMLElement,
  meterEl: HTMLElement,
  badgeEl: HTMLElement,
  view: SessionView,
): void {
  statusEl.textContent = statusText(view);
  statusEl.classList.toggle("satisfied", view.done && view.satisfied);
  const meter = meterModel(view);
  meterEl.innerHTML = `
    <div class="meter-fill" style="width: ${(meter.fraction * 100).toFixed(1)}%"></div>
    <div class="meter-label">energy ${meter.payoff} / ${meter.budget}</div>`;
  badgeEl.textContent = regretBadge(view);
}

function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;");
}
