// Pure projections of server views into renderable structures, plus the
// client-side history used by the timeline scrubber. No DOM, no fetch.

import type { BoardGeometry, SessionView } from "./api.js";

export interface BoardCell {
  slot: string;
  region: string;
  x: number;
  y: number;
  block: string | null;
  color: string | null;
  pending: boolean;
}

export interface BoardModel {
  kind: "board";
  regions: { name: string; cells: BoardCell[] }[];
}

export interface GenericModel {
  kind: "generic";
  state: string;
  labels: string[];
}

export type SceneModel = BoardModel | GenericModel;

// Where each block sits, given the server's placement map.  A placement of
// the form "pending:<slot>" marks a block still in flight toward that slot.
export function sceneModel(
  view: SessionView,
  geometry: BoardGeometry | null,
): SceneModel {
  const placements = view.board;
  if (!geometry || !placements) {
    return { kind: "generic", state: view.state, labels: view.labels };
  }
  const occupants = new Map<string, { block: string; pending: boolean }>();
  for (const [block, raw] of Object.entries(placements)) {
    const pending = raw.startsWith("pending:");
    const slot = pending ? raw.slice("pending:".length) : raw;
    occupants.set(slot, { block, pending });
  }
  const regions = new Map<string, BoardCell[]>();
  for (const name of Object.keys(geometry.regions)) {
    regions.set(name, []);
  }
  for (const [slot, place] of Object.entries(geometry.slots)) {
    const occupant = occupants.get(slot) ?? null;
    const cell: BoardCell = {
      slot,
      region: place.region,
      x: place.x,
      y: place.y,
      block: occupant ? occupant.block : null,
      color: occupant ? geometry.blocks[occupant.block] ?? "gray" : null,
      pending: occupant ? occupant.pending : false,
    };
    if (!regions.has(place.region)) {
      regions.set(place.region, []);
    }
    regions.get(place.region)!.push(cell);
  }
  const ordered = [...regions.entries()].map(([name, cells]) => ({
    name,
    cells: cells.sort((a, b) => a.y - b.y || a.x - b.x),
  }));
  ordered.sort((a, b) => a.name.localeCompare(b.name));
  return { kind: "board", regions: ordered };
}

export interface MeterModel {
  payoff: number;
  budget: number;
  fraction: number; // filled share of the budget bar, never above 1
  overBudget: boolean;
}

export function meterModel(view: SessionView): MeterModel {
  const fraction =
    view.budget <= 0 ? 0 : Math.min(1, view.payoff / view.budget);
  return {
    payoff: view.payoff,
    budget: view.budget,
    fraction,
    overBudget: view.payoff > view.budget,
  };
}

export function statusText(view: SessionView): string {
  if (view.done) {
    return view.satisfied
      ? `Task complete with total energy ${view.payoff}.`
      : "Play ended without completing the task.";
  }
  if (view.turn === "human") {
    return "Your move. Pick an action below.";
  }
  return "Robot is moving...";
}

export function regretBadge(view: SessionView): string {
  if (view.regret_bound === null) {
    return "regret bound: n/a";
  }
  return `guaranteed regret ≤ ${view.regret_bound}`;
}

// The rendered buttons must mirror the server's list exactly.
export function actionList(view: SessionView): string[] {
  return view.turn === "human" ? [...view.legal_actions] : [];
}

export class Timeline {
  private views: SessionView[] = [];
  private cursor = -1; // -1 means "live", i.e. the newest view

  push(view: SessionView): void {
    this.views.push(view);
    this.cursor = -1;
  }

  get length(): number {
    return this.views.length;
  }

  get liveIndex(): number {
    return this.views.length - 1;
  }

  get index(): number {
    return this.cursor < 0 ? this.liveIndex : this.cursor;
  }

  get isLive(): boolean {
    return this.cursor < 0 || this.cursor === this.liveIndex;
  }

  current(): SessionView | null {
    if (!this.views.length) {
      return null;
    }
    return this.views[this.index];
  }

  scrub(index: number): SessionView | null {
    if (!this.views.length) {
      return null;
    }
    const clamped = Math.max(0, Math.min(index, this.liveIndex));
    this.cursor = clamped === this.liveIndex ? -1 : clamped;
    return this.current();
  }

  live(): SessionView | null {
    this.cursor = -1;
    return this.current();
  }
}
