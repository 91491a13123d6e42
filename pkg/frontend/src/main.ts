// Playground wiring: scenario picker, session lifecycle, board + action
// panel + timeline. The session id lives in the URL hash so a refresh
// re-fetches and reproduces the identical board from the server.

import { BoardGeometry, PlayClient, ScenarioInfo } from "./api.js";
import { renderScene, renderStatus } from "./board.js";
import { sceneModel, Timeline } from "./model.js";
import { ActionPanel } from "./panel.js";

const BASE_URL =
  new URLSearchParams(window.location.search).get("service") ??
  "http://127.0.0.1:8000";

const client = new PlayClient(BASE_URL);

const app = document.getElementById("app")!;
app.innerHTML = `
  <header>
    <h1>Let the robot build - or lend a hand</h1>
    <p class="subtitle">You play the human. The robot follows a strategy that
    guarantees the task and regrets as little as possible.</p>
  </header>
  <section id="picker" class="card">
    <label>scenario
      <select id="scenario"></select>
    </label>
    <label>budget
      <input id="budget" type="range" min="0" max="30" step="1">
      <span id="budget-value"></span>
    </label>
    <span id="budget-hint" class="hint"></span>
    <button id="start">synthesize &amp; play</button>
    <label class="upload">or upload a game file
      <input id="upload" type="file" accept=".json">
    </label>
    <input id="upload-formula" type="text" placeholder="task formula for the upload">
    <div id="picker-note" class="notice"></div>
  </section>
  <section id="play" class="card hidden">
    <div id="status"></div>
    <div id="meter" class="meter"></div>
    <div id="regret" class="badge"></div>
    <div id="scene"></div>
    <div id="actions"></div>
    <div id="timeline-row">
      <input id="timeline" type="range" min="0" max="0" step="1" value="0">
      <span id="timeline-label"></span>
    </div>
    <div id="notice" class="notice"></div>
    <div id="stats" class="stats"></div>
  </section>
`;

const scenarioSelect = document.getElementById("scenario") as HTMLSelectElement;
const budgetInput = document.getElementById("budget") as HTMLInputElement;
const budgetValue = document.getElementById("budget-value")!;
const budgetHint = document.getElementById("budget-hint")!;
const startButton = document.getElementById("start") as HTMLButtonElement;
const uploadInput = document.getElementById("upload") as HTMLInputElement;
const uploadFormula = document.getElementById("upload-formula") as HTMLInputElement;
const pickerNote = document.getElementById("picker-note")!;
const playSection = document.getElementById("play")!;
const statusEl = document.getElementById("status")!;
const meterEl = document.getElementById("meter")!;
const regretEl = document.getElementById("regret")!;
const sceneEl = document.getElementById("scene")!;
const actionsEl = document.getElementById("actions")!;
const timelineInput = document.getElementById("timeline") as HTMLInputElement;
const timelineLabel = document.getElementById("timeline-label")!;
const noticeEl = document.getElementById("notice")!;
const statsEl = document.getElementById("stats")!;

let scenarios: ScenarioInfo[] = [];
let geometry: BoardGeometry | null = null;
let timeline = new Timeline();

const panel = new ActionPanel(actionsEl, client, {
  onView: (view) => {
    timeline.push(view);
    renderCurrent();
  },
  onNotice: (message) => {
    noticeEl.textContent = message;
  },
});

function currentScenario(): ScenarioInfo | undefined {
  return scenarios.find((s) => s.name === scenarioSelect.value);
}

function syncBudgetControls(): void {
  const scenario = currentScenario();
  if (!scenario) {
    return;
  }
  const minimum = scenario.b_min ?? 0;
  budgetInput.min = String(minimum);
  budgetInput.max = String(Math.max(scenario.default_budget * 2, minimum + 5));
  budgetInput.value = String(scenario.default_budget);
  budgetValue.textContent = budgetInput.value;
  budgetHint.textContent =
    `the task needs at least ${minimum} energy against a hostile human`;
}

function renderCurrent(): void {
  const view = timeline.current();
  if (!view) {
    return;
  }
  playSection.classList.remove("hidden");
  renderScene(sceneEl, sceneModel(view, geometry), view.last_robot_action);
  renderStatus(statusEl, meterEl, regretEl, view);
  panel.render(view, timeline.isLive);
  timelineInput.max = String(timeline.liveIndex);
  timelineInput.value = String(timeline.index);
  timelineLabel.textContent = timeline.isLive
    ? `move ${view.step}`
    : `viewing move ${view.step} (scrubbed)`;
}

async function startSession(request: {
  scenario?: string;
  game?: unknown;
  formula?: string;
  budget?: number;
}): Promise<void> {
  startButton.disabled = true;
  startButton.textContent = "synthesizing...";
  pickerNote.textContent = "";
  noticeEl.textContent = "";
  try {
    const created = await client.createSession(request);
    geometry = created.board;
    timeline = new Timeline();
    timeline.push(created.view);
    window.location.hash = created.id;
    statsEl.textContent =
      `product states ${created.stats.product_states} - ` +
      `unfolding ${created.stats.utility_nodes} / ` +
      `${created.stats.best_response_nodes} nodes - ` +
      `root regret ${created.stats.root_regret} - ` +
      `${created.stats.seconds.toFixed(2)}s`;
    renderCurrent();
  } catch (error) {
    const apiError = error as { message?: string; bMin?: number | null };
    pickerNote.textContent =
      apiError.bMin != null
        ? `budget too small: the minimum feasible budget is ${apiError.bMin}`
        : apiError.message ?? "failed to create the session";
  } finally {
    startButton.disabled = false;
    startButton.textContent = "synthesize & play";
  }
}

async function resumeFromHash(): Promise<void> {
  const id = window.location.hash.replace(/^#/, "");
  if (!id) {
    return;
  }
  try {
    const view = await client.view(id);
    const scenario = currentScenario();
    geometry = view.board ? scenario?.board ?? null : null;
    timeline = new Timeline();
    timeline.push(view);
    renderCurrent();
  } catch {
    window.location.hash = "";
  }
}

async function boot(): Promise<void> {
  scenarios = await client.scenarios();
  scenarioSelect.innerHTML = scenarios
    .map((s) => `<option value="${s.name}">${s.name} - ${s.description}</option>`)
    .join("");
  scenarioSelect.value = "arch";
  syncBudgetControls();
  await resumeFromHash();
}

scenarioSelect.addEventListener("change", syncBudgetControls);
budgetInput.addEventListener("input", () => {
  budgetValue.textContent = budgetInput.value;
});
startButton.addEventListener("click", () => {
  void startSession({
    scenario: scenarioSelect.value,
    budget: Number(budgetInput.value),
  });
});
uploadInput.addEventListener("change", async () => {
  const file = uploadInput.files?.[0];
  if (!file) {
    return;
  }
  const text = await file.text();
  try {
    const doc = JSON.parse(text);
    const formula = uploadFormula.value.trim();
    if (!formula) {
      pickerNote.textContent = "enter the task formula for the uploaded game";
      return;
    }
    void startSession({ game: doc, formula, budget: Number(budgetInput.value) });
  } catch {
    pickerNote.textContent = "that file is not valid JSON";
  }
});
timelineInput.addEventListener("input", () => {
  timeline.scrub(Number(timelineInput.value));
  renderCurrent();
});

void boot();
