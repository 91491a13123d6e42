// Action buttons: one per legal human action, posting to the service and
// handing the next view back to the app. The browser never decides
// legality itself; late or duplicate clicks surface the server's verdict.

import type { ApiError, PlayClient, SessionView } from "./api.js";
import { actionList } from "./model.js";

export interface PanelCallbacks {
  onView: (view: SessionView) => void;
  onNotice: (message: string) => void;
}

export class ActionPanel {
  private busy = false;

  constructor(
    private container: HTMLElement,
    private client: PlayClient,
    private callbacks: PanelCallbacks,
  ) {}

  render(view: SessionView | null, enabled: boolean): void {
    this.container.innerHTML = "";
    if (!view) {
      return;
    }
    const actions = actionList(view);
    if (view.done) {
      const note = document.createElement("div");
      note.className = "panel-note";
      note.textContent = view.satisfied
        ? "Done. Start a new round to play again."
        : "The play is over.";
      this.container.appendChild(note);
      return;
    }
    for (const action of actions) {
      const button = document.createElement("button");
      button.className = "action";
      button.textContent = action;
      button.disabled = !enabled || this.busy;
      button.addEventListener("click", () => this.post(view.session, action));
      this.container.appendChild(button);
    }
  }

  private async post(sessionId: string, action: string): Promise<void> {
    if (this.busy) {
      return; // a click race resolves to the in-flight action
    }
    this.busy = true;
    this.setDisabled(true);
    try {
      const view = await this.client.act(sessionId, action);
      this.callbacks.onView(view);
    } catch (error) {
      const apiError = error as ApiError;
      if (apiError.status === 409) {
        this.callbacks.onNotice("Not your turn - the board was refreshed.");
        const view = await this.client.view(sessionId);
        this.callbacks.onView(view);
      } else if (apiError.status === 400) {
        const legal = apiError.legalActions?.join(", ") ?? "";
        this.callbacks.onNotice(
          `That move is not available${legal ? ` (try: ${legal})` : ""}.`,
        );
      } else {
        this.callbacks.onNotice(apiError.message ?? "request failed");
      }
    } finally {
      this.busy = false;
    }
  }

  private setDisabled(disabled: boolean): void {
    for (const button of this.container.querySelectorAll("button")) {
      (button as HTMLButtonElement).disabled = disabled;
    }
  }
}
