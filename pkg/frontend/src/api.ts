// Typed client for the play service. All game logic lives on the server;
// this module only shuttles JSON and normalizes errors.

export interface SessionView {
  session: string;
  state: string;
  labels: string[];
  turn: "robot" | "human" | "done";
  legal_actions: string[];
  last_robot_action: string | null;
  payoff: number;
  budget: number;
  budget_remaining: number;
  regret_bound: number | null;
  done: boolean;
  satisfied: boolean;
  step: number;
  board?: Record<string, string> | null;
}

export interface BoardGeometry {
  regions: Record<string, string>;
  slots: Record<string, { region: string; x: number; y: number }>;
  blocks: Record<string, string>;
}

export interface ScenarioInfo {
  name: string;
  description: string;
  default_budget: number;
  b_min: number | null;
  formula: string;
  props: string[];
  board: BoardGeometry | null;
}

export interface SynthesisStats {
  product_states: number;
  budget: number;
  utility_nodes: number;
  best_response_nodes: number;
  root_regret: number;
  seconds: number;
}

export interface CreatedSession {
  id: string;
  stats: SynthesisStats;
  board: BoardGeometry | null;
  view: SessionView;
}

export interface ApiError {
  status: number;
  message: string;
  legalActions?: string[];
  bMin?: number | null;
}

export type Fetcher = (url: string, init?: RequestInit) => Promise<Response>;

function toError(status: number, body: unknown): ApiError {
  if (body && typeof body === "object" && "detail" in body) {
    const detail = (body as { detail: unknown }).detail;
    if (typeof detail === "string") {
      return { status, message: detail };
    }
    if (detail && typeof detail === "object") {
      const d = detail as {
        error?: string;
        legal_actions?: string[];
        b_min?: number | null;
      };
      return {
        status,
        message: d.error ?? JSON.stringify(detail),
        legalActions: d.legal_actions,
        bMin: d.b_min,
      };
    }
  }
  return { status, message: `request failed with status ${status}` };
}

export class PlayClient {
  constructor(
    private baseUrl: string,
    private fetcher: Fetcher = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetcher(`${this.baseUrl}${path}`, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    const body = response.status === 204 ? null : await response.json();
    if (!response.ok) {
      throw toError(response.status, body);
    }
    return body as T;
  }

  scenarios(): Promise<ScenarioInfo[]> {
    return this.request("/scenarios");
  }

  createSession(request: {
    scenario?: string;
    game?: unknown;
    formula?: string;
    budget?: number;
  }): Promise<CreatedSession> {
    return this.request("/sessions", {
      method: "POST",
      body: JSON.stringify(request),
    });
  }

  view(sessionId: string): Promise<SessionView> {
    return this.request(`/sessions/${sessionId}`);
  }

  act(sessionId: string, action: string): Promise<SessionView> {
    return this.request(`/sessions/${sessionId}/actions`, {
      method: "POST",
      body: JSON.stringify({ action }),
    });
  }

  trace(sessionId: string): Promise<{
    steps: {
      step: number;
      actor: string;
      action: string;
      cost: number;
      payoff: number;
      state: string;
      labels: string[];
    }[];
    payoff: number;
    done: boolean;
    satisfied: boolean;
  }> {
    return this.request(`/sessions/${sessionId}/trace`);
  }

  remove(sessionId: string): Promise<null> {
    return this.request(`/sessions/${sessionId}`, { method: "DELETE" });
  }
}
