"""HTTP play service: synthesis-backed interactive sessions over JSON.

Sessions live in an in-memory LRU registry; evicted sessions are snapshotted
as (request, action history) and rebuilt on demand, since the synthesis
artifacts are large but fully recomputable.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
import time
from collections import OrderedDict
from dataclasses import dataclass, field
from math import inf
from typing import Optional

from fastapi import FastAPI, HTTPException, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import play as playmod
from .dfa import build_dfa
from .formula import FormulaError, parse
from .game import GameError, from_dict
from .product import HUMAN, ROBOT, adversarial_values, compose
from .regret import InfeasibleBudgetError, synthesize
from .scenarios import CapacityError, PRESET_NAMES, preset_scenario


class CreateSessionRequest(BaseModel):
    scenario: Optional[str] = None
    game: Optional[dict] = None
    formula: Optional[str] = None
    budget: Optional[int] = None
    blocks: int = 4
    locations: int = 4
    consume_initial_label: bool = False


class ActionRequest(BaseModel):
    action: str


@dataclass
class Session:
    id: str
    request: dict
    game: object
    product: object
    strategy: object
    scenario: object  # Scenario or None for uploaded games
    state: playmod.PlayState
    trace: list = field(default_factory=list)
    last_robot_action: Optional[str] = None
    created: float = field(default_factory=time.time)
    updated: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def human_actions(self) -> list:
        return [s.action for s in self.trace if s.actor == HUMAN]


class SessionRegistry:
    """LRU store with optional snapshot persistence on eviction."""

    def __init__(self, cap: int = 64, snapshot_dir: Optional[str] = None):
        self.cap = cap
        self.snapshot_dir = snapshot_dir
        self._sessions: OrderedDict = OrderedDict()
        self._lock = threading.Lock()

    def put(self, session: Session):
        with self._lock:
            self._sessions[session.id] = session
            self._sessions.move_to_end(session.id)
            while len(self._sessions) > self.cap:
                _, evicted = self._sessions.popitem(last=False)
                self._snapshot(evicted)

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is not None:
                self._sessions.move_to_end(session_id)
                return session
        session = self._restore(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        self.put(session)
        return session

    def delete(self, session_id: str):
        with self._lock:
            self._sessions.pop(session_id, None)
        if self.snapshot_dir:
            path = self._snapshot_path(session_id)
            if os.path.exists(path):
                os.remove(path)

    def _snapshot_path(self, session_id: str) -> str:
        return os.path.join(self.snapshot_dir, f"{session_id}.json")

    def _snapshot(self, session: Session):
        if not self.snapshot_dir:
            return
        os.makedirs(self.snapshot_dir, exist_ok=True)
        doc = {
            "id": session.id,
            "request": session.request,
            "human_actions": session.human_actions(),
        }
        with open(self._snapshot_path(session.id), "w", encoding="utf-8") as fh:
            json.dump(doc, fh)

    def _restore(self, session_id: str) -> Optional[Session]:
        if not self.snapshot_dir:
            return None
        path = self._snapshot_path(session_id)
        if not os.path.exists(path):
            return None
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        session = build_session(
            CreateSessionRequest(**doc["request"]), session_id=doc["id"]
        )
        for action in doc["human_actions"]:
            _apply_human(session, action)
        return session


def build_session(req: CreateSessionRequest, session_id=None) -> Session:
    scenario = None
    if (req.scenario is None) == (req.game is None):
        raise HTTPException(
            status_code=400,
            detail="exactly one of 'scenario' or 'game' is required",
        )
    try:
        if req.scenario is not None:
            if req.scenario not in PRESET_NAMES:
                raise HTTPException(
                    status_code=400, detail=f"unknown preset '{req.scenario}'"
                )
            kwargs = {}
            if req.scenario in ("arch", "line"):
                kwargs = dict(blocks=req.blocks, locations=req.locations)
            scenario = preset_scenario(req.scenario, **kwargs)
            game = scenario.game
            formula_text = req.formula or scenario.formula
            budget = req.budget
            if budget is None:
                budget = scenario.default_budget
        else:
            game = from_dict(req.game)
            if not req.formula:
                raise HTTPException(
                    status_code=400, detail="'formula' is required with 'game'"
                )
            formula_text = req.formula
            budget = req.budget
            if budget is None:
                raise HTTPException(status_code=400, detail="'budget' is required")
        formula = parse(formula_text, game.props)
        dfa = build_dfa(formula, game.props)
        product = compose(
            game, dfa, consume_initial_label=req.consume_initial_label
        )
        strategy = synthesize(
            product, budget,
            game_digest=game.digest(), formula=formula_text, props=game.props,
        )
    except InfeasibleBudgetError as exc:
        raise HTTPException(
            status_code=422,
            detail={
                "error": "budget below the minimal feasible budget",
                "b_min": int(exc.min_budget) if exc.min_budget != inf else None,
            },
        )
    except (FormulaError, GameError, CapacityError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    session = Session(
        id=session_id or secrets.token_urlsafe(16),
        request=req.model_dump(),
        game=game,
        product=product,
        strategy=strategy,
        scenario=scenario,
        state=playmod.start(strategy, product),
    )
    _advance_robot(session)
    return session


def _advance_robot(session: Session):
    """Let the robot reply until it is the human's turn or the play is done."""
    while not session.state.done and session.state.turn == ROBOT:
        action, nxt = playmod.robot_move(
            session.strategy, session.product, session.state
        )
        edge = session.product.moves(session.state.state)[action]
        session.trace.append(playmod.Step(
            index=len(session.trace), actor=ROBOT, action=action,
            cost=edge.cost, payoff=nxt.u, state=nxt.state,
            labels=tuple(sorted(session.product.labels[nxt.state])),
        ))
        session.last_robot_action = action
        session.state = nxt
    session.updated = time.time()


def _apply_human(session: Session, action: str):
    st = session.state
    try:
        nxt = playmod.human_move(session.product, st, action)
    except playmod.IllegalActionError as exc:
        raise HTTPException(
            status_code=400,
            detail={"error": str(exc), "legal_actions": exc.legal},
        )
    session.trace.append(playmod.Step(
        index=len(session.trace), actor=HUMAN, action=action,
        cost=0, payoff=nxt.u, state=nxt.state,
        labels=tuple(sorted(session.product.labels[nxt.state])),
    ))
    session.state = nxt
    _advance_robot(session)


def session_view(session: Session) -> dict:
    st = session.state
    product = session.product
    game_state = product.origin[st.state][0]
    if st.done:
        bound = max(0, st.u - st.b)
    else:
        bound = session.strategy.value_at(*st.key())
    view = {
        "session": session.id,
        "state": game_state,
        "labels": sorted(product.labels[st.state]),
        "turn": "done" if st.done else st.turn,
        "legal_actions": playmod.legal_actions(product, st)
        if not st.done and st.turn == HUMAN else [],
        "last_robot_action": session.last_robot_action,
        "payoff": st.u,
        "budget": session.strategy.budget,
        "budget_remaining": session.strategy.budget - st.u,
        "regret_bound": None if bound == inf else int(bound),
        "done": st.done,
        "satisfied": st.done and product.is_accepting(st.state),
        "step": len(session.trace),
    }
    if session.scenario is not None and session.scenario.placements:
        view["board"] = session.scenario.placements.get(game_state)
    return view


def create_app(session_cap: int = 64, snapshot_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="regsyn play service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    registry = SessionRegistry(cap=session_cap, snapshot_dir=snapshot_dir)
    app.state.registry = registry

    @app.get("/scenarios")
    def scenarios():
        out = []
        for name in PRESET_NAMES:
            scenario = preset_scenario(name)
            formula = parse(scenario.formula, scenario.game.props)
            dfa = build_dfa(formula, scenario.game.props)
            product = compose(scenario.game, dfa)
            values, _ = adversarial_values(product)
            b_min = values[product.init]
            out.append({
                "name": name,
                "description": scenario.description,
                "default_budget": scenario.default_budget,
                "b_min": None if b_min == inf else int(b_min),
                "formula": scenario.formula,
                "props": sorted(scenario.game.props),
                "board": scenario.board or None,
            })
        return out

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        session = build_session(req)
        registry.put(session)
        stats = session.strategy.stats
        return {
            "id": session.id,
            "stats": {
                "product_states": stats.product_states,
                "budget": stats.budget,
                "utility_nodes": stats.utility_nodes,
                "best_response_nodes": stats.best_response_nodes,
                "root_regret": int(stats.root_regret),
                "seconds": stats.seconds,
            },
            "board": session.scenario.board if session.scenario else None,
            "view": session_view(session),
        }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return session_view(registry.get(session_id))

    @app.post("/sessions/{session_id}/actions")
    def post_action(session_id: str, req: ActionRequest):
        session = registry.get(session_id)
        with session.lock:
            if session.state.done:
                raise HTTPException(
                    status_code=409, detail="the play is already finished"
                )
            if session.state.turn != HUMAN:
                raise HTTPException(
                    status_code=409, detail="not the human's turn"
                )
            _apply_human(session, req.action)
            return session_view(session)

    @app.get("/sessions/{session_id}/trace")
    def get_trace(session_id: str):
        session = registry.get(session_id)
        st = session.state
        return {
            "steps": [
                {
                    "step": s.index, "actor": s.actor, "action": s.action,
                    "cost": s.cost, "payoff": s.payoff, "state":
                    session.product.origin[s.state][0],
                    "labels": sorted(s.labels),
                }
                for s in session.trace
            ],
            "payoff": st.u,
            "done": st.done,
            "satisfied": st.done and session.product.is_accepting(st.state),
        }

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        registry.get(session_id)
        registry.delete(session_id)
        return Response(status_code=204)

    return app
