"""Turn-based two-player game graphs for the manipulation domain.

States are owned by the robot or the human and carry label sets over the
declared propositions.  Robot and human moves strictly alternate, human
moves are free, and robot moves cost at least one unit of energy, which is
what bounds the budget-limited unfolding later on.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Iterable, Mapping

ROBOT = "robot"
HUMAN = "human"


class GameError(ValueError):
    pass


class GameFormatError(GameError):
    """Document is not a well-formed game file."""


class GameValidationError(GameError):
    """Document parsed but violates a structural invariant."""


@dataclass(frozen=True)
class Edge:
    source: str
    action: str
    target: str
    cost: int


class GameGraph:
    """Immutable-by-convention game graph; validated on construction."""

    def __init__(
        self,
        props: Iterable[str],
        states: Mapping[str, str],
        labels: Mapping[str, Iterable[str]],
        init: str,
        edges: Iterable[Edge],
    ):
        self.props = frozenset(props)
        self.owner = dict(states)
        self.labels = {s: frozenset(labels.get(s, ())) for s in self.owner}
        self.init = init
        self.edges = sorted(edges, key=lambda e: (e.source, e.action))
        self._moves = {}
        for e in self.edges:
            self._moves.setdefault(e.source, {})
            if e.action in self._moves[e.source]:
                raise GameValidationError(
                    f"nondeterministic action '{e.action}' at state '{e.source}'"
                )
            self._moves[e.source][e.action] = e
        self._validate()

    # -- queries ------------------------------------------------------------

    def moves(self, state: str) -> dict:
        """Available actions at a state, as {action: Edge}."""
        return self._moves.get(state, {})

    def states(self) -> list:
        return sorted(self.owner)

    def robot_states(self) -> list:
        return [s for s in self.states() if self.owner[s] == ROBOT]

    def human_states(self) -> list:
        return [s for s in self.states() if self.owner[s] == HUMAN]

    # -- validation ---------------------------------------------------------

    def _validate(self):
        if self.init not in self.owner:
            raise GameValidationError(f"initial state '{self.init}' not declared")
        for state, owner in self.owner.items():
            if owner not in (ROBOT, HUMAN):
                raise GameValidationError(
                    f"state '{state}' has unknown owner '{owner}'"
                )
            extra = self.labels[state] - self.props
            if extra:
                raise GameValidationError(
                    f"state '{state}' labeled with undeclared atom "
                    f"'{sorted(extra)[0]}'"
                )
        robot_actions = set()
        human_actions = set()
        for e in self.edges:
            if e.source not in self.owner:
                raise GameValidationError(f"edge from undeclared state '{e.source}'")
            if e.target not in self.owner:
                raise GameValidationError(f"edge to undeclared state '{e.target}'")
            if not isinstance(e.cost, int):
                raise GameValidationError(
                    f"edge ({e.source}, {e.action}) has non-integer cost"
                )
            if self.owner[e.source] == HUMAN:
                human_actions.add(e.action)
                if e.cost != 0:
                    raise GameValidationError(
                        f"human edge must cost 0: ({e.source}, {e.action}) "
                        f"costs {e.cost}"
                    )
                if self.owner[e.target] != ROBOT:
                    raise GameValidationError(
                        f"alternation violated: human edge ({e.source}, "
                        f"{e.action}) must end in a robot state"
                    )
            else:
                robot_actions.add(e.action)
                if e.cost < 1:
                    raise GameValidationError(
                        f"robot edge must cost at least 1: ({e.source}, "
                        f"{e.action}) costs {e.cost}"
                    )
                if self.owner[e.target] != HUMAN:
                    raise GameValidationError(
                        f"alternation violated: robot edge ({e.source}, "
                        f"{e.action}) must end in a human state"
                    )
        shared = robot_actions & human_actions
        if shared:
            raise GameValidationError(
                f"action '{sorted(shared)[0]}' used by both players"
            )
        for state in self.human_states():
            if not self._moves.get(state):
                raise GameValidationError(
                    f"human state '{state}' has no outgoing edge"
                )

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "props": sorted(self.props),
            "states": [
                {
                    "id": s,
                    "owner": self.owner[s],
                    "labels": sorted(self.labels[s]),
                }
                for s in self.states()
            ],
            "init": self.init,
            "edges": [
                {"from": e.source, "action": e.action, "to": e.target, "cost": e.cost}
                for e in self.edges
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def digest(self) -> str:
        """Stable content hash; strategy files use it to bind to a game."""
        payload = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def to_dot(self) -> str:
        lines = ["digraph game {", "  rankdir=TB;"]
        for s in self.states():
            shape = "box" if self.owner[s] == ROBOT else "ellipse"
            label = s
            if self.labels[s]:
                label += "\\n{" + ",".join(sorted(self.labels[s])) + "}"
            lines.append(f'  "{s}" [shape={shape}, label="{label}"];')
        for e in self.edges:
            style = ", style=dashed" if self.owner[e.source] == HUMAN else ""
            lines.append(
                f'  "{e.source}" -> "{e.target}" '
                f'[label="{e.action}/{e.cost}"{style}];'
            )
        lines.append("}")
        return "\n".join(lines) + "\n"


def from_dict(doc: dict) -> GameGraph:
    try:
        props = doc["props"]
        states = {s["id"]: s["owner"] for s in doc["states"]}
        labels = {s["id"]: s.get("labels", []) for s in doc["states"]}
        init = doc["init"]
        edges = [
            Edge(e["from"], e["action"], e["to"], e["cost"]) for e in doc["edges"]
        ]
    except (KeyError, TypeError) as exc:
        raise GameFormatError(f"malformed game document: missing {exc}") from exc
    if len(states) != len(doc["states"]):
        dupes = [s["id"] for s in doc["states"]]
        dupe = next(x for x in dupes if dupes.count(x) > 1)
        raise GameValidationError(f"duplicate state id '{dupe}'")
    return GameGraph(props, states, labels, init, edges)


def load_game(document: str) -> GameGraph:
    """Parse and validate a JSON game document."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise GameFormatError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise GameFormatError("game document must be a JSON object")
    return from_dict(doc)


def load_game_file(path: str) -> GameGraph:
    with open(path, "r", encoding="utf-8") as handle:
        return load_game(handle.read())


def find_cycles_without_robot_edge(game: GameGraph) -> list:
    """Sanity scan: every cycle must contain a robot edge (hence cost >= 1).

    Returns offending cycles as state lists; empty on valid alternating
    graphs, where this holds by construction.
    """
    offenders = []
    # restrict to human-only edges; any cycle there would be cost-free
    adjacency = {}
    for e in game.edges:
        if game.owner[e.source] == HUMAN:
            adjacency.setdefault(e.source, []).append(e.target)
    visiting, done = set(), set()

    def dfs(state, path):
        visiting.add(state)
        path.append(state)
        for nxt in adjacency.get(state, ()):
            if nxt in visiting:
                offenders.append(path[path.index(nxt):] + [nxt])
            elif nxt not in done:
                dfs(nxt, path)
        path.pop()
        visiting.discard(state)
        done.add(state)

    for s in game.states():
        if s not in done:
            dfs(s, [])
    return offenders


def reachable_states(game: GameGraph) -> set:
    seen = {game.init}
    stack = [game.init]
    while stack:
        state = stack.pop()
        for edge in game.moves(state).values():
            if edge.target not in seen:
                seen.add(edge.target)
                stack.append(edge.target)
    return seen
