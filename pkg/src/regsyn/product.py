"""DFA game: product of a game graph with a task automaton, plus the two
baseline quantitative solvers (cooperative and adversarial values).

A play satisfies the task as soon as some prefix of its label trace is
accepted.  The automaton consumes the label of the state being left, so a
product state whose label would drive the automaton into an accepting state
is itself terminal: it absorbs with a zero-cost self-loop and no further
energy can be spent.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import inf

from .dfa import Dfa
from .game import GameGraph, HUMAN, ROBOT

STAY = "stay"  # reserved action name for the accepting self-loop


class CompositionError(ValueError):
    pass


@dataclass(frozen=True)
class ProductEdge:
    source: int
    action: str
    target: int
    cost: int


class ProductGame:
    """Reachable product of a game graph and a DFA.

    States are integer ids; `origin[s]` gives the underlying
    (game state, dfa state) pair.  Accepting states carry exactly one edge,
    the zero-cost self-loop.
    """

    def __init__(self, owner, origin, accepting, edges, init=0, label_map=None):
        self.owner = list(owner)
        self.origin = list(origin)
        self.accepting = frozenset(accepting)
        self.init = init
        self.labels = list(label_map) if label_map else [frozenset()] * len(owner)
        self._moves = [dict() for _ in self.owner]
        for e in edges:
            if e.action in self._moves[e.source]:
                raise CompositionError(
                    f"nondeterministic action '{e.action}' at product state {e.source}"
                )
            self._moves[e.source][e.action] = e

    @property
    def n_states(self) -> int:
        return len(self.owner)

    def moves(self, state: int) -> dict:
        return self._moves[state]

    def edges(self):
        for moves in self._moves:
            yield from moves.values()

    def is_accepting(self, state: int) -> bool:
        return state in self.accepting

    def to_dot(self) -> str:
        lines = ["digraph product {", "  rankdir=TB;"]
        for s in range(self.n_states):
            game_state, z = self.origin[s]
            shape = "box" if self.owner[s] == ROBOT else "ellipse"
            peripheries = ", peripheries=2" if s in self.accepting else ""
            lines.append(
                f'  s{s} [shape={shape}, label="{game_state},q{z}"{peripheries}];'
            )
        for s in range(self.n_states):
            for action in sorted(self._moves[s]):
                e = self._moves[s][action]
                lines.append(
                    f"  s{e.source} -> s{e.target} "
                    f'[label="{e.action}/{e.cost}"];'
                )
        lines.append("}")
        return "\n".join(lines) + "\n"


def compose(
    game: GameGraph, dfa: Dfa, *, consume_initial_label: bool = False
) -> ProductGame:
    """Build the reachable DFA game.

    The automaton steps on the label of the source state; a state from which
    that step (or the state's own automaton component) is accepting is
    terminal.  `consume_initial_label` additionally advances the automaton
    by the initial state's label before play starts (experimental).
    """
    missing = sorted(
        {a for s in game.states() for a in game.labels[s]} - set(dfa.props)
    )
    if missing:
        raise CompositionError(
            f"game label atom '{missing[0]}' is not in the automaton alphabet"
        )

    z0 = dfa.init
    if consume_initial_label:
        z0 = dfa.step(z0, game.labels[game.init])
    start = (game.init, z0)
    index = {start: 0}
    order = [start]
    owner, labels, accepting, edges = [], [], set(), []
    frontier = 0
    while frontier < len(order):
        v, z = order[frontier]
        sid = frontier
        frontier += 1
        owner.append(game.owner[v])
        labels.append(game.labels[v])
        z_next = dfa.step(z, game.labels[v])
        if z in dfa.accepting or z_next in dfa.accepting:
            # the prefix through v satisfies the task: terminal state
            accepting.add(sid)
            edges.append(ProductEdge(sid, STAY, sid, 0))
            continue
        for action in sorted(game.moves(v)):
            game_edge = game.moves(v)[action]
            succ = (game_edge.target, z_next)
            target = index.get(succ)
            if target is None:
                target = len(order)
                index[succ] = target
                order.append(succ)
            edges.append(ProductEdge(sid, action, target, game_edge.cost))
    return ProductGame(
        owner=owner,
        origin=order,
        accepting=accepting,
        edges=edges,
        init=0,
        label_map=labels,
    )


# ---------------------------------------------------------------------------
# Baseline solvers
# ---------------------------------------------------------------------------

def coop_values(product: ProductGame) -> list:
    """Least cost to the accepting set when both players minimize.

    Dijkstra on the reversed graph from the accepting states; `inf` marks
    states from which the task is unreachable even with full cooperation.
    """
    reverse = [[] for _ in range(product.n_states)]
    for e in product.edges():
        if e.source != e.target:
            reverse[e.target].append((e.source, e.cost))
    dist = [inf] * product.n_states
    heap = []
    for s in sorted(product.accepting):
        dist[s] = 0
        heapq.heappush(heap, (0, s))
    while heap:
        d, s = heapq.heappop(heap)
        if d > dist[s]:
            continue
        for pred, cost in reverse[s]:
            nd = d + cost
            if nd < dist[pred]:
                dist[pred] = nd
                heapq.heappush(heap, (nd, pred))
    return dist


def adversarial_values(product: ProductGame):
    """Min-max cost of forcing the accepting set against a worst-case human.

    Iterates the Bellman operator to a fixpoint from an all-infinite start
    (values only decrease and are integers, so this terminates).  Returns
    the value list and a memoryless robot strategy attaining it; the value
    at the initial state is the minimal feasible energy budget.
    """
    values = [0 if product.is_accepting(s) else inf for s in range(product.n_states)]
    changed = True
    while changed:
        changed = False
        for s in range(product.n_states):
            if product.is_accepting(s):
                continue
            moves = product.moves(s)
            if not moves:
                continue  # robot dead end stays infinite
            if product.owner[s] == ROBOT:
                best = min(e.cost + values[e.target] for e in moves.values())
            else:
                best = max(values[e.target] for e in moves.values())
            if best < values[s]:
                values[s] = best
                changed = True
    strategy = {}
    for s in range(product.n_states):
        if product.owner[s] != ROBOT or product.is_accepting(s):
            continue
        if values[s] is inf:
            continue
        for action in sorted(product.moves(s)):
            e = product.moves(s)[action]
            if e.cost + values[e.target] == values[s]:
                strategy[s] = action
                break
    return values, strategy
