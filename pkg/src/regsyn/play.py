"""Turn-by-turn execution of a synthesized strategy against human policies.

A play walks the product game; the robot consults the strategy's
(state, utility, best-alternate minimum) memory, the human is any policy.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import inf

from .product import ProductGame, ROBOT, HUMAN
from .regret import RegretStrategy


class PlayError(RuntimeError):
    pass


class IllegalActionError(PlayError):
    def __init__(self, action, legal):
        super().__init__(
            f"illegal action '{action}'; legal actions: {', '.join(legal)}"
        )
        self.action = action
        self.legal = list(legal)


class StrategyMismatchError(PlayError):
    pass


@dataclass
class PlayState:
    state: int          # product state
    u: int              # accumulated robot cost
    b: float            # running minimum of best-alternate values
    turn: str           # ROBOT or HUMAN
    done: bool

    def key(self):
        return (self.state, self.u, self.b)


@dataclass
class Step:
    index: int
    actor: str
    action: str
    cost: int
    payoff: int
    state: int
    labels: tuple


@dataclass
class PlayTrace:
    steps: list = field(default_factory=list)
    payoff: int = 0
    satisfied: bool = False

    def actions_of(self, actor: str) -> list:
        return [s.action for s in self.steps if s.actor == actor]

    def lines(self) -> list:
        out = []
        for s in self.steps:
            labels = "{" + ",".join(sorted(s.labels)) + "}"
            out.append(
                f"{s.index:3d} {s.actor:<5} {s.action:<20} cost={s.cost} "
                f"payoff={s.payoff} labels={labels}"
            )
        return out


def start(strategy: RegretStrategy, product: ProductGame,
          game_digest: str | None = None) -> PlayState:
    """Fresh play at the product root with empty memory."""
    if game_digest is not None and strategy.game_digest and \
            strategy.game_digest != game_digest:
        raise StrategyMismatchError(
            "strategy was synthesized for a different game "
            f"(expected digest {strategy.game_digest}, got {game_digest})"
        )
    state = product.init
    done = product.is_accepting(state)
    return PlayState(
        state=state, u=0, b=inf,
        turn=product.owner[state] if not done else ROBOT,
        done=done,
    )


def legal_actions(product: ProductGame, st: PlayState) -> list:
    if st.done:
        return []
    return sorted(product.moves(st.state))


def robot_move(strategy: RegretStrategy, product: ProductGame,
               st: PlayState):
    """Apply the strategy's choice; returns (action, next state)."""
    if st.done:
        raise PlayError("play is finished")
    if st.turn != ROBOT:
        raise PlayError("not the robot's turn")
    try:
        action = strategy.action_at(st.state, st.u, st.b)
    except KeyError as exc:
        raise StrategyMismatchError(str(exc)) from exc
    edge = product.moves(st.state)[action]
    b_next = min(st.b, strategy.ba_at(st.state, st.u, action))
    nxt = _advance(product, edge, st.u + edge.cost, b_next)
    return action, nxt


def human_move(product: ProductGame, st: PlayState, action: str) -> PlayState:
    if st.done:
        raise PlayError("play is finished")
    if st.turn != HUMAN:
        raise PlayError("not the human's turn")
    moves = product.moves(st.state)
    if action not in moves:
        raise IllegalActionError(action, sorted(moves))
    edge = moves[action]
    return _advance(product, edge, st.u, st.b)


def _advance(product: ProductGame, edge, u, b) -> PlayState:
    state = edge.target
    done = product.is_accepting(state)
    return PlayState(
        state=state, u=u, b=b,
        turn=product.owner[state] if not done else ROBOT,
        done=done,
    )


# ---------------------------------------------------------------------------
# Human policies
# ---------------------------------------------------------------------------

class HumanPolicy:
    """Chooses a legal human action for the current play state."""

    name = "policy"

    def choose(self, product: ProductGame, st: PlayState) -> str:
        raise NotImplementedError


class CooperativePolicy(HumanPolicy):
    """Minimizes the cooperative value of the successor state."""

    name = "cooperative"

    def __init__(self, coop_values: list):
        self.coop = coop_values

    def choose(self, product, st):
        moves = product.moves(st.state)
        return min(sorted(moves), key=lambda a: (self.coop[moves[a].target],))


class AdversarialPolicy(HumanPolicy):
    """Maximizes the regret bound, i.e. plays the best-response graph's
    max-player argmax; witnesses the synthesized root value."""

    name = "adversarial"

    def __init__(self, strategy: RegretStrategy):
        self.strategy = strategy

    def choose(self, product, st):
        moves = product.moves(st.state)

        def bound(action):
            edge = moves[action]
            nxt = _advance(product, edge, st.u, st.b)
            if nxt.done:
                return max(0, nxt.u - nxt.b)
            return self.strategy.value_at(*nxt.key())

        best, best_action = -inf, None
        for action in sorted(moves):
            value = bound(action)
            if value > best:
                best, best_action = value, action
        return best_action


class CostAdversarialPolicy(HumanPolicy):
    """Maximizes the min-max cost to completion (the classic worst case)."""

    name = "cost-adversarial"

    def __init__(self, adversarial_values: list):
        self.values = adversarial_values

    def choose(self, product, st):
        moves = product.moves(st.state)
        return max(
            sorted(moves),
            key=lambda a: (self.values[moves[a].target],
                           [-ord(c) for c in a]),
        )


class RandomPolicy(HumanPolicy):
    name = "random"

    def __init__(self, seed=0):
        self.rng = random.Random(seed)

    def choose(self, product, st):
        return self.rng.choice(sorted(product.moves(st.state)))


class ScriptedPolicy(HumanPolicy):
    """Plays a fixed action list; once exhausted, falls back to the
    lexicographically smallest legal action (usually the no-op)."""

    name = "scripted"

    def __init__(self, actions):
        self.script = list(actions)
        self.cursor = 0

    def choose(self, product, st):
        legal = sorted(product.moves(st.state))
        if self.cursor < len(self.script):
            action = self.script[self.cursor]
            self.cursor += 1
            if action not in legal:
                raise IllegalActionError(action, legal)
            return action
        return legal[0]


class InteractivePolicy(HumanPolicy):
    """Reads actions from standard input, prompting with the legal set."""

    name = "interactive"

    def __init__(self, reader=input, writer=print):
        self.reader = reader
        self.writer = writer

    def choose(self, product, st):
        legal = legal_actions(product, st)
        while True:
            self.writer(f"legal actions: {', '.join(legal)}")
            choice = self.reader("human> ").strip()
            if choice in legal:
                return choice
            self.writer(f"illegal action '{choice}'")


def simulate(strategy: RegretStrategy, product: ProductGame,
             policy: HumanPolicy, max_steps: int | None = None) -> PlayTrace:
    """Run a full play; deterministic for deterministic policies."""
    if max_steps is None:
        max_steps = 2 * len(strategy.values) + len(strategy.ba) + 16
    st = start(strategy, product)
    trace = PlayTrace()
    while not st.done:
        if len(trace.steps) >= max_steps:
            raise PlayError(
                f"play exceeded {max_steps} steps; the strategy or policy "
                "is not making progress"
            )
        if st.turn == ROBOT:
            action, nxt = robot_move(strategy, product, st)
            actor = ROBOT
        else:
            action = policy.choose(product, st)
            nxt = human_move(product, st, action)
            actor = HUMAN
        edge = product.moves(st.state)[action]
        trace.steps.append(Step(
            index=len(trace.steps),
            actor=actor,
            action=action,
            cost=edge.cost,
            payoff=nxt.u,
            state=nxt.state,
            labels=tuple(sorted(product.labels[nxt.state])),
        ))
        st = nxt
    trace.payoff = st.u
    trace.satisfied = product.is_accepting(st.state)
    return trace
