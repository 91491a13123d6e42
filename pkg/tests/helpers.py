"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

import itertools
import random
from math import inf

from regsyn.formula import (
    And, Atom, Bottom, Eventually, Formula, Globally, Implies, Next, Not, Or,
    Release, Top, Until, WeakNext,
)
from regsyn.game import Edge, GameGraph, HUMAN, ROBOT
from regsyn.product import ProductEdge, ProductGame, STAY


# ---------------------------------------------------------------------------
# Random formulas and traces
# ---------------------------------------------------------------------------

_UNARY = (Not, Next, WeakNext, Eventually, Globally)
_BINARY = (And, Or, Implies, Until, Release)


def random_formula(rng: random.Random, atoms, depth: int) -> Formula:
    if depth <= 0 or rng.random() < 0.25:
        roll = rng.random()
        if roll < 0.1:
            return Top()
        if roll < 0.2:
            return Bottom()
        return Atom(rng.choice(atoms))
    if rng.random() < 0.45:
        kind = rng.choice(_UNARY)
        return kind(random_formula(rng, atoms, depth - 1))
    kind = rng.choice(_BINARY)
    return kind(
        random_formula(rng, atoms, depth - 1),
        random_formula(rng, atoms, depth - 1),
    )


def random_trace(rng: random.Random, atoms, min_len=1, max_len=6):
    length = rng.randint(min_len, max_len)
    return tuple(
        frozenset(a for a in atoms if rng.random() < 0.5) for _ in range(length)
    )


def all_traces(atoms, max_len):
    letters = [frozenset(c) for r in range(len(atoms) + 1)
               for c in itertools.combinations(sorted(atoms), r)]
    for length in range(max_len + 1):
        for combo in itertools.product(letters, repeat=length):
            yield combo


# ---------------------------------------------------------------------------
# Random games and products
# ---------------------------------------------------------------------------

def random_game(rng: random.Random, n_states=6, props=("a", "b")):
    """Small valid alternating game graph."""
    n = rng.randint(4, n_states)
    owners = {}
    owners["v0"] = rng.choice([ROBOT, HUMAN])
    for i in range(1, n):
        owners[f"v{i}"] = rng.choice([ROBOT, HUMAN])
    # make sure both sides exist so alternation has targets
    if all(o == ROBOT for o in owners.values()):
        owners["v1"] = HUMAN
    if all(o == HUMAN for o in owners.values()):
        owners["v1"] = ROBOT
    robots = [s for s, o in owners.items() if o == ROBOT]
    humans = [s for s, o in owners.items() if o == HUMAN]
    labels = {
        s: frozenset(p for p in props if rng.random() < 0.4) for s in owners
    }
    edges = []
    for s, owner in owners.items():
        targets = humans if owner == ROBOT else robots
        count = rng.randint(1, 2) if owner == HUMAN else rng.randint(0, 2)
        for k in range(count):
            prefix = "a" if owner == ROBOT else "e"
            cost = rng.randint(1, 4) if owner == ROBOT else 0
            edges.append(
                Edge(s, f"{prefix}{k}", rng.choice(targets), cost)
            )
    return GameGraph(props, owners, labels, "v0", edges)


def random_product(rng: random.Random, max_states=8) -> ProductGame:
    """Small product game honoring alternation, free human moves and
    absorbing accepting states."""
    n = rng.randint(2, max_states)
    owner = [rng.choice([ROBOT, HUMAN]) for _ in range(n)]
    if ROBOT not in owner:
        owner[rng.randrange(n)] = ROBOT
    if HUMAN not in owner:
        owner[rng.randrange(n)] = HUMAN
    robots = [i for i, o in enumerate(owner) if o == ROBOT]
    humans = [i for i, o in enumerate(owner) if o == HUMAN]
    accepting = {i for i in range(n) if rng.random() < 0.25}
    edges = []
    for s in range(n):
        if s in accepting:
            edges.append(ProductEdge(s, STAY, s, 0))
            continue
        if owner[s] == ROBOT:
            for k in range(rng.randint(0, 3)):
                edges.append(
                    ProductEdge(s, f"a{k}", rng.choice(humans), rng.randint(1, 4))
                )
        else:
            for k in range(rng.randint(1, 2)):
                edges.append(ProductEdge(s, f"e{k}", rng.choice(robots), 0))
    # dedupe (source, action)
    seen = set()
    unique = []
    for e in edges:
        if (e.source, e.action) not in seen:
            seen.add((e.source, e.action))
            unique.append(e)
    return ProductGame(
        owner=owner,
        origin=[(f"s{i}", 0) for i in range(n)],
        accepting=accepting,
        edges=unique,
        init=0,
    )


# ---------------------------------------------------------------------------
# Independent oracles
# ---------------------------------------------------------------------------

def coop_cost_enum(product: ProductGame, state: int, visited=frozenset()):
    """Cheapest fully cooperative completion cost via simple-path search."""
    if product.is_accepting(state):
        return 0
    best = inf
    for e in product.moves(state).values():
        if e.target in visited:
            continue
        sub = coop_cost_enum(product, e.target, visited | {e.target})
        best = min(best, e.cost + sub)
    return best


def minimax_cost_enum(product: ProductGame):
    """Min over memoryless robot strategies of max over memoryless human
    strategies of the play payoff (infinite when the play never accepts)."""
    robot_states = [s for s in range(product.n_states)
                    if product.owner[s] == ROBOT and not product.is_accepting(s)
                    and product.moves(s)]
    human_states = [s for s in range(product.n_states)
                    if product.owner[s] == HUMAN and not product.is_accepting(s)
                    and product.moves(s)]

    def plays(strategy_map):
        state, payoff, seen = product.init, 0, set()
        while True:
            if product.is_accepting(state):
                return payoff
            if state in seen:
                return inf
            seen.add(state)
            action = strategy_map.get(state)
            if action is None:
                return inf
            edge = product.moves(state)[action]
            payoff += edge.cost
            state = edge.target

    robot_choices = [sorted(product.moves(s)) for s in robot_states]
    human_choices = [sorted(product.moves(s)) for s in human_states]
    best = inf
    for robot_combo in itertools.product(*robot_choices):
        sigma = dict(zip(robot_states, robot_combo))
        worst = 0
        for human_combo in itertools.product(*human_choices):
            tau = dict(zip(human_states, human_combo))
            worst = max(worst, plays({**sigma, **tau}))
            if worst == inf:
                break
        best = min(best, worst)
    return best


def unfolded_pairs(product: ProductGame, budget: int):
    """Reachable (state, utility) pairs by plain depth-first expansion,
    skipping edges that would exceed the budget (tree expansion quotiented
    by (state, utility))."""
    seen = set()
    stack = [(product.init, 0)]
    while stack:
        state, u = stack.pop()
        if (state, u) in seen:
            continue
        seen.add((state, u))
        if product.is_accepting(state):
            continue
        for e in product.moves(state).values():
            if u + e.cost <= budget:
                stack.append((e.target, u + e.cost))
    return seen


def enumerate_strategy_plays(product: ProductGame, strategy, budget: int):
    """Every play of the synthesized strategy against every human behavior.

    Returns a list of (payoff, accepting) pairs, one per maximal play.
    """
    results = []

    def walk(state, u, b, depth):
        assert depth < 10_000, "runaway play"
        if product.is_accepting(state):
            results.append((u, True))
            return
        moves = product.moves(state)
        if product.owner[state] == ROBOT:
            action = strategy.action_at(state, u, b)
            edge = moves[action]
            walk(edge.target, u + edge.cost,
                 min(b, strategy.ba_at(state, u, action)), depth + 1)
        else:
            if not moves:
                results.append((u, False))
                return
            for action in sorted(moves):
                edge = moves[action]
                walk(edge.target, u, b, depth + 1)

    walk(product.init, 0, inf, 0)
    return results


def walk_baseline(product: ProductGame, values, strategy_map, human_choice):
    """Play the memoryless min-max strategy against a human choice function;
    returns the total payoff."""
    state, payoff, steps = product.init, 0, 0
    while not product.is_accepting(state):
        steps += 1
        assert steps < 10_000, "runaway baseline play"
        if product.owner[state] == ROBOT:
            action = strategy_map[state]
        else:
            action = human_choice(state)
        edge = product.moves(state)[action]
        payoff += edge.cost
        state = edge.target
    return payoff
