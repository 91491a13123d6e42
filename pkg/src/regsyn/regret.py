"""Regret-minimizing strategy synthesis on a DFA game with an energy budget.

Pipeline: unfold the product into a utility graph bounded by the budget,
attach best-alternate response values to robot edges, expand into the
best-response graph keyed by the running minimum of those values, and run a
single backward sweep to get the min-max regret and a strategy attaining it.
`brute_force_regret` evaluates the same objective by plain recursion over
the unmerged play tree and is the correctness oracle for the pipeline.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from math import inf

from .product import ProductGame, ROBOT, adversarial_values, coop_values

DEFAULT_NODE_BUDGET = 2_000_000

ACCEPT = "accept"
DEAD = "dead"
INTERNAL = "internal"


class GraphSizeError(RuntimeError):
    pass


class InfeasibleBudgetError(RuntimeError):
    """No strategy completes the task within the budget."""

    def __init__(self, budget, min_budget):
        super().__init__(
            f"no strategy within budget {budget}; minimal budget is "
            f"B_min = {min_budget}"
        )
        self.budget = budget
        self.min_budget = min_budget


# ---------------------------------------------------------------------------
# Graph of utility
# ---------------------------------------------------------------------------

class UtilityGraph:
    """Budget-bounded unfolding of the product, nodes merged on (state, u).

    Kinds: ACCEPT and DEAD nodes are leaves; a robot node all of whose moves
    would overshoot the budget is DEAD with the pruned actions recorded.
    """

    def __init__(self, product: ProductGame, budget: int):
        self.product = product
        self.budget = budget
        self.keys = []     # (product state, accumulated utility)
        self.edges = []    # per node: list of (action, cost, target index)
        self.kind = []
        self.pruned = []   # per node: actions dropped as overshooting
        self.index = {}

    @property
    def n_nodes(self) -> int:
        return len(self.keys)

    def owner(self, node: int) -> str:
        return self.product.owner[self.keys[node][0]]

    def utility(self, node: int) -> int:
        return self.keys[node][1]

    def leaf_utilities(self, kind: str = ACCEPT) -> list:
        return sorted(self.utility(i) for i in range(self.n_nodes)
                      if self.kind[i] == kind)


def unfold_utility(
    product: ProductGame,
    budget: int,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> UtilityGraph:
    """Forward expansion from (initial state, 0); edges that would push the
    accumulated utility past the budget are pruned."""
    if budget < 0:
        raise ValueError("budget must be non-negative")
    gu = UtilityGraph(product, budget)

    def intern(state, u):
        key = (state, u)
        node = gu.index.get(key)
        if node is None:
            node = len(gu.keys)
            if node >= node_budget:
                raise GraphSizeError(
                    f"utility graph exceeded {node_budget} nodes; "
                    "try a smaller budget"
                )
            gu.index[key] = node
            gu.keys.append(key)
            gu.edges.append([])
            gu.kind.append(None)
            gu.pruned.append([])
            queue.append(node)
        return node

    queue = []
    intern(product.init, 0)
    head = 0
    while head < len(queue):
        node = queue[head]
        head += 1
        state, u = gu.keys[node]
        if product.is_accepting(state):
            gu.kind[node] = ACCEPT
            continue
        for action in sorted(product.moves(state)):
            e = product.moves(state)[action]
            if u + e.cost > budget:
                gu.pruned[node].append(action)
                continue
            target = intern(e.target, u + e.cost)
            gu.edges[node].append((action, e.cost, target))
        gu.kind[node] = INTERNAL if gu.edges[node] else DEAD
    return gu


# ---------------------------------------------------------------------------
# Best-alternate responses
# ---------------------------------------------------------------------------

def compute_ba(gu: UtilityGraph, coop: list, *, budgeted: bool = False) -> dict:
    """Best-alternate response per robot edge of the utility graph.

    For edge (node, action): the cheapest completion the robot declined,
    i.e. min over the other actions of u + cost + cooperative value of the
    target; infinite when the action had no sibling.  Alternatives ignore
    the budget unless `budgeted` is set.
    """
    product = gu.product
    ba = {}
    for node in range(gu.n_nodes):
        if gu.kind[node] != INTERNAL or gu.owner(node) != ROBOT:
            continue
        state, u = gu.keys[node]
        moves = product.moves(state)
        costs = {
            action: u + e.cost + coop[e.target] for action, e in moves.items()
        }
        if budgeted:
            costs = {a: c for a, c in costs.items() if c <= gu.budget}
        for action, _, _ in gu.edges[node]:
            alternatives = [c for a, c in costs.items() if a != action]
            ba[(node, action)] = min(alternatives, default=inf)
    return ba


# ---------------------------------------------------------------------------
# Graph of best response
# ---------------------------------------------------------------------------

class BestResponseGraph:
    """Utility graph further keyed by the running minimum of best-alternate
    values along the history; the structure backward value iteration runs on."""

    def __init__(self, gu: UtilityGraph, ba: dict):
        self.gu = gu
        self.ba = ba
        self.keys = []    # (utility node, running min b)
        self.edges = []   # per node: list of (action, target index)
        self.index = {}

    @property
    def n_nodes(self) -> int:
        return len(self.keys)

    def leaf_regret(self, node: int):
        gu_node, b = self.keys[node]
        kind = self.gu.kind[gu_node]
        if kind == ACCEPT:
            return max(0, self.gu.utility(gu_node) - b)
        if kind == DEAD:
            return inf
        return None


def build_best_response_graph(
    gu: UtilityGraph,
    ba: dict,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> BestResponseGraph:
    gbr = BestResponseGraph(gu, ba)

    def intern(gu_node, b):
        key = (gu_node, b)
        node = gbr.index.get(key)
        if node is None:
            node = len(gbr.keys)
            if node >= node_budget:
                raise GraphSizeError(
                    f"best-response graph exceeded {node_budget} nodes; "
                    "try a smaller budget"
                )
            gbr.index[key] = node
            gbr.keys.append(key)
            gbr.edges.append([])
            queue.append(node)
        return node

    queue = []
    intern(0, inf)
    head = 0
    while head < len(queue):
        node = queue[head]
        head += 1
        gu_node, b = gbr.keys[node]
        robot = gu.owner(gu_node) == ROBOT
        for action, _, target in gu.edges[gu_node]:
            b_next = min(b, ba[(gu_node, action)]) if robot else b
            gbr.edges[node].append((action, intern(target, b_next)))
    return gbr


# ---------------------------------------------------------------------------
# Backward value iteration and strategies
# ---------------------------------------------------------------------------

@dataclass
class SynthesisStats:
    product_states: int
    budget: int
    utility_nodes: int
    best_response_nodes: int
    root_regret: float
    seconds: float

    def row(self) -> str:
        regret = "inf" if self.root_regret == inf else str(int(self.root_regret))
        return (
            f"|S_P|={self.product_states} B={self.budget} "
            f"|Gu|={self.utility_nodes} |Gbr|={self.best_response_nodes} "
            f"regret={regret} time={self.seconds:.3f}s"
        )


@dataclass
class RegretStrategy:
    """Finite-memory robot strategy: memory is (accumulated utility,
    running best-alternate minimum) on top of the product state."""

    budget: int
    root_regret: float
    game_digest: str
    formula: str
    props: list
    actions: dict          # (state, u, b) -> action, robot nodes only
    values: dict           # (state, u, b) -> regret bound, all finite nodes
    ba: dict               # (state, u, action) -> best-alternate value
    stats: SynthesisStats | None = None

    def action_at(self, state: int, u: int, b) -> str:
        key = (state, u, b)
        if key not in self.actions:
            raise KeyError(
                f"strategy has no action for node {key}; the strategy file "
                "does not match this game or was corrupted"
            )
        return self.actions[key]

    def ba_at(self, state: int, u: int, action: str):
        return self.ba.get((state, u, action), inf)

    def value_at(self, state: int, u: int, b):
        return self.values.get((state, u, b), inf)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> str:
        def enc(x):
            return "inf" if x == inf else x

        doc = {
            "budget": self.budget,
            "root_regret": enc(self.root_regret),
            "game": self.game_digest,
            "formula": self.formula,
            "props": sorted(self.props),
            "ba": [
                {"state": s, "u": u, "action": a, "value": enc(v)}
                for (s, u, a), v in sorted(self.ba.items())
            ],
            "nodes": [
                {
                    "state": s,
                    "u": u,
                    "b": enc(b),
                    "value": enc(self.values[(s, u, b)]),
                    "action": self.actions.get((s, u, b)),
                }
                for (s, u, b) in sorted(
                    self.values, key=lambda k: (k[0], k[1], k[2] == inf, k[2])
                )
            ],
        }
        if self.stats is not None:
            doc["stats"] = {
                "product_states": self.stats.product_states,
                "budget": self.stats.budget,
                "utility_nodes": self.stats.utility_nodes,
                "best_response_nodes": self.stats.best_response_nodes,
                "root_regret": enc(self.stats.root_regret),
                "seconds": self.stats.seconds,
            }
        return json.dumps(doc, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RegretStrategy":
        def dec(x):
            return inf if x == "inf" else x

        doc = json.loads(text)
        actions = {}
        values = {}
        for row in doc["nodes"]:
            key = (row["state"], row["u"], dec(row["b"]))
            values[key] = dec(row["value"])
            if row["action"] is not None:
                actions[key] = row["action"]
        ba = {
            (row["state"], row["u"], row["action"]): dec(row["value"])
            for row in doc["ba"]
        }
        stats = None
        if "stats" in doc:
            s = doc["stats"]
            stats = SynthesisStats(
                product_states=s["product_states"],
                budget=s["budget"],
                utility_nodes=s["utility_nodes"],
                best_response_nodes=s["best_response_nodes"],
                root_regret=dec(s["root_regret"]),
                seconds=s["seconds"],
            )
        return cls(
            budget=doc["budget"],
            root_regret=dec(doc["root_regret"]),
            game_digest=doc["game"],
            formula=doc["formula"],
            props=doc["props"],
            actions=actions,
            values=values,
            ba=ba,
            stats=stats,
        )


def backward_values(gbr: BestResponseGraph):
    """One reverse-topological sweep over the best-response DAG.

    Robot nodes take the minimum over successors, human nodes the maximum;
    ties at robot nodes break lexicographically by action name.  Returns the
    root value and the per-node values and choices.
    """
    gu = gbr.gu
    order = sorted(
        range(gbr.n_nodes),
        key=lambda n: (gu.utility(gbr.keys[n][0]),
                       1 if gu.owner(gbr.keys[n][0]) == ROBOT else 0),
        reverse=True,
    )
    values = [inf] * gbr.n_nodes
    choice = [None] * gbr.n_nodes
    for node in order:
        leaf = gbr.leaf_regret(node)
        if leaf is not None:
            values[node] = leaf
            continue
        if gu.owner(gbr.keys[node][0]) == ROBOT:
            best, best_action = inf, None
            for action, target in sorted(gbr.edges[node]):
                if values[target] < best:
                    best, best_action = values[target], action
            values[node] = best
            choice[node] = best_action
        else:
            values[node] = max(values[target] for _, target in gbr.edges[node])
    return values[0], values, choice


def extract_strategy(
    gbr: BestResponseGraph,
    values: list,
    choice: list,
    *,
    game_digest: str = "",
    formula: str = "",
    props=(),
    stats: SynthesisStats | None = None,
) -> RegretStrategy:
    gu = gbr.gu
    actions, value_map, ba_map = {}, {}, {}
    for node in range(gbr.n_nodes):
        if values[node] == inf:
            continue
        gu_node, b = gbr.keys[node]
        state, u = gu.keys[gu_node]
        key = (state, u, b)
        value_map[key] = values[node]
        if choice[node] is not None:
            actions[key] = choice[node]
    for (gu_node, action), value in gbr.ba.items():
        state, u = gu.keys[gu_node]
        ba_map[(state, u, action)] = value
    return RegretStrategy(
        budget=gu.budget,
        root_regret=values[0],
        game_digest=game_digest,
        formula=formula,
        props=list(props),
        actions=actions,
        values=value_map,
        ba=ba_map,
        stats=stats,
    )


def synthesize(
    product: ProductGame,
    budget: int,
    *,
    budgeted_ba: bool = False,
    node_budget: int = DEFAULT_NODE_BUDGET,
    game_digest: str = "",
    formula: str = "",
    props=(),
    coop: list | None = None,
) -> RegretStrategy:
    """Full pipeline; raises InfeasibleBudgetError (carrying the minimal
    feasible budget) when no strategy can guarantee completion within B."""
    started = time.perf_counter()
    if coop is None:
        coop = coop_values(product)
    gu = unfold_utility(product, budget, node_budget=node_budget)
    ba = compute_ba(gu, coop, budgeted=budgeted_ba)
    gbr = build_best_response_graph(gu, ba, node_budget=node_budget)
    root, values, choice = backward_values(gbr)
    elapsed = time.perf_counter() - started
    if root == inf:
        min_budget = adversarial_values(product)[0][product.init]
        raise InfeasibleBudgetError(budget, min_budget)
    stats = SynthesisStats(
        product_states=product.n_states,
        budget=budget,
        utility_nodes=gu.n_nodes,
        best_response_nodes=gbr.n_nodes,
        root_regret=root,
        seconds=elapsed,
    )
    return extract_strategy(
        gbr, values, choice,
        game_digest=game_digest, formula=formula, props=props, stats=stats,
    )


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

def _bellman_ford_coop(product: ProductGame) -> list:
    """Cooperative values by plain edge relaxation (independent of the
    Dijkstra-based solver)."""
    dist = [0 if product.is_accepting(s) else inf for s in range(product.n_states)]
    for _ in range(product.n_states):
        changed = False
        for e in product.edges():
            if e.source == e.target:
                continue
            candidate = e.cost + dist[e.target]
            if candidate < dist[e.source]:
                dist[e.source] = candidate
                changed = True
        if not changed:
            break
    return dist


def brute_force_regret(
    product: ProductGame, budget: int, *, max_nodes: int = 500_000
):
    """Min-max regret by recursion over the unmerged bounded play tree.

    The comparator for a play is the cheapest completion among the robot
    choices declined anywhere along it, with a fully cooperative human after
    the deviation; since strategies agreeing with the played prefix are
    admissible alternatives, realized payoff clamps the regret at zero.
    Guarded against blowup: only for tiny products.
    """
    coop = _bellman_ford_coop(product)
    visited = 0

    def value(state, u, b):
        nonlocal visited
        visited += 1
        if visited > max_nodes:
            raise GraphSizeError(
                f"brute-force oracle exceeded {max_nodes} tree nodes"
            )
        if product.is_accepting(state):
            return max(0, u - b)
        moves = product.moves(state)
        if not moves:
            return inf
        if product.owner[state] == ROBOT:
            best = inf
            for action in sorted(moves):
                e = moves[action]
                if u + e.cost > budget:
                    continue
                alternatives = [
                    u + moves[a].cost + coop[moves[a].target]
                    for a in moves if a != action
                ]
                b_next = min(b, min(alternatives, default=inf))
                best = min(best, value(e.target, u + e.cost, b_next))
            return best
        return max(value(e.target, u, b) for e in moves.values())

    return value(product.init, 0, inf)
