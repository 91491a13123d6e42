"""The synthesis pipeline against its definition-level oracle."""

import random
from math import inf

import pytest

from regsyn.dfa import build_dfa
from regsyn.formula import parse
from regsyn.game import ROBOT
from regsyn.product import adversarial_values, compose, coop_values
from regsyn.regret import (
    ACCEPT,
    DEAD,
    GraphSizeError,
    InfeasibleBudgetError,
    RegretStrategy,
    backward_values,
    brute_force_regret,
    build_best_response_graph,
    compute_ba,
    synthesize,
    unfold_utility,
)
from regsyn.scenarios import ARCH_FORMULA, ARCH_PROPS, toy_game
from helpers import (
    coop_cost_enum,
    enumerate_strategy_plays,
    random_product,
    unfolded_pairs,
)


def toy_product():
    dfa = build_dfa(parse(ARCH_FORMULA, ARCH_PROPS), ARCH_PROPS)
    return compose(toy_game(), dfa)


# ---------------------------------------------------------------------------
# Graph of utility
# ---------------------------------------------------------------------------

def test_toy_unfold_leaf_utilities():
    gu = unfold_utility(toy_product(), 7)
    assert gu.leaf_utilities(ACCEPT) == [1, 5, 7]


def test_budget_zero_root_is_dead_end():
    product = toy_product()
    gu = unfold_utility(product, 0)
    assert gu.n_nodes == 1
    assert gu.kind[0] == DEAD
    assert gu.pruned[0] == ["a_s1", "a_s2"]
    with pytest.raises(InfeasibleBudgetError):
        synthesize(product, 0)


def test_unfold_matches_unmerged_tree_quotient():
    rng = random.Random(41)
    for _ in range(50):
        product = random_product(rng)
        budget = rng.randint(0, 10)
        gu = unfold_utility(product, budget)
        assert set(gu.keys) == unfolded_pairs(product, budget)


def test_unfold_budget_guard():
    with pytest.raises(GraphSizeError):
        unfold_utility(toy_product(), 7, node_budget=2)


# ---------------------------------------------------------------------------
# Best-alternate responses
# ---------------------------------------------------------------------------

def test_toy_root_ba_values():
    product = toy_product()
    gu = unfold_utility(product, 7)
    ba = compute_ba(gu, coop_values(product))
    root_edges = {action: ba[(0, action)] for action, _, _ in gu.edges[0]}
    assert root_edges == {"a_s1": 5, "a_s2": 1}
    # the rebuild move is forced, so its best alternate is infinite
    forced = [
        (node, action)
        for node in range(gu.n_nodes)
        if gu.kind[node] == "internal" and gu.owner(node) == ROBOT
        and len(product.moves(gu.keys[node][0])) == 1
        for action, _, _ in gu.edges[node]
    ]
    assert forced
    assert all(ba[key] == inf for key in forced)


def test_ba_matches_sibling_subtree_enumeration():
    rng = random.Random(43)
    for _ in range(40):
        product = random_product(rng, max_states=6)
        budget = rng.randint(0, 8)
        gu = unfold_utility(product, budget)
        ba = compute_ba(gu, coop_values(product))
        for (node, action), value in ba.items():
            state, u = gu.keys[node]
            moves = product.moves(state)
            expected = inf
            for other, edge in moves.items():
                if other == action:
                    continue
                expected = min(
                    expected, u + edge.cost + coop_cost_enum(product, edge.target)
                )
            assert value == expected


# ---------------------------------------------------------------------------
# Best-response graph and backward values
# ---------------------------------------------------------------------------

def test_toy_leaf_regrets_and_root():
    product = toy_product()
    gu = unfold_utility(product, 7)
    ba = compute_ba(gu, coop_values(product))
    gbr = build_best_response_graph(gu, ba)
    leaf_regrets = sorted(
        gbr.leaf_regret(i) for i in range(gbr.n_nodes)
        if gbr.leaf_regret(i) is not None
    )
    # history-dependent reading: intervened-near 7-5=2, cooperative-near
    # 1-5 clamped to 0, away 5-1=4
    assert leaf_regrets == [0, 2, 4]
    root, values, choice = backward_values(gbr)
    assert root == 2
    assert choice[0] == "a_s1"


def test_forced_play_has_zero_regret():
    # single robot choice everywhere: nothing to regret under the clamp
    from regsyn.product import ProductEdge, ProductGame

    product = ProductGame(
        owner=[ROBOT, "human", ROBOT],
        origin=[("s0", 0), ("s1", 0), ("s2", 0)],
        accepting={2},
        edges=[
            ProductEdge(0, "go", 1, 3),
            ProductEdge(1, "e", 2, 0),
            ProductEdge(2, "stay", 2, 0),
        ],
        init=0,
    )
    strategy = synthesize(product, 5)
    assert strategy.root_regret == 0


def test_toy_budget_four_infeasible():
    with pytest.raises(InfeasibleBudgetError) as err:
        synthesize(toy_product(), 4)
    assert err.value.min_budget == 5


def test_synthesize_toy_stats_and_strategy():
    product = toy_product()
    strategy = synthesize(product, 7, game_digest="t", formula=ARCH_FORMULA)
    assert strategy.root_regret == 2
    assert strategy.action_at(product.init, 0, inf) == "a_s1"
    stats = strategy.stats
    assert stats.product_states == product.n_states
    assert stats.budget == 7
    assert stats.utility_nodes >= 6
    assert stats.best_response_nodes >= stats.utility_nodes


def test_pipeline_equals_brute_force_on_random_products():
    rng = random.Random(47)
    checked = 0
    while checked < 60:
        product = random_product(rng)
        budget = rng.randint(0, 12)
        try:
            oracle = brute_force_regret(product, budget, max_nodes=300_000)
        except GraphSizeError:
            continue
        gu = unfold_utility(product, budget)
        ba = compute_ba(gu, coop_values(product))
        gbr = build_best_response_graph(gu, ba)
        root, values, _ = backward_values(gbr)
        assert root == oracle
        # regret values live in [0, B] or are infinite
        assert all(v == inf or 0 <= v <= budget for v in values)
        checked += 1


def test_guarantee_within_budget_exhaustively():
    rng = random.Random(53)
    checked = 0
    while checked < 40:
        product = random_product(rng)
        budget = rng.randint(0, 12)
        try:
            strategy = synthesize(product, budget)
        except InfeasibleBudgetError:
            continue
        plays = enumerate_strategy_plays(product, strategy, budget)
        assert plays
        assert all(accepting for _, accepting in plays)
        assert all(payoff <= budget for payoff, _ in plays)
        checked += 1


def test_finite_root_iff_budget_covers_minmax():
    rng = random.Random(59)
    for _ in range(60):
        product = random_product(rng)
        budget = rng.randint(0, 12)
        values, _ = adversarial_values(product)
        feasible = values[product.init] <= budget
        try:
            synthesize(product, budget)
            assert feasible
        except InfeasibleBudgetError as err:
            assert not feasible
            assert err.min_budget == values[product.init]


def test_graph_sizes_monotone_in_budget():
    product = toy_product()
    sizes = []
    for budget in (4, 5, 6, 7, 9, 12):
        gu = unfold_utility(product, budget)
        ba = compute_ba(gu, coop_values(product))
        gbr = build_best_response_graph(gu, ba)
        sizes.append((gu.n_nodes, gbr.n_nodes))
    assert sizes == sorted(sizes)
    assert all(g <= b for g, b in sizes)


def test_budgeted_ba_option():
    product = toy_product()
    strategy = synthesize(product, 7, budgeted_ba=True)
    assert strategy.root_regret >= 0


def test_strategy_file_round_trip(tmp_path):
    product = toy_product()
    strategy = synthesize(
        product, 7, game_digest="abc", formula=ARCH_FORMULA, props=ARCH_PROPS
    )
    path = tmp_path / "strategy.json"
    path.write_text(strategy.to_json())
    loaded = RegretStrategy.from_json(path.read_text())
    assert loaded.budget == strategy.budget
    assert loaded.root_regret == strategy.root_regret
    assert loaded.actions == strategy.actions
    assert loaded.values == strategy.values
    assert loaded.ba == strategy.ba
    assert loaded.game_digest == "abc"
    assert loaded.stats.utility_nodes == strategy.stats.utility_nodes
