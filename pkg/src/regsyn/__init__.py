"""Regret-minimizing strategy synthesis for human-robot games with
finite-trace temporal logic tasks."""

from .dfa import Dfa, DfaSizeError, build_dfa
from .formula import (
    Formula,
    FormulaSyntaxError,
    UnknownAtomError,
    epsilon_eval,
    parse,
    progress,
    render,
    satisfies,
    to_nnf,
)
from .game import (
    GameFormatError,
    GameGraph,
    GameValidationError,
    load_game,
    load_game_file,
)
from .product import (
    CompositionError,
    ProductGame,
    adversarial_values,
    compose,
    coop_values,
)
from .regret import (
    GraphSizeError,
    InfeasibleBudgetError,
    RegretStrategy,
    SynthesisStats,
    backward_values,
    brute_force_regret,
    build_best_response_graph,
    compute_ba,
    synthesize,
    unfold_utility,
)
from .scenarios import (
    ScenarioParams,
    generate_scenario,
    make_scenario,
    preset_scenario,
    toy_game,
)

__version__ = "0.1.0"
