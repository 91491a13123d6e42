"""Command-line interface: synthesis, baselines, simulation, DOT export and
the play service.

Exit codes: 0 success, 1 usage or input error, 2 task infeasible within the
given budget.  Diagnostics go to stderr, data to stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import inf

from . import play as playmod
from .dfa import build_dfa
from .formula import FormulaError, parse
from .game import GameError, load_game_file
from .product import adversarial_values, compose, coop_values
from .regret import InfeasibleBudgetError, RegretStrategy, synthesize
from .scenarios import PRESET_NAMES, CapacityError, preset_scenario

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2


class CliError(Exception):
    pass


def _add_game_args(cmd, with_budget=True):
    cmd.add_argument("--game", help="path to a game file (JSON)")
    cmd.add_argument(
        "--scenario", choices=PRESET_NAMES,
        help="use a built-in scenario instead of a game file",
    )
    cmd.add_argument("--formula", help="task formula (defaults to the scenario's)")
    cmd.add_argument("--blocks", type=int, default=4)
    cmd.add_argument("--locations", type=int, default=4)
    if with_budget:
        cmd.add_argument("--budget", "-B", type=int, help="energy budget")
    cmd.add_argument(
        "--consume-initial-label", action="store_true",
        help="advance the task automaton by the initial state's label "
             "before play starts (experimental)",
    )


def _resolve(args, need_budget=True):
    """Game + formula + budget from --game/--scenario flags."""
    if bool(args.game) == bool(args.scenario):
        raise CliError("exactly one of --game or --scenario is required")
    if args.scenario:
        kwargs = {}
        if args.scenario in ("arch", "line"):
            kwargs = dict(blocks=args.blocks, locations=args.locations)
        scenario = preset_scenario(args.scenario, **kwargs)
        game = scenario.game
        formula_text = args.formula or scenario.formula
        budget = getattr(args, "budget", None)
        if budget is None:
            budget = scenario.default_budget
    else:
        game = load_game_file(args.game)
        if not args.formula:
            raise CliError("--formula is required with --game")
        formula_text = args.formula
        budget = getattr(args, "budget", None)
    if need_budget and budget is None:
        raise CliError("--budget is required")
    formula = parse(formula_text, game.props)
    dfa = build_dfa(formula, game.props)
    product = compose(
        game, dfa, consume_initial_label=args.consume_initial_label
    )
    return game, formula_text, product, budget


def cmd_synth(args) -> int:
    game, formula_text, product, budget = _resolve(args)
    try:
        strategy = synthesize(
            product, budget,
            budgeted_ba=args.budgeted_ba,
            game_digest=game.digest(),
            formula=formula_text,
            props=game.props,
        )
    except InfeasibleBudgetError as exc:
        print(f"no strategy within budget; minimal budget is {exc.min_budget}",
              file=sys.stderr)
        return EXIT_INFEASIBLE
    stats = strategy.stats
    print(stats.row())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(strategy.to_json())
        print(f"strategy written to {args.out}", file=sys.stderr)
    if args.dot:
        for suffix, text in (
            ("game", game.to_dot()), ("product", product.to_dot())
        ):
            with open(f"{args.dot}-{suffix}.dot", "w", encoding="utf-8") as fh:
                fh.write(text)
    return EXIT_OK


def cmd_mincost(args) -> int:
    game, _, product, _ = _resolve(args, need_budget=False)
    values, strategy = adversarial_values(product)
    value = values[product.init]
    if value == inf:
        print("infeasible: the task cannot be forced under an adversarial human")
        return EXIT_INFEASIBLE
    print(f"minimal budget B_min = {int(value)}")
    for state in sorted(strategy):
        origin = product.origin[state]
        print(f"  {origin[0]} -> {strategy[state]}")
    return EXIT_OK


def _make_policy(args, product, strategy):
    kind = args.human
    if kind == "cooperative":
        return playmod.CooperativePolicy(coop_values(product))
    if kind == "adversarial":
        return playmod.AdversarialPolicy(strategy)
    if kind == "cost-adversarial":
        return playmod.CostAdversarialPolicy(adversarial_values(product)[0])
    if kind == "random":
        return playmod.RandomPolicy(args.seed)
    if kind == "scripted":
        if not args.script:
            raise CliError("--script is required with --human scripted")
        return playmod.ScriptedPolicy(args.script.split(","))
    if kind == "interactive":
        return playmod.InteractivePolicy()
    raise CliError(f"unknown human policy '{kind}'")


def cmd_play(args) -> int:
    with open(args.strategy, "r", encoding="utf-8") as handle:
        strategy = RegretStrategy.from_json(handle.read())
    if not args.formula:
        args.formula = strategy.formula
    args.budget = strategy.budget
    game, _, product, _ = _resolve(args)
    if strategy.game_digest and strategy.game_digest != game.digest():
        print("strategy file does not match the game (digest mismatch)",
              file=sys.stderr)
        return EXIT_ERROR
    policy = _make_policy(args, product, strategy)
    try:
        trace = playmod.simulate(strategy, product, policy)
    except playmod.IllegalActionError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_ERROR
    if args.jsonl:
        for step in trace.steps:
            print(json.dumps({
                "step": step.index, "actor": step.actor, "action": step.action,
                "cost": step.cost, "payoff": step.payoff,
                "labels": sorted(step.labels),
            }))
    else:
        for line in trace.lines():
            print(line)
    print(f"payoff {trace.payoff} satisfied {str(trace.satisfied).lower()}")
    return EXIT_OK


def cmd_dfa(args) -> int:
    props = [p for p in args.props.split(",") if p]
    formula = parse(args.formula, props)
    dfa = build_dfa(formula, props)
    _emit(args, dfa.to_dot())
    return EXIT_OK


def cmd_export(args) -> int:
    game, _, product, _ = _resolve(args, need_budget=False)
    _emit(args, product.to_dot() if args.product else game.to_dot())
    return EXIT_OK


def _emit(args, text):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(
        session_cap=args.session_cap, snapshot_dir=args.snapshot_dir
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regsyn",
        description="Regret-minimizing strategy synthesis for human-robot "
                    "games with finite-trace temporal logic tasks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="synthesize a regret-minimizing strategy")
    _add_game_args(synth)
    synth.add_argument("--out", help="write the strategy file here")
    synth.add_argument(
        "--dot", metavar="PREFIX",
        help="also write PREFIX-game.dot and PREFIX-product.dot",
    )
    synth.add_argument(
        "--budgeted-ba", action="store_true",
        help="restrict best-alternate yardsticks to budget-feasible "
             "alternatives (experimental)",
    )
    synth.set_defaults(func=cmd_synth)

    mincost = sub.add_parser(
        "mincost", help="minimal feasible budget (adversarial baseline)"
    )
    _add_game_args(mincost, with_budget=False)
    mincost.set_defaults(func=cmd_mincost)

    play = sub.add_parser("play", help="run a strategy against a human policy")
    _add_game_args(play, with_budget=False)
    play.add_argument("--strategy", required=True, help="strategy file from synth")
    play.add_argument(
        "--human", default="cooperative",
        choices=["cooperative", "adversarial", "cost-adversarial", "random",
                 "scripted", "interactive"],
    )
    play.add_argument("--script", help="comma-separated actions for --human scripted")
    play.add_argument("--seed", type=int, default=0)
    play.add_argument("--jsonl", action="store_true", help="machine-readable trace")
    play.set_defaults(func=cmd_play)

    dfa = sub.add_parser("dfa", help="compile a formula to a DFA (DOT)")
    dfa.add_argument("--formula", required=True)
    dfa.add_argument("--props", required=True, help="comma-separated atoms")
    dfa.add_argument("--out")
    dfa.set_defaults(func=cmd_dfa)

    export = sub.add_parser("export", help="game or product graph as DOT")
    _add_game_args(export, with_budget=False)
    export.add_argument("--product", action="store_true",
                        help="export the product game instead of the game")
    export.add_argument("--out")
    export.set_defaults(func=cmd_export)

    serve = sub.add_parser("serve", help="run the interactive play service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--session-cap", type=int, default=64)
    serve.add_argument("--snapshot-dir", help="persist evicted sessions here")
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, FormulaError, GameError, CapacityError,
            FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
