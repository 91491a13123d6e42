"""DFA compilation: progression closure, minimization, determinism."""

import random

import pytest

from regsyn.dfa import DfaSizeError, all_letters, build_dfa
from regsyn.formula import Atom, Eventually, Top, parse, satisfies
from helpers import all_traces, random_formula, random_trace

ABC = ("a", "b", "c")


def test_eventually_two_states():
    dfa = build_dfa(Eventually(Atom("a")), ("a",))
    assert dfa.n_states == 2
    assert dfa.init == 0
    assert 0 not in dfa.accepting
    q1 = dfa.step(0, frozenset({"a"}))
    assert q1 in dfa.accepting
    assert dfa.step(0, frozenset()) == 0
    # accepting state is absorbing
    assert dfa.step(q1, frozenset()) == q1
    assert dfa.step(q1, frozenset({"a"})) == q1
    # cross-check acceptance on every trace of length <= 4
    for trace in all_traces(("a",), 4):
        assert dfa.accepts(trace) == satisfies(trace, Eventually(Atom("a")))


def test_true_single_absorbing_state():
    dfa = build_dfa(Top(), ("a",))
    assert dfa.n_states == 1
    assert dfa.accepting == frozenset({0})
    assert all(dfa.step(0, l) == 0 for l in all_letters(("a",)))


def test_arch_formula_dfa_against_oracle():
    props = ("b_s1", "b_s2", "g_top")
    f = parse("F(g_top & b_s1 & b_s2) & G(!(b_s1 & b_s2) -> !g_top)", props)
    dfa = build_dfa(f, props)
    rng = random.Random(2)
    for _ in range(400):
        trace = random_trace(rng, props, 0, 6)
        assert dfa.accepts(trace) == satisfies(trace, f)


def test_zero_length_acceptance_is_epsilon_eval():
    props = ("a",)
    globally = parse("G a", props)
    dfa = build_dfa(globally, props)
    assert dfa.accepts(())  # empty trace satisfies G a
    eventually = parse("F a", props)
    assert not build_dfa(eventually, props).accepts(())


def test_minimization_preserves_language_exhaustively():
    rng = random.Random(21)
    for _ in range(40):
        f = random_formula(rng, ("a", "b"), 3)
        raw = build_dfa(f, ("a", "b"), minimize=False)
        minimized = build_dfa(f, ("a", "b"))
        assert minimized.n_states <= raw.n_states
        for trace in all_traces(("a", "b"), 3):
            assert raw.accepts(trace) == minimized.accepts(trace)


def test_build_is_deterministic():
    props = ("a", "b")
    f = parse("(a U b) | G(a -> X b)", props)
    assert build_dfa(f, props) == build_dfa(f, props)


def test_every_state_reachable_and_total():
    rng = random.Random(31)
    letters = all_letters(("a", "b"))
    for _ in range(30):
        dfa = build_dfa(random_formula(rng, ("a", "b"), 4), ("a", "b"))
        seen = {dfa.init}
        stack = [dfa.init]
        while stack:
            z = stack.pop()
            for letter in letters:
                assert letter in dfa.delta[z]
                nxt = dfa.delta[z][letter]
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        assert seen == set(range(dfa.n_states))


def test_state_budget_guard():
    props = ("a", "b", "c")
    f = random_formula(random.Random(0), props, 4)
    with pytest.raises(DfaSizeError):
        build_dfa(f, props, state_budget=1)


def test_dot_export_shape():
    dfa = build_dfa(Eventually(Atom("a")), ("a",))
    dot = dfa.to_dot()
    assert dot.count("doublecircle") == 1
    assert dot.count("[shape=circle") == 1
    assert dot == build_dfa(Eventually(Atom("a")), ("a",)).to_dot()


def test_random_formula_oracle_equivalence_small():
    rng = random.Random(12)
    for _ in range(150):
        f = random_formula(rng, ABC, 3)
        dfa = build_dfa(f, ABC)
        for _ in range(20):
            trace = random_trace(rng, ABC, 1, 6)
            assert dfa.accepts(trace) == satisfies(trace, f)
