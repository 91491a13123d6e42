"""Formula parsing, semantics, normal form and progression."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regsyn.formula import (
    And, Atom, Bottom, Eventually, FormulaSyntaxError, Globally, Implies,
    Next, Not, Or, Release, Top, UnknownAtomError, Until, WeakNext,
    canonical, epsilon_eval, is_nnf, parse, progress, render, satisfies,
    to_nnf,
)
from helpers import all_traces, random_formula, random_trace

ABC = ("a", "b", "c")


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def test_parse_single_atom():
    assert parse("p", {"p"}) == Atom("p")


def test_parse_arch_formula_shape():
    f = parse(
        "F(g_top & b_s1 & b_s2) & G(!(b_s1 & b_s2) -> !g_top)",
        {"g_top", "b_s1", "b_s2"},
    )
    assert isinstance(f, And)
    assert isinstance(f.left, Eventually)
    assert isinstance(f.right, Globally)


def test_until_right_associative_against_oracle():
    # decide the associativity from the semantics, then check the parser
    right = Until(Atom("a"), Until(Atom("b"), Atom("c")))
    left = Until(Until(Atom("a"), Atom("b")), Atom("c"))
    differ = [
        t for t in all_traces(ABC, 3) if satisfies(t, right) != satisfies(t, left)
    ]
    assert differ, "readings must be distinguishable"
    assert parse("a U b U c", ABC) == right


def test_precedence():
    assert parse("a & b | c", ABC) == Or(And(Atom("a"), Atom("b")), Atom("c"))
    assert parse("a -> b -> c", ABC) == Implies(
        Atom("a"), Implies(Atom("b"), Atom("c"))
    )
    assert parse("!a U b", ABC) == Until(Not(Atom("a")), Atom("b"))
    assert parse("F a & b", ABC) == And(Eventually(Atom("a")), Atom("b"))
    assert parse("a U b & c", ABC) == And(Until(Atom("a"), Atom("b")), Atom("c"))


def test_constants_and_weak_operators():
    assert parse("true", set()) == Top()
    assert parse("false R a", ABC) == Release(Bottom(), Atom("a"))
    assert parse("N a", ABC) == WeakNext(Atom("a"))


def test_syntax_error_carries_offset():
    with pytest.raises(FormulaSyntaxError) as err:
        parse("a & (b |", ABC)
    assert err.value.offset == 8
    with pytest.raises(FormulaSyntaxError) as err:
        parse("a ? b", ABC)
    assert err.value.offset == 2


def test_unknown_atom_named():
    with pytest.raises(UnknownAtomError) as err:
        parse("a & zz", {"a"})
    assert err.value.atom == "zz"


def test_render_round_trip_random():
    rng = random.Random(7)
    for _ in range(300):
        f = random_formula(rng, ABC, 4)
        assert parse(render(f), ABC) == f


@st.composite
def formulas(draw, depth=3):
    if depth == 0:
        return draw(st.sampled_from(
            [Top(), Bottom(), Atom("a"), Atom("b"), Atom("c")]
        ))
    kind = draw(st.integers(0, 9))
    if kind <= 2:
        return draw(formulas(depth=0))
    if kind <= 5:
        wrap = draw(st.sampled_from([Not, Next, WeakNext, Eventually, Globally]))
        return wrap(draw(formulas(depth=depth - 1)))
    wrap = draw(st.sampled_from([And, Or, Implies, Until, Release]))
    return wrap(
        draw(formulas(depth=depth - 1)), draw(formulas(depth=depth - 1))
    )


@settings(max_examples=200, deadline=None)
@given(formulas())
def test_render_round_trip_hypothesis(f):
    assert parse(render(f), ABC) == f


# ---------------------------------------------------------------------------
# Semantics
# ---------------------------------------------------------------------------

def fs(*atoms):
    return frozenset(atoms)


def test_satisfies_atom():
    assert satisfies([fs("a")], Atom("a"))
    assert not satisfies([fs()], Atom("a"))


def test_next_needs_strictly_longer_trace():
    assert satisfies([fs(), fs("a")], Next(Atom("a")))
    assert not satisfies([fs("a")], Next(Atom("a")))


def test_until_hand_evaluated():
    assert satisfies([fs("a"), fs("a"), fs("b")], Until(Atom("a"), Atom("b")))
    assert not satisfies([fs("a"), fs(), fs("b")], Until(Atom("a"), Atom("b")))


def test_empty_trace_conventions():
    assert satisfies([], Top())
    assert not satisfies([], Atom("a"))
    assert not satisfies([], Next(Atom("a")))
    assert not satisfies([], Until(Top(), Atom("a")))
    assert satisfies([], WeakNext(Atom("a")))
    assert satisfies([], Release(Bottom(), Atom("a")))
    assert satisfies([], Globally(Atom("a")))
    assert not satisfies([], Eventually(Atom("a")))


def test_eventually_globally_match_defining_expansions():
    rng = random.Random(3)
    for _ in range(200):
        f = random_formula(rng, ABC, 3)
        trace = random_trace(rng, ABC, 0, 5)
        assert satisfies(trace, Eventually(f)) == satisfies(
            trace, Until(Top(), f)
        )
        assert satisfies(trace, Globally(f)) == satisfies(
            trace, Not(Eventually(Not(f)))
        )


# ---------------------------------------------------------------------------
# Negation normal form
# ---------------------------------------------------------------------------

def test_nnf_examples():
    assert to_nnf(Not(Not(Atom("a")))) == Atom("a")
    assert to_nnf(Not(Next(Atom("a")))) == WeakNext(Not(Atom("a")))
    assert to_nnf(Not(Until(Atom("a"), Atom("b")))) == Release(
        Not(Atom("a")), Not(Atom("b"))
    )


def test_nnf_shape_and_equivalence_exhaustive():
    rng = random.Random(11)
    for _ in range(60):
        f = random_formula(rng, ("a",), 3)
        g = to_nnf(f)
        assert is_nnf(g)
        for trace in all_traces(("a",), 3):
            assert satisfies(trace, f) == satisfies(trace, g)


@settings(max_examples=150, deadline=None)
@given(formulas(), st.lists(
    st.sets(st.sampled_from(ABC)).map(frozenset), max_size=5
))
def test_nnf_equivalence_hypothesis(f, trace):
    assert satisfies(trace, f) == satisfies(trace, to_nnf(f))


# ---------------------------------------------------------------------------
# Progression and end-of-trace evaluation
# ---------------------------------------------------------------------------

def test_progress_examples():
    a, b = Atom("a"), Atom("b")
    assert progress(a, fs("a")) == Top()
    assert progress(a, fs()) == Bottom()
    assert progress(Until(a, b), fs("a")) == Until(a, b)
    assert progress(Until(a, b), fs("b")) == Top()
    globally = to_nnf(Globally(a))
    assert progress(globally, fs("a")) == globally


def test_progress_rejects_non_nnf():
    with pytest.raises(Exception):
        progress(Not(And(Atom("a"), Atom("b"))), fs())


def test_progression_identity_exhaustive():
    rng = random.Random(5)
    letters = [fs(), fs("a")]
    for _ in range(80):
        f = to_nnf(random_formula(rng, ("a",), 3))
        for letter in letters:
            residual = progress(f, letter)
            for w in all_traces(("a",), 3):
                assert satisfies(w, residual) == satisfies((letter,) + w, f)


@settings(max_examples=150, deadline=None)
@given(
    formulas(),
    st.sets(st.sampled_from(ABC)).map(frozenset),
    st.lists(st.sets(st.sampled_from(ABC)).map(frozenset), max_size=4),
)
def test_progression_identity_hypothesis(f, letter, w):
    g = to_nnf(f)
    assert satisfies(tuple(w), progress(g, letter)) == satisfies(
        (letter,) + tuple(w), g
    )


def test_epsilon_eval_matches_empty_trace():
    assert epsilon_eval(Top())
    assert not epsilon_eval(Next(Atom("a")))
    assert epsilon_eval(WeakNext(Atom("a")))
    assert epsilon_eval(Globally(Atom("a")))
    rng = random.Random(9)
    for _ in range(200):
        f = random_formula(rng, ABC, 4)
        assert epsilon_eval(f) == satisfies([], f)


def test_canonical_merges_boolean_variants():
    a, b = Atom("a"), Atom("b")
    assert canonical(And(b, a)) == canonical(And(a, And(b, a)))
    assert canonical(And(a, Or(a, b))) == a
    assert canonical(Or(a, And(a, b))) == a
    assert canonical(And(a, Top())) == a
    assert canonical(Or(a, Top())) == Top()
