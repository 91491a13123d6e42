"""LTLf formulas over finite traces: syntax trees, parsing, evaluation,
negation normal form and single-letter progression.

A trace is a finite sequence of letters; a letter is a frozenset of atom
names.  `satisfies` is the reference semantics everything else is checked
against.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

Letter = frozenset
Trace = Sequence[Letter]


class FormulaError(ValueError):
    pass


class FormulaSyntaxError(FormulaError):
    """Malformed formula text; `offset` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownAtomError(FormulaError):
    """Atom not in the declared proposition set."""

    def __init__(self, atom: str, offset: int):
        super().__init__(f"unknown atom '{atom}' (at offset {offset})")
        self.atom = atom
        self.offset = offset


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class Top(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True, slots=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Next(Formula):
    """Strong next: requires a successor position."""

    child: Formula


@dataclass(frozen=True, slots=True)
class WeakNext(Formula):
    """Weak next: holds at the last position of a trace."""

    child: Formula


@dataclass(frozen=True, slots=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Release(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Eventually(Formula):
    child: Formula


@dataclass(frozen=True, slots=True)
class Globally(Formula):
    child: Formula


TRUE = Top()
FALSE = Bottom()

# "some position exists" / "no position exists": used to guard the
# strong/weak next distinction through progression.
NONEMPTY = Until(TRUE, TRUE)
EMPTY = Release(FALSE, FALSE)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"->|[A-Za-z_][A-Za-z0-9_]*|[!&|()]")
_KEYWORDS = {"true", "false", "X", "N", "F", "G", "U", "R"}


class _Parser:
    def __init__(self, text: str, props: frozenset):
        self.text = text
        self.props = props
        self.tokens = []  # (kind, value, offset)
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                raise FormulaSyntaxError("unexpected character", pos)
            value = m.group(0)
            if value in _KEYWORDS:
                kind = value
            elif value[0].isalpha() or value[0] == "_":
                kind = "atom"
            else:
                kind = value
            self.tokens.append((kind, value, pos))
            pos = m.end()
        self.tokens.append(("end", "", len(text)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.take()
        if tok[0] != kind:
            raise FormulaSyntaxError(f"expected '{kind}'", tok[2])
        return tok

    # Precedence, loosest first: ->, |, &, U/R, unary, atoms.
    def parse(self) -> Formula:
        f = self.implies()
        tok = self.peek()
        if tok[0] != "end":
            raise FormulaSyntaxError("unexpected token", tok[2])
        return f

    def implies(self) -> Formula:
        left = self.disjunction()
        if self.peek()[0] == "->":
            self.take()
            return Implies(left, self.implies())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek()[0] == "|":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.temporal()
        while self.peek()[0] == "&":
            self.take()
            f = And(f, self.temporal())
        return f

    def temporal(self) -> Formula:
        # U and R are right-associative and bind tighter than & and |.
        left = self.unary()
        kind = self.peek()[0]
        if kind == "U":
            self.take()
            return Until(left, self.temporal())
        if kind == "R":
            self.take()
            return Release(left, self.temporal())
        return left

    def unary(self) -> Formula:
        kind, _, offset = self.peek()
        if kind == "!":
            self.take()
            return Not(self.unary())
        if kind == "X":
            self.take()
            return Next(self.unary())
        if kind == "N":
            self.take()
            return WeakNext(self.unary())
        if kind == "F":
            self.take()
            return Eventually(self.unary())
        if kind == "G":
            self.take()
            return Globally(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind, value, offset = self.take()
        if kind == "true":
            return TRUE
        if kind == "false":
            return FALSE
        if kind == "atom":
            if value not in self.props:
                raise UnknownAtomError(value, offset)
            return Atom(value)
        if kind == "(":
            f = self.implies()
            self.expect(")")
            return f
        raise FormulaSyntaxError("expected an atom, constant or '('", offset)


def parse(text: str, props: Iterable[str]) -> Formula:
    """Parse formula text over the declared proposition set."""
    return _Parser(text, frozenset(props)).parse()


_PREC = {
    Implies: 1,
    Or: 2,
    And: 3,
    Until: 4,
    Release: 4,
    Not: 5,
    Next: 5,
    WeakNext: 5,
    Eventually: 5,
    Globally: 5,
}


def render(f: Formula) -> str:
    """Formula back to concrete syntax, with minimal parentheses."""

    def wrap(child: Formula, parent_prec: int, tight: bool = False) -> str:
        p = _PREC.get(type(child), 6)
        text = render(child)
        if p < parent_prec or (tight and p == parent_prec):
            return f"({text})"
        return text

    match f:
        case Top():
            return "true"
        case Bottom():
            return "false"
        case Atom(name):
            return name
        case Not(c):
            return f"!{wrap(c, 6)}"
        case Next(c):
            return f"X {wrap(c, 6)}"
        case WeakNext(c):
            return f"N {wrap(c, 6)}"
        case Eventually(c):
            return f"F {wrap(c, 6)}"
        case Globally(c):
            return f"G {wrap(c, 6)}"
        case And(l, r):
            return f"{wrap(l, 4)} & {wrap(r, 4)}"
        case Or(l, r):
            return f"{wrap(l, 3)} | {wrap(r, 3)}"
        case Implies(l, r):
            return f"{wrap(l, 2, tight=True)} -> {wrap(r, 1)}"
        case Until(l, r):
            return f"{wrap(l, 5)} U {wrap(r, 4)}"
        case Release(l, r):
            return f"{wrap(l, 5)} R {wrap(r, 4)}"
    raise TypeError(f"not a formula: {f!r}")


def atoms_of(f: Formula) -> frozenset:
    match f:
        case Atom(name):
            return frozenset({name})
        case Top() | Bottom():
            return frozenset()
        case Not(c) | Next(c) | WeakNext(c) | Eventually(c) | Globally(c):
            return atoms_of(c)
        case And(l, r) | Or(l, r) | Implies(l, r) | Until(l, r) | Release(l, r):
            return atoms_of(l) | atoms_of(r)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Semantics
# ---------------------------------------------------------------------------

def _eval(trace: Trace, i: int, f: Formula) -> bool:
    n = len(trace)
    match f:
        case Top():
            return True
        case Bottom():
            return False
        case Atom(name):
            return i < n and name in trace[i]
        case Not(c):
            return not _eval(trace, i, c)
        case And(l, r):
            return _eval(trace, i, l) and _eval(trace, i, r)
        case Or(l, r):
            return _eval(trace, i, l) or _eval(trace, i, r)
        case Implies(l, r):
            return (not _eval(trace, i, l)) or _eval(trace, i, r)
        case Next(c):
            return n > i + 1 and _eval(trace, i + 1, c)
        case WeakNext(c):
            return n <= i + 1 or _eval(trace, i + 1, c)
        case Until(l, r):
            for j in range(i, n):
                if _eval(trace, j, r):
                    return True
                if not _eval(trace, j, l):
                    return False
            return False
        case Release(l, r):
            for j in range(i, n):
                if not _eval(trace, j, r):
                    return False
                if _eval(trace, j, l):
                    return True
            return True
        case Eventually(c):
            return any(_eval(trace, j, c) for j in range(i, n))
        case Globally(c):
            return all(_eval(trace, j, c) for j in range(i, n))
    raise TypeError(f"not a formula: {f!r}")


def satisfies(trace: Trace, f: Formula) -> bool:
    """Reference semantics: does the (possibly empty) trace satisfy f?

    On the empty remainder, atoms, strong next and until are false;
    weak next, release and the constants keep their polarity.
    """
    return _eval(tuple(trace), 0, f)


def epsilon_eval(f: Formula) -> bool:
    """Truth of f on the empty trace; decides acceptance of progression states."""
    return _eval((), 0, f)


# ---------------------------------------------------------------------------
# Negation normal form
# ---------------------------------------------------------------------------

def to_nnf(f: Formula) -> Formula:
    """Push negations to the atoms; eliminate ->, F and G.

    Uses the finite-trace dualities !X p == N !p, !N p == X !p and
    !(p U q) == !p R !q, plus F p == true U p and G p == false R p.
    """
    match f:
        case Top() | Bottom() | Atom(_):
            return f
        case Not(c):
            return _neg(c)
        case And(l, r):
            return And(to_nnf(l), to_nnf(r))
        case Or(l, r):
            return Or(to_nnf(l), to_nnf(r))
        case Implies(l, r):
            return Or(_neg(l), to_nnf(r))
        case Next(c):
            return Next(to_nnf(c))
        case WeakNext(c):
            return WeakNext(to_nnf(c))
        case Until(l, r):
            return Until(to_nnf(l), to_nnf(r))
        case Release(l, r):
            return Release(to_nnf(l), to_nnf(r))
        case Eventually(c):
            return Until(TRUE, to_nnf(c))
        case Globally(c):
            return Release(FALSE, to_nnf(c))
    raise TypeError(f"not a formula: {f!r}")


def _neg(f: Formula) -> Formula:
    match f:
        case Top():
            return FALSE
        case Bottom():
            return TRUE
        case Atom(_):
            return Not(f)
        case Not(c):
            return to_nnf(c)
        case And(l, r):
            return Or(_neg(l), _neg(r))
        case Or(l, r):
            return And(_neg(l), _neg(r))
        case Implies(l, r):
            return And(to_nnf(l), _neg(r))
        case Next(c):
            return WeakNext(_neg(c))
        case WeakNext(c):
            return Next(_neg(c))
        case Until(l, r):
            return Release(_neg(l), _neg(r))
        case Release(l, r):
            return Until(_neg(l), _neg(r))
        case Eventually(c):
            return Release(FALSE, _neg(c))
        case Globally(c):
            return Until(TRUE, _neg(c))
    raise TypeError(f"not a formula: {f!r}")


def is_nnf(f: Formula) -> bool:
    match f:
        case Top() | Bottom() | Atom(_):
            return True
        case Not(Atom(_)):
            return True
        case Not(_) | Implies(_, _) | Eventually(_) | Globally(_):
            return False
        case Next(c) | WeakNext(c):
            return is_nnf(c)
        case And(l, r) | Or(l, r) | Until(l, r) | Release(l, r):
            return is_nnf(l) and is_nnf(r)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Canonical form
# ---------------------------------------------------------------------------

_KIND_RANK = {
    Top: 0, Bottom: 1, Atom: 2, Not: 3, Next: 4, WeakNext: 5,
    Until: 6, Release: 7, And: 8, Or: 9,
    Implies: 10, Eventually: 11, Globally: 12,
}


def _key(f: Formula):
    match f:
        case Top() | Bottom():
            return (_KIND_RANK[type(f)],)
        case Atom(name):
            return (2, name)
        case Not(c) | Next(c) | WeakNext(c) | Eventually(c) | Globally(c):
            return (_KIND_RANK[type(f)], _key(c))
        case And(l, r) | Or(l, r) | Implies(l, r) | Until(l, r) | Release(l, r):
            return (_KIND_RANK[type(f)], _key(l), _key(r))
    raise TypeError(f"not a formula: {f!r}")


def _rebuild(parts: list, kind, empty: Formula) -> Formula:
    if not parts:
        return empty
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = kind(p, out)
    return out


def _contradictory(term: frozenset) -> bool:
    return any(
        isinstance(lit, Not) and lit.child in term for lit in term
    )


def _subsume(terms) -> tuple:
    """Drop duplicate terms and terms subsumed by a smaller one."""
    kept = []
    for term in sorted(set(terms), key=len):
        if not any(k <= term for k in kept):
            kept.append(term)
    return tuple(kept)


def _dnf_terms(f: Formula):
    """Disjunctive normal form over temporal literals, as a term tuple."""
    match f:
        case Top():
            return (frozenset(),)
        case Bottom():
            return ()
        case Atom(_) | Not(Atom(_)):
            return (frozenset({f}),)
        case And(l, r):
            out = []
            for a in _dnf_terms(l):
                for b in _dnf_terms(r):
                    term = a | b
                    if not _contradictory(term):
                        out.append(term)
            return _subsume(out)
        case Or(l, r):
            return _subsume(_dnf_terms(l) + _dnf_terms(r))
        case Next(c):
            return (frozenset({Next(canonical(c))}),)
        case WeakNext(c):
            return (frozenset({WeakNext(canonical(c))}),)
        case Until(l, r):
            return (frozenset({Until(canonical(l), canonical(r))}),)
        case Release(l, r):
            return (frozenset({Release(canonical(l), canonical(r))}),)
    raise FormulaError(f"formula must be in negation normal form: {f}")


def canonical(f: Formula) -> Formula:
    """Boolean canonical form for NNF formulas: a sorted disjunction of
    sorted conjunctions of temporal literals, simplified by unit
    propagation, idempotence and absorption (term subsumption).

    Progression states merge exactly when their canonical forms are equal;
    since the literals come from the finite subformula closure, the
    progression closure is guaranteed to terminate.  DFA minimization mops
    up any logically equal states this form does not identify.
    """
    terms = _dnf_terms(f)
    if not terms:
        return FALSE
    if any(not term for term in terms):
        return TRUE
    conjunctions = [
        _rebuild(sorted(term, key=_key), And, TRUE) for term in terms
    ]
    conjunctions.sort(key=_key)
    return _rebuild(conjunctions, Or, FALSE)


# ---------------------------------------------------------------------------
# Progression
# ---------------------------------------------------------------------------

def _and(l: Formula, r: Formula) -> Formula:
    if l == FALSE or r == FALSE:
        return FALSE
    if l == TRUE:
        return r
    if r == TRUE:
        return l
    return And(l, r)


def _or(l: Formula, r: Formula) -> Formula:
    if l == TRUE or r == TRUE:
        return TRUE
    if l == FALSE:
        return r
    if r == FALSE:
        return l
    return Or(l, r)


def progress(f: Formula, letter: Letter) -> Formula:
    """Residual obligation after consuming one letter.

    For f in NNF and any continuation w:  w |= progress(f, l)  iff  l.w |= f.
    The strong/weak next cases keep the end-of-trace distinction via the
    NONEMPTY / EMPTY guard formulas.
    """
    return canonical(_progress(f, letter))


def _progress(f: Formula, letter: Letter) -> Formula:
    match f:
        case Top():
            return TRUE
        case Bottom():
            return FALSE
        case Atom(name):
            return TRUE if name in letter else FALSE
        case Not(Atom(name)):
            return FALSE if name in letter else TRUE
        case And(l, r):
            return _and(_progress(l, letter), _progress(r, letter))
        case Or(l, r):
            return _or(_progress(l, letter), _progress(r, letter))
        case Next(c):
            # the continuation must be nonempty unless c already fails on it
            return c if not epsilon_eval(c) else _and(NONEMPTY, c)
        case WeakNext(c):
            return c if epsilon_eval(c) else _or(EMPTY, c)
        case Until(l, r):
            return _or(_progress(r, letter), _and(_progress(l, letter), f))
        case Release(l, r):
            return _and(_progress(r, letter), _or(_progress(l, letter), f))
    raise FormulaError(f"formula must be in negation normal form: {f}")
