"""Compile LTLf formulas to minimal DFAs via formula progression.

States of the raw automaton are canonical progressed formulas; acceptance of
a state is truth of its formula on the empty trace.  The raw automaton is
then minimized by partition refinement and renumbered breadth-first so the
construction is fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .formula import (
    Formula,
    Letter,
    Trace,
    canonical,
    epsilon_eval,
    progress,
    to_nnf,
)

DEFAULT_STATE_BUDGET = 100_000


class DfaSizeError(RuntimeError):
    """Progression closure exceeded the state budget."""


def all_letters(props: Iterable[str]) -> list:
    """Every subset of the proposition set, in a fixed order."""
    names = sorted(props)
    out = []
    for r in range(len(names) + 1):
        for combo in combinations(names, r):
            out.append(frozenset(combo))
    out.sort(key=lambda s: tuple(sorted(s)))
    return out


@dataclass(frozen=True)
class Dfa:
    """Deterministic finite automaton over the powerset alphabet of `props`.

    `delta[z]` maps every letter to the successor state; every state is
    reachable from `init`.
    """

    props: tuple
    init: int
    delta: tuple  # tuple of dict[Letter, int], one per state
    accepting: frozenset

    @property
    def n_states(self) -> int:
        return len(self.delta)

    def step(self, state: int, letter: Letter) -> int:
        return self.delta[state][frozenset(letter)]

    def run(self, trace: Trace) -> int:
        state = self.init
        for letter in trace:
            state = self.step(state, letter)
        return state

    def accepts(self, trace: Trace) -> bool:
        return self.run(trace) in self.accepting

    def to_dot(self) -> str:
        letters = all_letters(self.props)
        lines = ["digraph dfa {", "  rankdir=LR;", '  __init [shape=point, label=""];']
        for z in range(self.n_states):
            shape = "doublecircle" if z in self.accepting else "circle"
            lines.append(f"  q{z} [shape={shape}, label=\"q{z}\"];")
        lines.append(f"  __init -> q{self.init};")
        for z in range(self.n_states):
            grouped: dict = {}
            for letter in letters:
                grouped.setdefault(self.delta[z][letter], []).append(letter)
            for target in sorted(grouped):
                label = ", ".join(
                    "{" + ",".join(sorted(l)) + "}" for l in grouped[target]
                )
                lines.append(f"  q{z} -> q{target} [label=\"{label}\"];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_dfa(
    f: Formula,
    props: Iterable[str],
    *,
    minimize: bool = True,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> Dfa:
    """Progression-closure DFA for f over the given propositions.

    For every trace the DFA run ends in an accepting state exactly when the
    trace satisfies f; acceptance of the initial state itself is truth of f
    on the empty trace.
    """
    props = tuple(sorted(set(props)))
    letters = all_letters(props)
    start = canonical(to_nnf(f))
    index = {start: 0}
    order = [start]
    rows = []
    frontier = 0
    while frontier < len(order):
        state = order[frontier]
        frontier += 1
        row = {}
        for letter in letters:
            succ = progress(state, letter)
            target = index.get(succ)
            if target is None:
                target = len(order)
                if target >= state_budget:
                    raise DfaSizeError(
                        f"progression closure exceeded {state_budget} states; "
                        "the formula is too large for canonicalization"
                    )
                index[succ] = target
                order.append(succ)
            row[letter] = target
        rows.append(row)
    accepting = frozenset(i for i, q in enumerate(order) if epsilon_eval(q))
    dfa = Dfa(props=props, init=0, delta=tuple(rows), accepting=accepting)
    if minimize:
        dfa = _minimize(dfa, letters)
    return dfa


def _minimize(dfa: Dfa, letters: list) -> Dfa:
    partition = _refine_partition(dfa, letters)
    block_of = {}
    for block in partition:
        for state in block:
            block_of[state] = block
    # renumber blocks breadth-first from the initial block, letters in order
    numbering = {block_of[dfa.init]: 0}
    queue = [block_of[dfa.init]]
    while queue:
        block = queue.pop(0)
        repr_state = min(block)
        for letter in letters:
            succ = block_of[dfa.delta[repr_state][letter]]
            if succ not in numbering:
                numbering[succ] = len(numbering)
                queue.append(succ)
    rows = [None] * len(numbering)
    accepting = set()
    for block, new_id in numbering.items():
        repr_state = min(block)
        rows[new_id] = {
            letter: numbering[block_of[dfa.delta[repr_state][letter]]]
            for letter in letters
        }
        if repr_state in dfa.accepting:
            accepting.add(new_id)
    return Dfa(
        props=dfa.props, init=0, delta=tuple(rows), accepting=frozenset(accepting)
    )


def _refine_partition(dfa: Dfa, letters: list) -> set:
    """Hopcroft's partition refinement; returns the coarsest stable partition."""
    states = frozenset(range(dfa.n_states))
    accepting = frozenset(dfa.accepting)
    rest = states - accepting
    partition = {b for b in (accepting, rest) if b}
    if len(partition) <= 1:
        return partition
    predecessors = {letter: {} for letter in letters}
    for src in range(dfa.n_states):
        for letter in letters:
            predecessors[letter].setdefault(dfa.delta[src][letter], set()).add(src)
    block_of = {}
    for block in partition:
        for s in block:
            block_of[s] = block
    worklist = {accepting if len(accepting) <= len(rest) else rest}
    while worklist:
        splitter = worklist.pop()
        for letter in letters:
            affected = {}
            for target in splitter:
                for src in predecessors[letter].get(target, ()):
                    block = block_of[src]
                    affected.setdefault(block, set()).add(src)
            for block, overlap in affected.items():
                if len(overlap) == len(block):
                    continue
                part1 = frozenset(overlap)
                part2 = block - part1
                partition.discard(block)
                partition.add(part1)
                partition.add(part2)
                for s in part1:
                    block_of[s] = part1
                for s in part2:
                    block_of[s] = part2
                if block in worklist:
                    worklist.discard(block)
                    worklist.add(part1)
                    worklist.add(part2)
                else:
                    # the smaller half keeps refinement near O(n log n)
                    worklist.add(part1 if len(part1) <= len(part2) else part2)
    return partition
