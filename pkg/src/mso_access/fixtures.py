"""Ready-made automata used by the CLI self-test, the benchmarks and the tests."""
from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .automaton import VsetAutomaton, make_automaton, parse_automaton

# x1 on an 'a', x2 on a 'b'; whichever comes second is the first such
# letter after the other one.
A0_TEXT = """\
alphabet a b
var x1
var x2
state q0 initial
state q1
state q2
state q3 final
trans q0 a - q0
trans q0 a x1 q1
trans q0 b - q0
trans q0 b x2 q2
trans q1 a - q1
trans q1 b x2 q3
trans q2 b - q2
trans q2 a x1 q3
trans q3 a - q3
trans q3 b - q3
"""


def a0(extra_symbols: Sequence[str] = ()) -> VsetAutomaton:
    """The running example; ``extra_symbols`` widen the alphabet without transitions."""
    text = A0_TEXT
    if extra_symbols:
        text = text.replace("alphabet a b", "alphabet a b " + " ".join(extra_symbols), 1)
    return parse_automaton(text)


def universal_automaton(num_vars: int, alphabet: Sequence[str] = ("a",)) -> VsetAutomaton:
    """Outputs every mapping of ``num_vars`` variables to positions.

    One state per set of already-bound variables, so 2**num_vars states.
    """
    variables = [f"x{k}" for k in range(1, num_vars + 1)]
    names = {}
    for r in range(num_vars + 1):
        for combo in combinations(variables, r):
            names[frozenset(combo)] = "s_" + ("_".join(combo) or "empty")
    transitions = [(names[y], c, z - y, names[z])
                   for y in names for z in names if y <= z for c in alphabet]
    return make_automaton(list(names.values()), alphabet, variables, transitions,
                          names[frozenset()], [names[frozenset(variables)]])
