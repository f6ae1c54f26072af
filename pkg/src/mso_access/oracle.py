"""Brute-force reference evaluation by exhaustive run enumeration.

Deliberately naive: every run is walked explicitly and nothing is memoised,
so the results can be trusted as ground truth for the matrix-based engine.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from .automaton import (
    Mapping,
    Transition,
    VsetAutomaton,
    check_unambiguous,
    make_automaton,
    mapping_key,
    resolve_order,
)
from .errors import AmbiguityError, EmptyAutomatonError, SearchBudgetExceeded

MAX_LENGTH = 12
MAX_STATES = 8
MAX_STEPS = 2_000_000


@dataclass(frozen=True)
class RunTrace:
    start: int
    transitions: Tuple[Transition, ...]

    @property
    def end(self) -> int:
        return self.transitions[-1].target if self.transitions else self.start

    def is_valid(self, variables: Sequence[str]) -> bool:
        seen: set = set()
        for t in self.transitions:
            if seen & t.vars:
                return False
            seen |= t.vars
        return seen == set(variables)

    def mapping(self) -> Mapping:
        return {v: pos for pos, t in enumerate(self.transitions, start=1) for v in t.vars}


def _guard(a: VsetAutomaton, s: Sequence[str]) -> None:
    if len(s) > MAX_LENGTH and a.num_states > MAX_STATES:
        raise SearchBudgetExceeded(
            f"refusing exhaustive search over {a.num_states} states and length {len(s)}")


def partial_runs(a: VsetAutomaton, s: Sequence[str], start: int,
                 max_steps: int = MAX_STEPS) -> List[RunTrace]:
    """Every partial run over ``s`` starting in ``start``."""
    _guard(a, s)
    by_source: dict = {}
    for t in a.transitions:
        by_source.setdefault((t.source, t.symbol), []).append(t)
    runs: List[RunTrace] = []
    steps = 0

    def walk(state: int, pos: int, path: List[Transition]) -> None:
        nonlocal steps
        steps += 1
        if steps > max_steps:
            raise SearchBudgetExceeded(f"more than {max_steps} search steps")
        if pos == len(s):
            runs.append(RunTrace(start, tuple(path)))
            return
        for t in by_source.get((state, s[pos]), ()):
            path.append(t)
            walk(t.target, pos + 1, path)
            path.pop()

    walk(start, 0, [])
    return runs


def accepting_runs(a: VsetAutomaton, s: Sequence[str]) -> List[RunTrace]:
    return [r for r in partial_runs(a, s, a.initial) if r.end in a.finals]


def count_partial_runs(a: VsetAutomaton, s: Sequence[str], p: int, q: int) -> int:
    return sum(1 for r in partial_runs(a, s, p) if r.end == q)


def enumerate_outputs(a: VsetAutomaton, s: Sequence[str]) -> List[Mapping]:
    """Mappings of all valid accepting runs, repeated once per run."""
    return [r.mapping() for r in accepting_runs(a, s) if r.is_valid(a.variables)]


def sorted_outputs(a: VsetAutomaton, s: Sequence[str],
                   order: Optional[Sequence[str]] = None) -> List[Mapping]:
    order = resolve_order(a, order)
    outputs = enumerate_outputs(a, s)
    keys = Counter(mapping_key(m, order) for m in outputs)
    dupes = [k for k, c in keys.items() if c > 1]
    if dupes:
        witness = dict(zip(order, dupes[0]))
        raise AmbiguityError(f"mapping {witness} is produced by {keys[dupes[0]]} runs", witness)
    return [dict(zip(order, k)) for k in sorted(keys)]


def constrained_count_oracle(a: VsetAutomaton, s: Sequence[str], tau: Mapping,
                             order: Optional[Sequence[str]] = None) -> int:
    """Outputs equal to ``tau`` before its last variable and at most ``tau`` on it."""
    order = resolve_order(a, order)
    prefix = order[:len(tau)]
    if set(prefix) != set(tau):
        raise ValueError("tau must bind a prefix of the order")
    if not prefix:
        return len(sorted_outputs(a, s, order))
    *fixed, last = prefix
    return sum(1 for m in sorted_outputs(a, s, order)
               if all(m[v] == tau[v] for v in fixed) and m[last] <= tau[last])


# -- random instances ---------------------------------------------------------

def random_automaton(rng: random.Random, max_states: int = 6, max_vars: int = 3,
                     alphabet: Sequence[str] = ("a", "b"), density: float = 0.3,
                     ) -> Optional[VsetAutomaton]:
    """A random functional automaton, or ``None`` if the draw accepts nothing.

    Each state gets a random variable set first; transitions only go from
    ``p`` to ``q`` when X_p is a subset of X_q and bind exactly the
    difference, so functionality holds by construction.
    """
    variables = [f"x{k}" for k in range(1, rng.randint(0, max_vars) + 1)]
    n = rng.randint(1, max_states)
    subsets = [frozenset(c) for r in range(len(variables) + 1)
               for c in combinations(variables, r)]
    labels = [frozenset()] + [rng.choice(subsets) for _ in range(n - 1)]
    full = frozenset(variables)
    if full not in labels and n > 1:
        labels[rng.randrange(1, n)] = full
    candidates = [q for q in range(n) if labels[q] == full]
    if not candidates:
        return None
    finals = [q for q in candidates if rng.random() < 0.6] or [rng.choice(candidates)]
    transitions = []
    for p in range(n):
        for q in range(n):
            if not labels[p] <= labels[q]:
                continue
            for c in alphabet:
                if rng.random() < density:
                    transitions.append((f"q{p}", c, labels[q] - labels[p], f"q{q}"))
    try:
        return make_automaton([f"q{q}" for q in range(n)], alphabet, variables,
                              transitions, "q0", [f"q{q}" for q in finals])
    except EmptyAutomatonError:
        return None


def random_unambiguous_automaton(rng: random.Random, **kwargs) -> VsetAutomaton:
    while True:
        a = random_automaton(rng, **kwargs)
        if a is not None and check_unambiguous(a)[0]:
            return a
