"""Variable-set automata: representation, parsing, trimming and validation.

A vset automaton reads a string and, on every transition, binds a (possibly
empty) set of variables to the current position.  Accepting runs that bind
every variable exactly once produce an output mapping ``{variable: position}``
with 1-based positions.

The engine only works with *functional* automata (every accepting run binds
each variable exactly once) and *unambiguous* ones (one run per output).
Functionality is certified structurally through the per-state variable sets
computed by :func:`compute_var_sets`; unambiguity through the self-product
check in :func:`check_unambiguous`.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import (
    AutomatonSyntaxError,
    EmptyAutomatonError,
    FunctionalityError,
    MsoAccessError,
)

log = logging.getLogger(__name__)

VarSet = FrozenSet[str]
Mapping = Dict[str, int]
VarOrder = Tuple[str, ...]

EMPTY_VARS: VarSet = frozenset()


@dataclass(frozen=True)
class Transition:
    source: int
    symbol: str
    vars: VarSet
    target: int


@dataclass(frozen=True)
class VsetAutomaton:
    """An immutable vset automaton with dense state indices.

    ``states`` holds the original state names (index = state id).  ``var_sets``
    is ``None`` until the automaton has been validated.
    """

    states: Tuple[str, ...]
    alphabet: Tuple[str, ...]
    variables: Tuple[str, ...]
    transitions: Tuple[Transition, ...]
    initial: int
    finals: FrozenSet[int]
    var_sets: Optional[Tuple[VarSet, ...]] = None
    removed_states: Tuple[str, ...] = field(default=(), compare=False)

    @property
    def num_states(self) -> int:
        return len(self.states)

    def state_id(self, name: str) -> int:
        try:
            return self.states.index(name)
        except ValueError:
            raise MsoAccessError(f"unknown state {name!r}") from None

    def transitions_from(self, state: int) -> List[Transition]:
        return [t for t in self.transitions if t.source == state]

    def is_validated(self) -> bool:
        return self.var_sets is not None


def _check_references(a: VsetAutomaton) -> None:
    n = len(a.states)
    if len(set(a.states)) != n:
        raise MsoAccessError("duplicate state names")
    if len(set(a.variables)) != len(a.variables):
        raise MsoAccessError("duplicate variable names")
    if len(set(a.alphabet)) != len(a.alphabet):
        raise MsoAccessError("duplicate alphabet symbols")
    if not 0 <= a.initial < n:
        raise MsoAccessError("initial state out of range")
    if any(not 0 <= f < n for f in a.finals):
        raise MsoAccessError("final state out of range")
    symbols = set(a.alphabet)
    variables = set(a.variables)
    seen: Dict[Tuple[int, str, int], VarSet] = {}
    for t in a.transitions:
        if not (0 <= t.source < n and 0 <= t.target < n):
            raise MsoAccessError(f"transition {t} refers to an unknown state")
        if t.symbol not in symbols:
            raise MsoAccessError(f"transition uses undeclared symbol {t.symbol!r}")
        if not t.vars <= variables:
            raise MsoAccessError(
                f"transition uses undeclared variables {sorted(t.vars - variables)}")
        key = (t.source, t.symbol, t.target)
        if key in seen and seen[key] != t.vars:
            raise FunctionalityError(
                f"two transitions {a.states[t.source]} -{t.symbol}-> {a.states[t.target]} "
                f"with different variable sets {_fmt(seen[key])} and {_fmt(t.vars)}")
        seen[key] = t.vars


def make_automaton(states: Sequence[str], alphabet: Sequence[str],
                   variables: Sequence[str],
                   transitions: Iterable[Tuple[str, str, Iterable[str], str]],
                   initial: str, finals: Iterable[str]) -> VsetAutomaton:
    """Build, trim and validate an automaton from named components."""
    states = tuple(states)
    index = {name: i for i, name in enumerate(states)}
    try:
        trans = tuple(dict.fromkeys(
            Transition(index[p], c, frozenset(vs), index[q])
            for p, c, vs, q in transitions))
        a = VsetAutomaton(states, tuple(alphabet), tuple(variables), trans,
                          index[initial], frozenset(index[f] for f in finals))
    except KeyError as exc:
        raise MsoAccessError(f"unknown state {exc.args[0]!r}") from None
    return validate(a)


def trim(a: VsetAutomaton) -> VsetAutomaton:
    """Restrict ``a`` to states that are reachable and co-reachable.

    Raises :class:`EmptyAutomatonError` when no final state is reachable.
    """
    forward: Dict[int, List[int]] = {}
    backward: Dict[int, List[int]] = {}
    for t in a.transitions:
        forward.setdefault(t.source, []).append(t.target)
        backward.setdefault(t.target, []).append(t.source)

    def closure(start: Iterable[int], edges: Dict[int, List[int]]) -> set:
        seen = set(start)
        todo = list(seen)
        while todo:
            for q in edges.get(todo.pop(), ()):
                if q not in seen:
                    seen.add(q)
                    todo.append(q)
        return seen

    keep = closure([a.initial], forward) & closure(a.finals, backward)
    if a.initial not in keep:
        raise EmptyAutomatonError("the automaton accepts no string: no final state is reachable")
    if len(keep) == len(a.states):
        return a
    old_ids = sorted(keep)
    new_id = {old: new for new, old in enumerate(old_ids)}
    trans = tuple(Transition(new_id[t.source], t.symbol, t.vars, new_id[t.target])
                  for t in a.transitions if t.source in keep and t.target in keep)
    removed = tuple(a.states[q] for q in range(len(a.states)) if q not in keep)
    return VsetAutomaton(
        states=tuple(a.states[q] for q in old_ids),
        alphabet=a.alphabet,
        variables=a.variables,
        transitions=trans,
        initial=new_id[a.initial],
        finals=frozenset(new_id[f] for f in a.finals if f in keep),
        removed_states=a.removed_states + removed,
    )


def compute_var_sets(a: VsetAutomaton) -> Tuple[VarSet, ...]:
    """Propagate X_q from the initial state; fail on any inconsistency.

    Success certifies that ``a`` (which must be trimmed) is functional.
    """
    sets: List[Optional[VarSet]] = [None] * len(a.states)
    sets[a.initial] = EMPTY_VARS
    outgoing: Dict[int, List[Transition]] = {}
    for t in a.transitions:
        outgoing.setdefault(t.source, []).append(t)
    todo = deque([a.initial])
    while todo:
        p = todo.popleft()
        xp = sets[p]
        for t in outgoing.get(p, ()):
            if t.vars & xp:
                raise FunctionalityError(
                    f"transition {a.states[p]} -{t.symbol}/{_fmt(t.vars)}-> {a.states[t.target]} "
                    f"binds {_fmt(t.vars & xp)} which are already bound in {a.states[p]}")
            candidate = xp | t.vars
            current = sets[t.target]
            if current is None:
                sets[t.target] = candidate
                todo.append(t.target)
            elif current != candidate:
                raise FunctionalityError(
                    f"state {a.states[t.target]} is reached with variable sets "
                    f"{_fmt(current)} and {_fmt(candidate)}")
    if any(s is None for s in sets):
        missing = [a.states[q] for q, s in enumerate(sets) if s is None]
        raise FunctionalityError(f"states {missing} are unreachable; trim first")
    everything = frozenset(a.variables)
    for f in sorted(a.finals):
        if sets[f] != everything:
            raise FunctionalityError(
                f"final state {a.states[f]} misses variables {_fmt(everything - sets[f])}")
    return tuple(sets)  # type: ignore[arg-type]


def validate(a: VsetAutomaton) -> VsetAutomaton:
    """Trim, check references and attach the per-state variable sets."""
    _check_references(a)
    trimmed = trim(a)
    if trimmed.removed_states:
        log.info("trimmed unreachable or dead states: %s", ", ".join(trimmed.removed_states))
    return replace(trimmed, var_sets=compute_var_sets(trimmed))


def check_unambiguous(a: VsetAutomaton) -> Tuple[bool, Optional[List[str]]]:
    """Decide unambiguity by exploring pairs of runs in lock-step.

    Two runs move together on the same symbol and the same variable set.  The
    automaton is ambiguous iff a pair of final states is reachable after the
    two runs have diverged.  Returns ``(True, None)`` or ``(False, witness)``
    where the witness string has two accepting runs with one mapping.
    """
    by_source: Dict[int, Dict[Tuple[str, VarSet], List[int]]] = {}
    for t in a.transitions:
        by_source.setdefault(t.source, {}).setdefault((t.symbol, t.vars), []).append(t.target)

    start = (a.initial, a.initial, False)
    parent: Dict[tuple, Optional[Tuple[tuple, str]]] = {start: None}
    todo = deque([start])
    while todo:
        node = todo.popleft()
        p, q, diverged = node
        if diverged and p in a.finals and q in a.finals:
            witness: List[str] = []
            while parent[node] is not None:
                node, symbol = parent[node]
                witness.append(symbol)
            return False, witness[::-1]
        left = by_source.get(p, {})
        right = by_source.get(q, {})
        for key, targets in left.items():
            for q2 in right.get(key, ()):
                for p2 in targets:
                    nxt = (p2, q2, diverged or p2 != q2)
                    if nxt not in parent:
                        parent[nxt] = (node, key[0])
                        todo.append(nxt)
    return True, None


def resolve_order(a: VsetAutomaton, order: Optional[Iterable[str]] = None) -> VarOrder:
    """Return ``order`` as a tuple after checking it permutes the variables."""
    if order is None:
        return a.variables
    order = tuple(order)
    if sorted(order) != sorted(a.variables) or len(set(order)) != len(order):
        raise MsoAccessError(
            f"order {','.join(order)} is not a permutation of {','.join(a.variables)}")
    return order


def parse_order(text: Optional[str]) -> Optional[VarOrder]:
    if text is None or not text.strip():
        return None
    return tuple(v.strip() for v in text.split(","))


def mapping_key(mapping: Mapping, order: Sequence[str]) -> Tuple[int, ...]:
    """Sort key realising the lexicographic order induced by ``order``."""
    return tuple(mapping[v] for v in order)


def format_mapping(mapping: Mapping, order: Sequence[str]) -> str:
    return " ".join(f"{v}={mapping[v]}" for v in order)


# -- text format ------------------------------------------------------------

def parse_automaton(text: str) -> VsetAutomaton:
    """Parse the line-oriented automaton format and validate the result."""
    alphabet: List[str] = []
    variables: List[str] = []
    states: List[str] = []
    initial: Optional[str] = None
    finals: List[str] = []
    raw_transitions: List[Tuple[int, List[str]]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = line.split()
        if not tokens:
            continue
        head, args = tokens[0], tokens[1:]

        def fail(msg: str, token: Optional[str] = None) -> AutomatonSyntaxError:
            col = raw.find(token) + 1 if token else raw.find(head) + 1
            return AutomatonSyntaxError(msg, lineno, col)

        if head == "alphabet":
            if not args:
                raise fail("alphabet needs at least one symbol")
            alphabet.extend(args)
        elif head == "var":
            if len(args) != 1:
                raise fail("expected: var NAME")
            if "," in args[0] or args[0] == "-":
                raise fail(f"invalid variable name {args[0]!r}", args[0])
            variables.append(args[0])
        elif head == "state":
            if not args:
                raise fail("expected: state NAME [initial] [final]")
            name, flags = args[0], args[1:]
            if name in states:
                raise fail(f"state {name!r} declared twice", name)
            states.append(name)
            for flag in flags:
                if flag == "initial":
                    if initial is not None:
                        raise fail("only one initial state is allowed", flag)
                    initial = name
                elif flag == "final":
                    finals.append(name)
                else:
                    raise fail(f"unknown state flag {flag!r}", flag)
        elif head == "trans":
            if len(args) != 4:
                raise fail("expected: trans SOURCE SYMBOL VARS TARGET")
            raw_transitions.append((lineno, args))
        else:
            raise fail(f"unknown directive {head!r}")

    if initial is None:
        raise AutomatonSyntaxError("no initial state declared", 0, 0)
    state_set, symbol_set, var_set = set(states), set(alphabet), set(variables)
    transitions = []
    for lineno, (p, c, vs, q) in raw_transitions:
        for s in (p, q):
            if s not in state_set:
                raise AutomatonSyntaxError(f"undeclared state {s!r}", lineno, 0)
        if c not in symbol_set:
            raise AutomatonSyntaxError(f"undeclared symbol {c!r}", lineno, 0)
        bound = [] if vs == "-" else vs.split(",")
        for v in bound:
            if v not in var_set:
                raise AutomatonSyntaxError(f"undeclared variable {v!r}", lineno, 0)
        transitions.append((p, c, bound, q))
    return make_automaton(states, alphabet, variables, transitions, initial, finals)


def serialize(a: VsetAutomaton) -> str:
    lines = ["alphabet " + " ".join(a.alphabet)]
    lines += [f"var {v}" for v in a.variables]
    for q, name in enumerate(a.states):
        flags = (["initial"] if q == a.initial else []) + (["final"] if q in a.finals else [])
        lines.append(" ".join(["state", name] + flags))
    for t in a.transitions:
        vs = ",".join(v for v in a.variables if v in t.vars) or "-"
        lines.append(f"trans {a.states[t.source]} {t.symbol} {vs} {a.states[t.target]}")
    return "\n".join(lines) + "\n"


def _fmt(vs: Iterable[str]) -> str:
    return "{" + ",".join(sorted(vs)) + "}"
