"""Editing programs: straight-line concat/split/cut/paste over a strings database.

Programs run directly on the preprocessed trees, so the edited string gets
its direct-access index without being preprocessed again.  Every string
name and every string variable may be consumed at most once, which keeps the
output no longer than the inputs combined.
"""
from __future__ import annotations

import shlex
from dataclasses import dataclass
from typing import Dict, List, Mapping as MappingT, Optional, Sequence, Tuple, Union

from .access import DAIndex, letter_labels, matrix_monoid
from .automaton import VsetAutomaton
from .errors import ProgramError
from .tree import ProductTree


@dataclass(frozen=True)
class Ref:
    """A string name from the database or a string variable."""
    name: str


@dataclass(frozen=True)
class Sym:
    symbol: str


Literal = Union[Ref, Sym]


@dataclass(frozen=True)
class Concat:
    out: str
    left: Literal
    right: Literal


@dataclass(frozen=True)
class Split:
    out1: str
    out2: str
    source: Literal
    i: int


@dataclass(frozen=True)
class Cut:
    out1: str
    out2: str
    source: Literal
    i: int
    j: int


@dataclass(frozen=True)
class Paste:
    out: str
    source: Literal
    inserted: Literal
    i: int


EditRule = Union[Concat, Split, Cut, Paste]


@dataclass(frozen=True)
class EditProgram:
    rules: Tuple[EditRule, ...]
    output: str


def _inputs(rule: EditRule) -> Tuple[Literal, ...]:
    if isinstance(rule, Concat):
        return rule.left, rule.right
    if isinstance(rule, Paste):
        return rule.source, rule.inserted
    return (rule.source,)


def _outputs(rule: EditRule) -> Tuple[str, ...]:
    if isinstance(rule, (Split, Cut)):
        return rule.out1, rule.out2
    return (rule.out,)


class StringsDB:
    """Named strings, each preprocessed once into a tree for ``automaton``."""

    def __init__(self, automaton: VsetAutomaton, strings: MappingT[str, Sequence[str]]):
        self.automaton = automaton
        self.monoid = matrix_monoid(automaton)
        self.strings = {name: tuple(s) for name, s in strings.items()}
        self.trees: Dict[str, ProductTree] = {
            name: ProductTree.init(self.monoid, letter_labels(automaton, s))
            for name, s in self.strings.items()}

    def names(self) -> frozenset:
        return frozenset(self.strings)

    def index(self, name: str) -> DAIndex:
        return DAIndex(self.automaton, self.trees[name])


def validate_program(program: EditProgram, names) -> List[str]:
    """Static checks in one pass; returns diagnostics, empty when the program is fine.

    Ranges that depend on string lengths are checked during execution.
    """
    names = frozenset(names)
    problems: List[str] = []
    defined: set = set()
    consumed: set = set()
    for k, rule in enumerate(program.rules, start=1):
        for lit in _inputs(rule):
            if not isinstance(lit, Ref):
                continue
            if lit.name in names:
                kind = "string name"
            elif lit.name in defined:
                kind = "variable"
            else:
                problems.append(f"rule {k}: {lit.name} is used before it is defined")
                continue
            if lit.name in consumed:
                problems.append(f"rule {k}: {kind} {lit.name} is used more than once")
            consumed.add(lit.name)
        if isinstance(rule, (Split, Paste)) and rule.i < 0:
            problems.append(f"rule {k}: negative position {rule.i}")
        if isinstance(rule, Cut) and not 1 <= rule.i <= rule.j:
            problems.append(f"rule {k}: cut needs 1 <= i <= j, got i={rule.i}, j={rule.j}")
        outs = _outputs(rule)
        if len(set(outs)) != len(outs):
            problems.append(f"rule {k}: both outputs are named {outs[0]}")
        for out in outs:
            if out in names:
                problems.append(f"rule {k}: variable {out} clashes with a string name")
            elif out in defined:
                problems.append(f"rule {k}: variable {out} is defined twice")
            defined.add(out)
    if program.output not in defined:
        problems.append(f"output variable {program.output} is never defined")
    return problems


def apply_program(program: EditProgram, db: StringsDB,
                  costs: Optional[List[int]] = None) -> DAIndex:
    """Run ``program`` on the database trees and index the output string.

    The database is left untouched.  If ``costs`` is given, the number of
    tree nodes built by each rule is appended to it.
    """
    problems = validate_program(program, db.names())
    if problems:
        raise ProgramError("; ".join(problems))
    m = db.monoid
    env: Dict[str, ProductTree] = {}

    def value(lit: Literal, k: int) -> ProductTree:
        if isinstance(lit, Sym):
            if lit.symbol not in db.automaton.alphabet:
                raise ProgramError(f"symbol {lit.symbol!r} is not in the alphabet", k)
            return ProductTree.leaf(m, letter_labels(db.automaton, [lit.symbol])[0])
        if lit.name in env:
            return env[lit.name]
        return db.trees[lit.name]

    def in_range(i: int, t: ProductTree, k: int, low: int = 0) -> None:
        if not low <= i <= t.size:
            raise ProgramError(f"position {i} outside {low}..{t.size}", k)

    for k, rule in enumerate(program.rules, start=1):
        before = m.stats.nodes
        if isinstance(rule, Concat):
            env[rule.out] = value(rule.left, k).concat(value(rule.right, k))
        elif isinstance(rule, Split):
            t = value(rule.source, k)
            in_range(rule.i, t, k)
            env[rule.out1], env[rule.out2] = t.split_inclusive(rule.i)
        elif isinstance(rule, Cut):
            t = value(rule.source, k)
            in_range(rule.j, t, k, low=1)
            head, tail = t.split_inclusive(rule.j)
            keep, piece = head.split_inclusive(rule.i - 1)
            env[rule.out1], env[rule.out2] = piece, keep.concat(tail)
        else:
            t = value(rule.source, k)
            in_range(rule.i, t, k)
            head, tail = t.split_inclusive(rule.i)
            env[rule.out] = head.concat(value(rule.inserted, k)).concat(tail)
        if costs is not None:
            costs.append(m.stats.nodes - before)
    return DAIndex(db.automaton, env[program.output])


def materialize(ix: DAIndex) -> Tuple[str, ...]:
    return ix.symbols()


def run_reference(program: EditProgram, strings: MappingT[str, Sequence[str]]) -> Tuple[str, ...]:
    """Evaluate ``program`` on plain tuples, straight from the rule semantics."""
    problems = validate_program(program, strings.keys())
    if problems:
        raise ProgramError("; ".join(problems))
    sigma: Dict[str, Tuple[str, ...]] = {name: tuple(s) for name, s in strings.items()}

    def value(lit: Literal) -> Tuple[str, ...]:
        return (lit.symbol,) if isinstance(lit, Sym) else sigma[lit.name]

    for k, rule in enumerate(program.rules, start=1):
        if isinstance(rule, Concat):
            sigma[rule.out] = value(rule.left) + value(rule.right)
            continue
        s = value(rule.source)
        last = rule.j if isinstance(rule, Cut) else rule.i
        if last > len(s):
            raise ProgramError(f"position {last} outside 0..{len(s)}", k)
        if isinstance(rule, Split):
            sigma[rule.out1], sigma[rule.out2] = s[:rule.i], s[rule.i:]
        elif isinstance(rule, Cut):
            sigma[rule.out1] = s[rule.i - 1:rule.j]
            sigma[rule.out2] = s[:rule.i - 1] + s[rule.j:]
        else:
            sigma[rule.out] = s[:rule.i] + value(rule.inserted) + s[rule.i:]
    return sigma[program.output]


# -- text format ------------------------------------------------------------

def _literal(token: str) -> Literal:
    if len(token) >= 2 and token[0] == token[-1] == "'":
        return Sym(token[1:-1])
    return Ref(token)


def _db_string(tokens: List[str]) -> Tuple[str, ...]:
    # One token is read character by character; several tokens are symbols.
    if len(tokens) == 1:
        return tuple(tokens[0])
    return tuple(tokens)


def parse_program(text: str) -> Tuple[Dict[str, Tuple[str, ...]], EditProgram]:
    """Parse a program file into its ``db`` strings and the program itself."""
    strings: Dict[str, Tuple[str, ...]] = {}
    rules: List[EditRule] = []
    output: Optional[str] = None

    def number(token: str, lineno: int) -> int:
        try:
            return int(token)
        except ValueError:
            raise ProgramError(f"line {lineno}: expected an integer, got {token!r}") from None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            tokens = shlex.split(line, posix=False)
        except ValueError as exc:
            raise ProgramError(f"line {lineno}: {exc}") from None
        head, args = tokens[0], tokens[1:]
        if head == "db":
            if len(args) < 1:
                raise ProgramError(f"line {lineno}: expected: db NAME STRING")
            name, rest = args[0], args[1:]
            if name in strings:
                raise ProgramError(f"line {lineno}: string {name} declared twice")
            if rest in ([], ["''"], ['""']):
                strings[name] = ()
            else:
                strings[name] = _db_string(rest)
            continue
        if head == "output":
            if len(args) != 1:
                raise ProgramError(f"line {lineno}: expected: output VAR")
            output = args[0]
            continue
        if "=" not in args:
            raise ProgramError(f"line {lineno}: expected '=' in rule")
        eq = args.index("=")
        lhs, rhs = args[:eq], args[eq + 1:]
        shapes = {"concat": (1, 2), "split": (2, 2), "cut": (2, 3), "paste": (1, 3)}
        if head not in shapes:
            raise ProgramError(f"line {lineno}: unknown rule {head!r}")
        if (len(lhs), len(rhs)) != shapes[head]:
            raise ProgramError(f"line {lineno}: malformed {head} rule")
        if head == "concat":
            rules.append(Concat(lhs[0], _literal(rhs[0]), _literal(rhs[1])))
        elif head == "split":
            rules.append(Split(lhs[0], lhs[1], _literal(rhs[0]), number(rhs[1], lineno)))
        elif head == "cut":
            rules.append(Cut(lhs[0], lhs[1], _literal(rhs[0]),
                             number(rhs[1], lineno), number(rhs[2], lineno)))
        else:
            rules.append(Paste(lhs[0], _literal(rhs[0]), _literal(rhs[1]),
                               number(rhs[2], lineno)))
    if output is None:
        raise ProgramError("program has no output line")
    return strings, EditProgram(tuple(rules), output)
