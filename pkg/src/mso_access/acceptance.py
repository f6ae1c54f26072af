"""Acceptance checks shared by the test suite and ``mso-access selftest``.

Each check returns a :class:`CriterionResult`; none of them raise on a
mismatch, so a run always reports every criterion.
"""
from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

from .access import constrained_count, count, direct_access, enumerate_outputs, preprocess
from .editing import (
    Concat,
    Cut,
    EditProgram,
    Paste,
    Ref,
    Split,
    StringsDB,
    Sym,
    apply_program,
    materialize,
    parse_program,
    run_reference,
)
from .errors import OutOfBounds
from .fixtures import a0, universal_automaton
from .matrices import CountMatrix, constrained_matrix, mat_mul
from .oracle import constrained_count_oracle, random_unambiguous_automaton, sorted_outputs
from .tree import Monoid, ProductTree, check_invariants

DEFAULT_SEED = 20240601

REPLACE_PROGRAM = """\
db s1 bbbbcb
split S1 S2 = s1 4
split S3 S4 = S2 1
concat S5 = S1 'a'
concat S6 = S5 S4
output S6
"""

# Variable sets of the running example, written out by hand.
A0_VAR_SETS = {"q0": frozenset(), "q1": frozenset({"x1"}), "q2": frozenset({"x2"}),
               "q3": frozenset({"x1", "x2"})}


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number}: {verdict} {self.name} ({self.detail}; {self.seconds:.2f}s)"


def _warm_up() -> None:
    # Loads the compiled matrix kernel so timings measure the work, not the import.
    mat_mul(CountMatrix.identity(1), CountMatrix.identity(1))


def _timed(number: int, name: str, body: Callable[[], Tuple[bool, str]]) -> CriterionResult:
    start = time.perf_counter()
    try:
        ok, detail = body()
    except Exception as exc:  # a crash is a failed criterion, not a crashed run
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CriterionResult(number, name, ok, detail, time.perf_counter() - start)


# -- 1 ------------------------------------------------------------------------

def running_example() -> CriterionResult:
    _warm_up()

    def body():
        a = a0()
        ix = preprocess(a, "abbab")
        total = count(ix)
        got = [(m["x1"], m["x2"]) for m in enumerate_outputs(ix, ("x1", "x2"))]
        try:
            direct_access(ix, 5, ("x1", "x2"))
            bounds = None
        except OutOfBounds as exc:
            bounds = exc.total
        ok = total == 4 and got == [(1, 2), (4, 2), (4, 3), (4, 5)] and bounds == 4
        return ok, f"count={total} outputs={got} out-of-bounds total={bounds}"

    result = _timed(1, "running example", body)
    if result.passed and result.seconds >= 1.0:
        result.passed = False
        result.detail += " but slower than 1s"
    return result


# -- 2 ------------------------------------------------------------------------

def constrained_counts() -> CriterionResult:
    def body():
        a = a0()
        ix = preprocess(a, "abbab")
        cases = [({"x1": 2}, 1), ({"x1": 2, "x2": 3}, 0), ({"x1": 4, "x2": 3}, 2)]
        parts, ok = [], True
        for tau, want in cases:
            fast = constrained_count(ix, tau, ("x1", "x2"))
            slow = constrained_count_oracle(a, "abbab", tau, ("x1", "x2"))
            ok &= fast == slow == want
            parts.append(f"{tau}: {fast}/{slow}")
        return ok, ", ".join(parts)

    return _timed(2, "constrained counts", body)


# -- 3 ------------------------------------------------------------------------

def hand_constrained_matrix(a, symbol: str, tau: Dict[str, int], position: int,
                            current: str) -> List[List[int]]:
    """Both conditions applied transition by transition with the hand-written X_q."""
    names = list(a.states)
    out = [[0] * len(names) for _ in names]
    for t in a.transitions:
        if t.symbol != symbol:
            continue
        others = {v for v, j in tau.items() if j == position and v != current}
        if not others <= set(t.vars):
            continue
        if tau[current] == position and current not in A0_VAR_SETS[names[t.target]]:
            continue
        out[t.source][t.target] = 1
    return out


def constrained_matrix_spot_check() -> CriterionResult:
    def body():
        a = a0()
        tau = {"x1": 4, "x2": 4}
        m = constrained_matrix(a, "a", 4, tau, "x2")
        q = a.state_id
        spots = (m[q("q0"), q("q1")], m[q("q2"), q("q3")], m[q("q3"), q("q3")])
        hand = hand_constrained_matrix(a, "a", tau, 4, "x2")
        ok = spots == (0, 1, 0) and m.to_lists() == hand
        return ok, f"[q0,q1],[q2,q3],[q3,q3]={spots} full matrix matches hand oracle: {m.to_lists() == hand}"

    return _timed(3, "constrained matrix spot-check", body)


# -- 4 ------------------------------------------------------------------------

def oracle_sweep(num_automata: int = 200, max_length: int = 6,
                 seed: int = DEFAULT_SEED) -> CriterionResult:
    _warm_up()

    def body():
        rng = random.Random(seed)
        mismatches = checked = 0
        first = ""
        for _ in range(num_automata):
            a = random_unambiguous_automaton(rng, max_states=6, max_vars=3)
            for n in range(max_length + 1):
                for s in itertools.product(a.alphabet, repeat=n):
                    ix = preprocess(a, s)
                    for order in itertools.permutations(a.variables):
                        want = sorted_outputs(a, s, order)
                        if count(ix) != len(want):
                            mismatches += 1
                        for i, m in enumerate(want, start=1):
                            checked += 1
                            if direct_access(ix, i, order) != m:
                                mismatches += 1
                                first = first or f"first mismatch on {''.join(s)!r} i={i}"
        return mismatches == 0, f"{num_automata} automata, {checked} accesses, {mismatches} mismatches {first}".rstrip()

    result = _timed(4, "oracle equivalence sweep", body)
    if result.passed and result.seconds >= 120:
        result.passed = False
        result.detail += " but slower than 2 min"
    return result


# -- 5 ------------------------------------------------------------------------

def random_program(rng: random.Random, alphabet: Sequence[str], max_rules: int = 50,
                   max_length: int = 64) -> Tuple[Dict[str, Tuple[str, ...]], EditProgram]:
    """A random well-formed program together with a database it runs on."""
    strings = {f"s{k}": tuple(rng.choice(alphabet) for _ in range(rng.randint(0, max_length)))
               for k in range(rng.randint(1, 4))}
    live: Dict[str, int] = {name: len(s) for name, s in strings.items()}
    rules: list = []
    fresh = itertools.count(1)

    def take() -> Tuple[object, int]:
        if rng.random() < 0.15:
            return Sym(rng.choice(alphabet)), 1
        name = rng.choice(sorted(live))
        return Ref(name), live.pop(name)

    for _ in range(rng.randint(1, max_rules)):
        if not live:
            break
        kind = rng.choice(["concat", "split", "cut", "paste"])
        src, n = take()
        if kind == "cut" and n == 0:
            kind = "split"
        if kind in ("concat", "paste") and not live:
            other, m = Sym(rng.choice(alphabet)), 1
        elif kind in ("concat", "paste"):
            other, m = take()
        if kind == "concat":
            out = f"V{next(fresh)}"
            rules.append(Concat(out, src, other))
            live[out] = n + m
        elif kind == "paste":
            out = f"V{next(fresh)}"
            rules.append(Paste(out, src, other, rng.randint(0, n)))
            live[out] = n + m
        elif kind == "split":
            o1, o2 = f"V{next(fresh)}", f"V{next(fresh)}"
            i = rng.randint(0, n)
            rules.append(Split(o1, o2, src, i))
            live[o1], live[o2] = i, n - i
        else:
            o1, o2 = f"V{next(fresh)}", f"V{next(fresh)}"
            i = rng.randint(1, n)
            j = rng.randint(i, n)
            rules.append(Cut(o1, o2, src, i, j))
            live[o1], live[o2] = j - i + 1, n - (j - i + 1)
    variables = [v for v in live if v.startswith("V")]
    if not variables:
        out = f"V{next(fresh)}"
        first = sorted(strings)[0]
        if first not in live:
            rules.append(Concat(out, Sym(alphabet[0]), Sym(alphabet[0])))
        else:
            rules.append(Split(out, f"V{next(fresh)}", Ref(first), 0))
        variables = [out]
    return strings, EditProgram(tuple(rules), rng.choice(sorted(variables)))


def editing_semantics(num_programs: int = 100, seed: int = DEFAULT_SEED) -> CriterionResult:
    def body():
        a = a0(extra_symbols=("c",))
        strings, program = parse_program(REPLACE_PROGRAM)
        replaced = "".join(materialize(apply_program(program, StringsDB(a, strings))))
        rng = random.Random(seed)
        mismatches = accesses = 0
        for _ in range(num_programs):
            # no 'c': A_0 has no transitions on it, so every count would be zero
            strings, program = random_program(rng, ("a", "b"))
            edited = apply_program(program, StringsDB(a, strings))
            flat = run_reference(program, strings)
            if materialize(edited) != flat:
                mismatches += 1
                continue
            fresh = preprocess(a, flat)
            total = count(edited)
            if total != count(fresh):
                mismatches += 1
                continue
            for i in range(1, total + 1):
                accesses += 1
                if direct_access(edited, i) != direct_access(fresh, i):
                    mismatches += 1
        ok = replaced == "bbbbab" and mismatches == 0
        return ok, f"replace program gives {replaced}; {num_programs} programs, {accesses} accesses, {mismatches} mismatches"

    return _timed(5, "editing semantics", body)


def _sample_indices(rng: random.Random, total: int, k: int) -> List[int]:
    # Every index for small counts; both ends plus a random sample otherwise.
    if total <= k:
        return list(range(1, total + 1))
    return sorted({1, total, *(rng.randint(1, total) for _ in range(k - 2))})


# -- 6 ------------------------------------------------------------------------

def string_monoid() -> Monoid:
    """Free monoid over strings: the product is the concatenated sequence."""
    return Monoid(lambda x, y: x + y, "")


def tree_invariants(num_ops: int = 1000, seed: int = DEFAULT_SEED) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        m = string_monoid()
        letters = "abcdefghij"
        roots: List[Tuple[ProductTree, str]] = []

        def keep(t: ProductTree) -> None:
            roots.append((t, "".join(t.labels())))

        keep(ProductTree.init(m, [rng.choice(letters) for _ in range(50)]))
        violations: List[str] = []
        for _ in range(num_ops):
            t, seq = rng.choice(roots)
            op = rng.choice(["set", "join", "split", "concat"])
            if op == "set" and len(seq):
                i = rng.randint(1, len(seq))
                new = [t.set(i, rng.choice(letters))]
            elif op == "join":
                u, _ = rng.choice(roots)
                new = [ProductTree.join(t, rng.choice(letters), u)]
            elif op == "split" and len(seq):
                left, _, right = t.split(rng.randint(1, len(seq)))
                new = [left, right]
            else:
                u, _ = rng.choice(roots)
                new = [t.concat(u)]
            for tree in new:
                violations += check_invariants(tree)
                if tree.height > 1.4405 * math.log2(tree.size + 2):
                    violations.append(f"height {tree.height} at size {tree.size}")
                keep(tree)
        for tree, seq in roots:
            if "".join(tree.labels()) != seq or tree.out() != seq:
                violations.append("a retained root changed")
        return not violations, f"{num_ops} operations, {len(roots)} roots, {len(violations)} violations"

    return _timed(6, "tree invariants", body)


# -- 7 ------------------------------------------------------------------------

def set_budget(n: int) -> int:
    return 2 * math.ceil(1.4405 * math.log2(n + 2)) + 2


def access_budget(n: int, num_vars: int) -> int:
    return num_vars * (math.ceil(math.log2(n)) + 3)


def edit_budget(n: int) -> int:
    return 4 * math.ceil(math.log2(n)) + 8


@dataclass
class BudgetReport:
    n: int
    height: int
    max_set_multiplications: int
    max_access_sets: int
    max_access_multiplications: int
    max_edit_nodes: int

    def violations(self, num_vars: int) -> List[str]:
        out = []
        if self.max_set_multiplications > set_budget(self.n):
            out.append(f"set used {self.max_set_multiplications} > {set_budget(self.n)} multiplications")
        if self.max_access_sets > access_budget(self.n, num_vars):
            out.append(f"access used {self.max_access_sets} > {access_budget(self.n, num_vars)} sets")
        if self.max_edit_nodes > edit_budget(self.n):
            out.append(f"edit rule built {self.max_edit_nodes} > {edit_budget(self.n)} nodes")
        return out


def measure_budgets(n: int, seed: int = DEFAULT_SEED, trials: int = 20) -> BudgetReport:
    """Counter maxima for sets, accesses and single edit rules on A_0 at length ``n``."""
    rng = random.Random(seed)
    a = a0()
    strings = {"s": tuple(rng.choice("ab") for _ in range(n)),
               "t": tuple(rng.choice("ab") for _ in range(n))}
    db = StringsDB(a, strings)
    ix = db.index("s")
    stats = db.monoid.stats

    max_set = 0
    for _ in range(trials):
        before = stats.snapshot()
        ix.tree.set(rng.randint(1, n), ix.tree.get(rng.randint(1, n)))
        max_set = max(max_set, (stats - before).multiplications)

    max_sets = max_mults = 0
    total = count(ix)
    for i in _sample_indices(rng, total, trials):
        before = stats.snapshot()
        direct_access(ix, i)
        delta = stats - before
        max_sets = max(max_sets, delta.sets)
        max_mults = max(max_mults, delta.multiplications)

    max_nodes = 0
    for _ in range(trials):
        i = rng.randint(1, n)
        j = rng.randint(i, n)
        for rule in (Split("A", "B", Ref("s"), rng.randint(0, n)),
                     Cut("A", "B", Ref("s"), i, j),
                     Paste("A", Ref("s"), Ref("t"), rng.randint(0, n)),
                     Paste("A", Ref("s"), Sym("a"), rng.randint(0, n)),
                     Concat("A", Ref("s"), Ref("t"))):
            costs: List[int] = []
            apply_program(EditProgram((rule,), "A"), db, costs)
            max_nodes = max(max_nodes, costs[0])
    return BudgetReport(n, ix.tree.height, max_set, max_sets, max_mults, max_nodes)


def budget_checks(n: int = 1 << 16, seed: int = DEFAULT_SEED) -> CriterionResult:
    def body():
        report = measure_budgets(n, seed)
        problems = report.violations(2)
        detail = (f"n={n}: set mults {report.max_set_multiplications}/{set_budget(n)}, "
                  f"access sets {report.max_access_sets}/{access_budget(n, 2)}, "
                  f"edit nodes {report.max_edit_nodes}/{edit_budget(n)}")
        return not problems, detail

    return _timed(7, "budget checks", body)


# -- 8 ------------------------------------------------------------------------

def big_count(num_vars: int = 9, n: int = 200) -> CriterionResult:
    def body():
        a = universal_automaton(num_vars)
        ix = preprocess(a, "a" * n)
        total = count(ix)
        first = direct_access(ix, 1)
        last = direct_access(ix, total)
        ok = (total == n ** num_vars
              and set(first.values()) == {1} and set(last.values()) == {n})
        return ok, f"count={total} (closed form {n ** num_vars}), first={sorted(set(first.values()))}, last={sorted(set(last.values()))}"

    return _timed(8, "big-count exactness", body)


ALL_CRITERIA: Tuple[Callable[[], CriterionResult], ...] = (
    running_example, constrained_counts, constrained_matrix_spot_check, oracle_sweep,
    editing_semantics, tree_invariants, budget_checks, big_count,
)


def run_all() -> List[CriterionResult]:
    return [check() for check in ALL_CRITERIA]
