"""Direct access to the outputs of an unambiguous functional vset automaton.

Preprocessing stores the letter matrices of the input string in a
:class:`~mso_access.tree.ProductTree`.  The i-th output under any
lexicographic variable order is then found one variable at a time by binary
search over constrained counts; each probe is a persistent ``set`` on a
private copy of the tree, so the index itself never changes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Optional, Sequence, Tuple

from .automaton import Mapping, VsetAutomaton, resolve_order
from .errors import MsoAccessError, OutOfBounds
from .matrices import (
    CountMatrix,
    constrained_matrix,
    count_from_product,
    letter_matrix,
    mat_mul,
)
from .tree import Monoid, ProductTree

Label = Tuple[str, CountMatrix]


def matrix_monoid(a: VsetAutomaton) -> Monoid:
    """Monoid of |Q| x |Q| count matrices over labels ``(symbol, matrix)``."""
    return Monoid(mat_mul, CountMatrix.identity(a.num_states), element=_matrix_of)


def _matrix_of(label: Label) -> CountMatrix:
    return label[1]


def letter_labels(a: VsetAutomaton, symbols: Iterable[str]) -> list:
    cache: Dict[str, Label] = {}
    labels = []
    for c in symbols:
        if c not in cache:
            if c not in a.alphabet:
                raise MsoAccessError(f"symbol {c!r} is not in the alphabet")
            cache[c] = (c, letter_matrix(a, c))
        labels.append(cache[c])
    return labels


@dataclass(frozen=True)
class DAIndex:
    automaton: VsetAutomaton
    tree: ProductTree

    @property
    def length(self) -> int:
        return self.tree.size

    @property
    def monoid(self) -> Monoid:
        return self.tree.monoid

    def symbols(self) -> Tuple[str, ...]:
        return tuple(label[0] for label in self.tree)


def preprocess(a: VsetAutomaton, s: Sequence[str], monoid: Optional[Monoid] = None) -> DAIndex:
    """Build the index for ``s``; linear in ``len(s)``."""
    if a.var_sets is None:
        raise MsoAccessError("automaton has not been validated")
    monoid = monoid or matrix_monoid(a)
    return DAIndex(a, ProductTree.init(monoid, letter_labels(a, s)))


def count(ix: DAIndex) -> int:
    return count_from_product(ix.automaton, ix.tree.out())


def constrained_count(ix: DAIndex, tau: Mapping, order: Optional[Sequence[str]] = None) -> int:
    """Number of outputs agreeing with ``tau`` before its last variable and at
    most ``tau`` on it, where ``tau`` binds a prefix of ``order``."""
    order = resolve_order(ix.automaton, order)
    prefix = order[:len(tau)]
    if set(prefix) != set(tau):
        raise MsoAccessError(f"tau must bind a prefix of the order {','.join(order)}")
    current = prefix[-1] if prefix else None
    root = ix.tree
    for position in sorted(set(tau.values())):
        root = pin(ix, root, position, tau, current)
    return _root_count(ix, root)


def _root_count(ix: DAIndex, root: ProductTree) -> int:
    return count_from_product(ix.automaton, root.out())


def pin(ix: DAIndex, root: ProductTree, position: int, tau: Mapping,
        current: Optional[str]) -> ProductTree:
    """Replace the matrix at ``position`` by its ``tau``-constrained version."""
    symbol = root.get(position)[0]
    m = constrained_matrix(ix.automaton, symbol, position, tau, current)
    return root.set(position, (symbol, m))


def direct_access(ix: DAIndex, i: int, order: Optional[Sequence[str]] = None) -> Mapping:
    """The i-th output (1-based) in the lexicographic order given by ``order``.

    Raises :class:`OutOfBounds` carrying the exact total when ``i`` exceeds
    the number of outputs.
    """
    a = ix.automaton
    order = resolve_order(a, order)
    if i < 1:
        raise MsoAccessError(f"index must be at least 1, got {i}")
    total = count(ix)
    if i > total:
        raise OutOfBounds(i, total)

    n = ix.length
    root = ix.tree
    tau: Mapping = {}
    for x in order:
        def probe(j: int) -> int:
            return _root_count(ix, pin(ix, root, j, {**tau, x: j}, x))

        # least j with probe(j) >= i; probe(n) >= i holds on entry
        lo, hi = 1, n
        while lo < hi:
            mid = (lo + hi) // 2
            if probe(mid) >= i:
                hi = mid
            else:
                lo = mid + 1
        j = lo
        if j > 1:
            i -= probe(j - 1)
        tau[x] = j
        root = pin(ix, root, j, tau, None)
    return dict(tau)


def enumerate_outputs(ix: DAIndex, order: Optional[Sequence[str]] = None) -> Iterator[Mapping]:
    for i in range(1, count(ix) + 1):
        yield direct_access(ix, i, order)
