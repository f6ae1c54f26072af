"""Persistent AVL trees annotated with monoid products.

A :class:`ProductTree` stores a sequence of labels.  Every node caches the
size and height of its subtree and the monoid product of the subtree's
elements in in-order, so the product of the whole sequence is available at
the root.  Nodes are never mutated: ``set``, ``join``, ``split`` and
``concat`` copy the affected paths and share everything else, so any older
root stays valid.

All structural changes go through :func:`_node`, the single place where the
annotations are computed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, List, Optional, Sequence, Tuple


@dataclass
class OpStats:
    multiplications: int = 0
    nodes: int = 0
    sets: int = 0

    def snapshot(self) -> "OpStats":
        return OpStats(self.multiplications, self.nodes, self.sets)

    def __sub__(self, other: "OpStats") -> "OpStats":
        return OpStats(self.multiplications - other.multiplications,
                       self.nodes - other.nodes, self.sets - other.sets)


@dataclass(eq=False)
class Monoid:
    """An associative ``multiply`` with a two-sided ``identity``.

    ``element`` extracts the monoid element from a tree label; labels are the
    elements themselves by default.  ``stats`` counts multiplications, node
    constructions and ``set`` calls for every tree built over this monoid.
    """

    multiply: Callable[[Any, Any], Any]
    identity: Any
    element: Callable[[Any], Any] = lambda label: label
    stats: OpStats = field(default_factory=OpStats)

    def mul(self, x, y):
        self.stats.multiplications += 1
        return self.multiply(x, y)


class Node:
    __slots__ = ("label", "left", "right", "size", "height", "prod")

    def __init__(self, label, left, right, size, height, prod):
        self.label = label
        self.left = left
        self.right = right
        self.size = size
        self.height = height
        self.prod = prod


def _size(t: Optional[Node]) -> int:
    return t.size if t is not None else 0


def _height(t: Optional[Node]) -> int:
    return t.height if t is not None else 0


def _node(m: Monoid, left: Optional[Node], label, right: Optional[Node]) -> Node:
    m.stats.nodes += 1
    prod = m.element(label)
    if left is not None:
        prod = m.mul(left.prod, prod)
    if right is not None:
        prod = m.mul(prod, right.prod)
    return Node(label, left, right, _size(left) + _size(right) + 1,
                max(_height(left), _height(right)) + 1, prod)


def _build(m: Monoid, labels: Sequence, lo: int, n: int) -> Optional[Node]:
    # Complete-tree shape: every level full except the last, filled from the left.
    if n == 0:
        return None
    depth = n.bit_length() - 1
    if depth == 0:
        return _node(m, None, labels[lo], None)
    half = 1 << (depth - 1)
    last = n - ((1 << depth) - 1)
    n_left = half - 1 + min(last, half)
    left = _build(m, labels, lo, n_left)
    right = _build(m, labels, lo + n_left + 1, n - n_left - 1)
    return _node(m, left, labels[lo + n_left], right)


def _get(t: Node, i: int):
    while True:
        s = _size(t.left)
        if i <= s:
            t = t.left
        elif i == s + 1:
            return t.label
        else:
            i -= s + 1
            t = t.right


def _set(m: Monoid, t: Node, i: int, label) -> Node:
    s = _size(t.left)
    if i <= s:
        return _node(m, _set(m, t.left, i, label), t.label, t.right)
    if i == s + 1:
        return _node(m, t.left, label, t.right)
    return _node(m, t.left, t.label, _set(m, t.right, i - s - 1, label))


def _join_right(m: Monoid, tl: Node, k, tr: Optional[Node]) -> Node:
    l, k2, c = tl.left, tl.label, tl.right
    if _height(c) <= _height(tr) + 1:
        if max(_height(c), _height(tr)) + 1 <= _height(l) + 1:
            return _node(m, l, k2, _node(m, c, k, tr))
        # double rotation of l, k2, node(c, k, tr); c is one taller than tr here
        return _node(m, _node(m, l, k2, c.left), c.label, _node(m, c.right, k, tr))
    t2 = _join_right(m, c, k, tr)
    if t2.height <= _height(l) + 1:
        return _node(m, l, k2, t2)
    return _node(m, _node(m, l, k2, t2.left), t2.label, t2.right)


def _join_left(m: Monoid, tl: Optional[Node], k, tr: Node) -> Node:
    c, k2, r = tr.left, tr.label, tr.right
    if _height(c) <= _height(tl) + 1:
        if max(_height(c), _height(tl)) + 1 <= _height(r) + 1:
            return _node(m, _node(m, tl, k, c), k2, r)
        return _node(m, _node(m, tl, k, c.left), c.label, _node(m, c.right, k2, r))
    t2 = _join_left(m, tl, k, c)
    if t2.height <= _height(r) + 1:
        return _node(m, t2, k2, r)
    return _node(m, t2.left, t2.label, _node(m, t2.right, k2, r))


def _join(m: Monoid, tl: Optional[Node], k, tr: Optional[Node]) -> Node:
    hl, hr = _height(tl), _height(tr)
    if hl > hr + 1:
        return _join_right(m, tl, k, tr)
    if hr > hl + 1:
        return _join_left(m, tl, k, tr)
    return _node(m, tl, k, tr)


def _split(m: Monoid, t: Node, i: int):
    s = _size(t.left)
    if i == s + 1:
        return t.left, t.label, t.right
    if i <= s:
        ll, g, lr = _split(m, t.left, i)
        return ll, g, _join(m, lr, t.label, t.right)
    rl, g, rr = _split(m, t.right, i - s - 1)
    return _join(m, t.left, t.label, rl), g, rr


def _split_at(m: Monoid, t: Optional[Node], i: int):
    # First i elements and the rest; no middle element is taken out.
    if t is None:
        return None, None
    s = _size(t.left)
    if i <= s:
        ll, lr = _split_at(m, t.left, i)
        return ll, _join(m, lr, t.label, t.right)
    rl, rr = _split_at(m, t.right, i - s - 1)
    return _join(m, t.left, t.label, rl), rr


def _split_last(m: Monoid, t: Node):
    if t.right is None:
        return t.left, t.label
    rest, g = _split_last(m, t.right)
    return _join(m, t.left, t.label, rest), g


def _split_first(m: Monoid, t: Node):
    if t.left is None:
        return t.label, t.right
    g, rest = _split_first(m, t.left)
    return g, _join(m, rest, t.label, t.right)


def _iter(t: Optional[Node]) -> Iterator:
    stack: List[Node] = []
    while stack or t is not None:
        if t is not None:
            stack.append(t)
            t = t.left
        else:
            t = stack.pop()
            yield t.label
            t = t.right


class ProductTree:
    """A persistent sequence of labels with its monoid product kept at the root."""

    __slots__ = ("monoid", "root")

    def __init__(self, monoid: Monoid, root: Optional[Node] = None):
        self.monoid = monoid
        self.root = root

    @classmethod
    def init(cls, monoid: Monoid, labels: Sequence) -> "ProductTree":
        labels = list(labels)
        return cls(monoid, _build(monoid, labels, 0, len(labels)))

    @classmethod
    def empty(cls, monoid: Monoid) -> "ProductTree":
        return cls(monoid)

    @classmethod
    def leaf(cls, monoid: Monoid, label) -> "ProductTree":
        return cls(monoid, _node(monoid, None, label, None))

    def __len__(self) -> int:
        return _size(self.root)

    @property
    def size(self) -> int:
        return _size(self.root)

    @property
    def height(self) -> int:
        return _height(self.root)

    def out(self):
        return self.root.prod if self.root is not None else self.monoid.identity

    def _check_position(self, i: int) -> None:
        if not 1 <= i <= self.size:
            raise IndexError(f"position {i} outside 1..{self.size}")

    def get(self, i: int):
        self._check_position(i)
        return _get(self.root, i)

    def set(self, i: int, label) -> "ProductTree":
        self._check_position(i)
        self.monoid.stats.sets += 1
        return ProductTree(self.monoid, _set(self.monoid, self.root, i, label))

    def _same_monoid(self, other: "ProductTree") -> None:
        if other.monoid is not self.monoid:
            raise ValueError("cannot combine trees over different monoids")

    @staticmethod
    def join(left: "ProductTree", mid, right: "ProductTree") -> "ProductTree":
        """Tree for ``seq(left) + [mid] + seq(right)``."""
        left._same_monoid(right)
        return ProductTree(left.monoid, _join(left.monoid, left.root, mid, right.root))

    def split(self, i: int) -> Tuple["ProductTree", Any, "ProductTree"]:
        """Return the trees before and after position ``i`` and the label at ``i``."""
        self._check_position(i)
        l, g, r = _split(self.monoid, self.root, i)
        return ProductTree(self.monoid, l), g, ProductTree(self.monoid, r)

    def split_inclusive(self, i: int) -> Tuple["ProductTree", "ProductTree"]:
        """Prefix of positions ``1..i`` and the rest; ``i = 0`` gives an empty prefix."""
        if not 0 <= i <= self.size:
            raise IndexError(f"split point {i} outside 0..{self.size}")
        l, r = _split_at(self.monoid, self.root, i)
        return ProductTree(self.monoid, l), ProductTree(self.monoid, r)

    def concat(self, other: "ProductTree") -> "ProductTree":
        """Tree for ``seq(self) + seq(other)``.

        One boundary element is taken out of the shorter tree and used as the
        middle of a join, so the cost is bounded by the taller height.
        """
        self._same_monoid(other)
        m, a, b = self.monoid, self.root, other.root
        if a is None:
            return other
        if b is None:
            return self
        if a.height <= b.height:
            rest, g = _split_last(m, a)
            return ProductTree(m, _join(m, rest, g, b))
        g, rest = _split_first(m, b)
        return ProductTree(m, _join(m, a, g, rest))

    def __iter__(self) -> Iterator:
        return _iter(self.root)

    def labels(self) -> list:
        return list(_iter(self.root))

    def dump(self) -> str:
        """Indented outline with id/size/height per node, ids in pre-order."""
        lines: List[str] = []
        counter = [0]

        def walk(t: Optional[Node], depth: int, tag: str) -> None:
            if t is None:
                return
            counter[0] += 1
            label = t.label[0] if isinstance(t.label, tuple) else t.label
            lines.append(f"{'  ' * depth}{tag}v{counter[0]} label={label} "
                         f"size={t.size} height={t.height}")
            walk(t.left, depth + 1, "L ")
            walk(t.right, depth + 1, "R ")

        walk(self.root, 0, "")
        return "\n".join(lines)


def check_invariants(tree: ProductTree, eq: Callable[[Any, Any], bool] = lambda x, y: x == y) -> List[str]:
    """Recompute every annotation from scratch; return a list of violations."""
    m = tree.monoid
    problems: List[str] = []

    def walk(t: Optional[Node]):
        if t is None:
            return 0, 0, m.identity
        ls, lh, lp = walk(t.left)
        rs, rh, rp = walk(t.right)
        size, height = ls + rs + 1, max(lh, rh) + 1
        prod = m.multiply(m.multiply(lp, m.element(t.label)), rp)
        if t.size != size:
            problems.append(f"size {t.size} != {size}")
        if t.height != height:
            problems.append(f"height {t.height} != {height}")
        if abs(lh - rh) > 1:
            problems.append(f"AVL violated: heights {lh} and {rh}")
        if not eq(t.prod, prod):
            problems.append("stale product")
        return size, height, prod

    walk(tree.root)
    return problems
