"""Exact counting matrices over the naturals.

Matrices are square, sparse (CSR) and exact: every stored entry is split
into little-endian 32-bit limbs held in a ``uint64`` array, so products never
overflow no matter how large the run counts grow.  Most matrices fit in a
single limb and the kernel then runs at fixed-width speed; wider entries are
promoted automatically.
"""
from __future__ import annotations

from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from numba import njit

from .automaton import Mapping, VsetAutomaton
from .errors import MsoAccessError

LIMB_BITS = 32
_LIMB_MASK = (1 << LIMB_BITS) - 1


@njit(cache=True)
def _spgemm(ap, ai, al, bp, bi, bl, n):
    ka = al.shape[1]
    kb = bl.shape[1]
    kc = ka + kb + 1
    mask = np.uint64(0xFFFFFFFF)
    shift = np.uint64(32)

    marker = np.full(n, -1, np.int64)
    cp = np.zeros(n + 1, np.int64)
    for i in range(n):
        cnt = 0
        for kk in range(ap[i], ap[i + 1]):
            k = ai[kk]
            for jj in range(bp[k], bp[k + 1]):
                j = bi[jj]
                if marker[j] != i:
                    marker[j] = i
                    cnt += 1
        cp[i + 1] = cp[i] + cnt

    nnz = cp[n]
    ci = np.empty(nnz, np.int64)
    cl = np.zeros((nnz, kc), np.uint64)
    acc = np.zeros((n, kc), np.uint64)
    touched = np.empty(n, np.int64)
    marker[:] = -1
    for i in range(n):
        cnt = 0
        for kk in range(ap[i], ap[i + 1]):
            k = ai[kk]
            for jj in range(bp[k], bp[k + 1]):
                j = bi[jj]
                if marker[j] != i:
                    marker[j] = i
                    touched[cnt] = j
                    cnt += 1
                for s in range(ka):
                    x = al[kk, s]
                    if x == 0:
                        continue
                    for t in range(kb):
                        y = bl[jj, t]
                        if y == 0:
                            continue
                        prod = x * y
                        acc[j, s + t] += prod & mask
                        acc[j, s + t + 1] += prod >> shift
        cols = np.sort(touched[:cnt])
        base = cp[i]
        for c in range(cnt):
            j = cols[c]
            ci[base + c] = j
            carry = np.uint64(0)
            for t in range(kc):
                v = acc[j, t] + carry
                cl[base + c, t] = v & mask
                carry = v >> shift
                acc[j, t] = 0
    width = 1
    for e in range(nnz):
        for t in range(kc - 1, width - 1, -1):
            if cl[e, t] != 0:
                width = t + 1
                break
    return cp, ci, cl[:, :width].copy()


class CountMatrix:
    """Immutable square matrix of unbounded non-negative integers."""

    __slots__ = ("dim", "indptr", "indices", "limbs")

    def __init__(self, dim: int, indptr: np.ndarray, indices: np.ndarray, limbs: np.ndarray):
        self.dim = dim
        self.indptr = indptr
        self.indices = indices
        self.limbs = limbs
        for arr in (indptr, indices, limbs):
            arr.flags.writeable = False

    @classmethod
    def from_entries(cls, dim: int, entries: Dict[Tuple[int, int], int]) -> "CountMatrix":
        items = sorted((pq, v) for pq, v in entries.items() if v)
        for (p, q), v in items:
            if v < 0:
                raise ValueError("entries must be non-negative")
            if not (0 <= p < dim and 0 <= q < dim):
                raise ValueError(f"entry {(p, q)} outside a {dim}x{dim} matrix")
        width = max((v.bit_length() for _, v in items), default=1)
        k = max(1, -(-width // LIMB_BITS))
        indptr = np.zeros(dim + 1, np.int64)
        indices = np.empty(len(items), np.int64)
        limbs = np.zeros((len(items), k), np.uint64)
        for n, ((p, q), v) in enumerate(items):
            indptr[p + 1] += 1
            indices[n] = q
            for t in range(k):
                limbs[n, t] = (v >> (LIMB_BITS * t)) & _LIMB_MASK
        np.cumsum(indptr, out=indptr)
        return cls(dim, indptr, indices, limbs)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "CountMatrix":
        dim = len(rows)
        if any(len(r) != dim for r in rows):
            raise ValueError("matrix must be square")
        return cls.from_entries(dim, {(p, q): v for p, r in enumerate(rows)
                                      for q, v in enumerate(r) if v})

    @classmethod
    def identity(cls, dim: int) -> "CountMatrix":
        return cls(dim, np.arange(dim + 1, dtype=np.int64), np.arange(dim, dtype=np.int64),
                   np.ones((dim, 1), np.uint64))

    @classmethod
    def zeros(cls, dim: int) -> "CountMatrix":
        return cls.from_entries(dim, {})

    @property
    def nnz(self) -> int:
        return len(self.indices)

    def _value(self, n: int) -> int:
        v = 0
        for t, limb in enumerate(self.limbs[n].tolist()):
            v |= limb << (LIMB_BITS * t)
        return v

    def row(self, p: int) -> Dict[int, int]:
        lo, hi = int(self.indptr[p]), int(self.indptr[p + 1])
        return {int(self.indices[n]): self._value(n) for n in range(lo, hi)}

    def entries(self) -> Iterator[Tuple[int, int, int]]:
        for p in range(self.dim):
            for q, v in self.row(p).items():
                yield p, q, v

    def __getitem__(self, pq: Tuple[int, int]) -> int:
        p, q = pq
        lo, hi = int(self.indptr[p]), int(self.indptr[p + 1])
        n = lo + int(np.searchsorted(self.indices[lo:hi], q))
        if n < hi and self.indices[n] == q:
            return self._value(n)
        return 0

    def to_lists(self) -> List[List[int]]:
        out = [[0] * self.dim for _ in range(self.dim)]
        for p, q, v in self.entries():
            out[p][q] = v
        return out

    def max_entry(self) -> int:
        return max((v for _, _, v in self.entries()), default=0)

    def __matmul__(self, other: "CountMatrix") -> "CountMatrix":
        return mat_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CountMatrix):
            return NotImplemented
        if self.dim != other.dim or self.nnz != other.nnz:
            return False
        if not (np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices)):
            return False
        k = max(self.limbs.shape[1], other.limbs.shape[1])
        return np.array_equal(_pad(self.limbs, k), _pad(other.limbs, k))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if self.dim <= 8:
            return f"CountMatrix({self.to_lists()})"
        return f"CountMatrix(dim={self.dim}, nnz={self.nnz})"


def _pad(limbs: np.ndarray, k: int) -> np.ndarray:
    if limbs.shape[1] == k:
        return limbs
    out = np.zeros((limbs.shape[0], k), np.uint64)
    out[:, :limbs.shape[1]] = limbs
    return out


def mat_mul(a: CountMatrix, b: CountMatrix) -> CountMatrix:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    cp, ci, cl = _spgemm(a.indptr, a.indices, a.limbs, b.indptr, b.indices, b.limbs, a.dim)
    return CountMatrix(a.dim, cp, ci, cl)


def letter_matrix(a: VsetAutomaton, symbol: str) -> CountMatrix:
    """Adjacency of ``symbol``-transitions, ignoring variable annotations."""
    if symbol not in a.alphabet:
        raise MsoAccessError(f"symbol {symbol!r} is not in the alphabet")
    return CountMatrix.from_entries(
        a.num_states, {(t.source, t.target): 1 for t in a.transitions if t.symbol == symbol})


def constrained_matrix(a: VsetAutomaton, symbol: str, position: int, tau: Mapping,
                       current: Optional[str]) -> CountMatrix:
    """Letter matrix restricted to transitions consistent with ``tau`` at ``position``.

    A transition ``(p, symbol, S, q)`` survives iff every variable that ``tau``
    pins to ``position`` (other than ``current``) is in ``S``, and, when
    ``tau[current] == position``, the variable ``current`` is already bound on
    arriving in ``q``.  ``current=None`` drops the second condition.
    """
    if symbol not in a.alphabet:
        raise MsoAccessError(f"symbol {symbol!r} is not in the alphabet")
    if position < 1:
        raise MsoAccessError("positions are 1-based")
    if current is not None and current not in tau:
        raise MsoAccessError(f"current variable {current!r} is not bound by tau")
    if a.var_sets is None:
        raise MsoAccessError("automaton has not been validated")
    pinned = frozenset(v for v, j in tau.items() if j == position and v != current)
    check_current = current is not None and tau[current] == position
    entries = {}
    for t in a.transitions:
        if t.symbol != symbol or not pinned <= t.vars:
            continue
        if check_current and current not in a.var_sets[t.target]:
            continue
        entries[(t.source, t.target)] = 1
    return CountMatrix.from_entries(a.num_states, entries)


def count_from_product(a: VsetAutomaton, m: CountMatrix) -> int:
    """Initial row vector times ``m`` times the final column vector."""
    if m.dim != a.num_states:
        raise ValueError(f"dimension mismatch: {m.dim} vs {a.num_states}")
    row = m.row(a.initial)
    return sum(v for q, v in row.items() if q in a.finals)


def product(matrices: Iterable[CountMatrix], dim: int) -> CountMatrix:
    """Left-to-right fold; the identity for an empty sequence."""
    out = CountMatrix.identity(dim)
    for m in matrices:
        out = mat_mul(out, m)
    return out
