"""The bijection between ordered trees and 132-avoiding permutations, and the
window extraction that reads caterpillar subtrees off a permutation.

``phi`` labels the internal nodes of a tree with ``n, n-1, ..., 1`` in
pre-order (root first, left subtree before right) and reads the labels in
symmetric order.  The subtree under the node labelled ``v`` then occupies
exactly the block of entries ``<= v`` around ``v``, which is what
:func:`r_tilde` extracts.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations as _all_perms
from typing import Iterable, Iterator, Sequence

from . import _kernels
from .errors import CapExceeded, IndexOutOfRange, NotAv132, SizeTooSmall
from .trees import LEAF, Tree, enumerate_ordered, enumeration_cap

__all__ = [
    "Permutation",
    "ExtractionFamily",
    "phi",
    "phi_inverse",
    "preorder_labels",
    "contains_pattern",
    "find_pattern",
    "r_set",
    "r_tilde",
    "extraction_family",
    "gamma_from_perm",
    "enumerate_av132",
    "count_all_rtilde_contain_231",
    "standardize",
    "valleys",
    "peaks",
]

DEFAULT_AV132_CAP = 12
_FILTER_LIMIT = 8


class Permutation(tuple):
    """A permutation of ``1..n`` in one-line notation."""

    def __new__(cls, entries: Iterable[int] = ()):
        self = super().__new__(cls, (int(x) for x in entries))
        if sorted(self) != list(range(1, len(self) + 1)):
            raise ValueError(f"not a permutation of 1..{len(self)}: {tuple(self)}")
        return self

    @classmethod
    def parse(cls, text: str) -> Permutation:
        """Read space-separated one-line notation, e.g. ``"4 5 3 1 2"``."""
        return cls(text.split())

    def __str__(self):
        return " ".join(map(str, self))

    def __repr__(self):
        return f"Permutation({str(self)!r})"


@dataclass(frozen=True)
class ExtractionFamily:
    """One extracted window per position of ``source`` (positions are 1-based)."""

    source: Permutation
    members: tuple[tuple[int, Permutation], ...]

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)


def standardize(seq: Sequence[int]) -> Permutation:
    """Renumber distinct integers to ``1..m`` keeping their relative order."""
    rank = {v: r for r, v in enumerate(sorted(seq), start=1)}
    return Permutation(rank[v] for v in seq)


def preorder_labels(t: Tree) -> Iterator[tuple[int, Tree]]:
    """Yield ``(label, subtree)`` for every internal node, in pre-order."""
    if t.left is None:
        return
    stack = [(t, t.size - 1)]
    while stack:
        node, label = stack.pop()
        yield label, node
        right, left = node.right, node.left
        if right.left is not None:
            stack.append((right, label - left.size))
        if left.left is not None:
            stack.append((left, label - 1))


def phi(t: Tree) -> Permutation:
    """Map a tree with ``n + 1`` leaves to a 132-avoiding permutation of size ``n``."""
    if t.left is None:
        raise SizeTooSmall("phi needs a tree with at least two leaves")
    # symmetric-order walk; the right child of a node labelled v is labelled
    # v - size(left) because the left subtree holds size(left) - 1 labels
    out = []
    stack = []
    node, label = t, t.size - 1
    while stack or node is not None:
        while node is not None and node.left is not None:
            stack.append((node, label))
            node, label = node.left, label - 1
        node, label = stack.pop()
        out.append(label)
        right = node.right
        node, label = (right, label - node.left.size) if right.left is not None else (None, 0)
    return Permutation(out)


def find_pattern(p: Sequence[int], pattern: Sequence[int]) -> tuple[int, ...] | None:
    """Positions (0-based) of one occurrence of ``pattern`` in ``p``, or ``None``.

    Backtracking over increasing positions; each new entry must sit in the
    same relative order to all chosen entries as in the pattern.
    """
    k = len(pattern)
    if k == 0:
        return ()
    n = len(p)
    chosen: list[int] = []

    def fits(pos):
        j = len(chosen)
        for a, prev in enumerate(chosen):
            if (p[prev] < p[pos]) != (pattern[a] < pattern[j]):
                return False
        return True

    def extend(start):
        if len(chosen) == k:
            return True
        for pos in range(start, n - (k - len(chosen)) + 1):
            if fits(pos):
                chosen.append(pos)
                if extend(pos + 1):
                    return True
                chosen.pop()
        return False

    return tuple(chosen) if extend(0) else None


def contains_pattern(p: Sequence[int], pattern: Sequence[int]) -> bool:
    """True when some subsequence of ``p`` is order-isomorphic to ``pattern``."""
    key = tuple(standardize(pattern)) if pattern else ()
    if key == (1, 3, 2):
        return _kernels.contains_132(p)
    if key == (2, 3, 1):
        return _kernels.contains_231(p)
    return find_pattern(p, key) is not None


def _require_av132(p):
    if _kernels.contains_132(p):
        witness = find_pattern(p, (1, 3, 2))
        positions = tuple(i + 1 for i in witness)
        values = tuple(p[i] for i in witness)
        raise NotAv132(
            f"{Permutation(p)} contains 132 at positions {positions} (values {values})",
            witness=positions,
        )


def phi_inverse(p: Sequence[int]) -> Tree:
    """Inverse of :func:`phi`: the decreasing binary tree of ``p``, leaves added."""
    p = Permutation(p)
    if not p:
        raise SizeTooSmall("phi_inverse needs a non-empty permutation")
    _require_av132(p)
    n = len(p)
    # max-Cartesian tree with a monotone stack
    left = [-1] * n
    right = [-1] * n
    stack: list[int] = []
    for i in range(n):
        last = -1
        while stack and p[stack[-1]] < p[i]:
            last = stack.pop()
        left[i] = last
        if stack:
            right[stack[-1]] = i
        stack.append(i)
    root = stack[0]
    built: dict[int, Tree] = {}
    todo = [(root, False)]
    while todo:
        i, ready = todo.pop()
        if ready:
            l = built.pop(left[i]) if left[i] >= 0 else LEAF
            r = built.pop(right[i]) if right[i] >= 0 else LEAF
            built[i] = Tree(l, r)
            continue
        todo.append((i, True))
        for child in (right[i], left[i]):
            if child >= 0:
                todo.append((child, False))
    return built[root]


def _position(p, i):
    if not 1 <= i <= len(p):
        raise IndexOutOfRange(f"position {i} outside 1..{len(p)}")
    return i - 1


def r_set(p: Sequence[int], i: int) -> tuple[int, ...]:
    """Entries ``<= p_i`` reachable from position ``i`` (1-based) without
    passing an entry larger than ``p_i``, in their original order."""
    lo, hi = _kernels.rtilde_window(p, _position(p, i))
    return tuple(p[lo:hi + 1])


def r_tilde(p: Sequence[int], i: int) -> Permutation:
    """The window :func:`r_set` renumbered to a permutation of ``1..m``."""
    return standardize(r_set(p, i))


def extraction_family(p: Sequence[int]) -> ExtractionFamily:
    p = Permutation(p)
    return ExtractionFamily(p, tuple((i, r_tilde(p, i)) for i in range(1, len(p) + 1)))


def gamma_from_perm(p: Sequence[int]) -> int:
    """Size of the largest 231-avoiding window of a 132-avoiding permutation.

    Equals ``gamma(phi_inverse(p)) - 1``.
    """
    p = Permutation(p)
    _require_av132(p)
    return _kernels.rtilde_summary(p)[0]


def enumerate_av132(n: int, cap: int | None = None) -> Iterator[Permutation]:
    """Every 132-avoiding permutation of size ``n``.

    Small sizes filter all ``n!`` permutations; larger ones push the ordered
    trees with ``n + 1`` leaves through :func:`phi`.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    limit = enumeration_cap(DEFAULT_AV132_CAP) if cap is None else cap
    if n > limit:
        raise CapExceeded(f"enumerating Av_{n}(132) exceeds cap {limit}")
    if n <= _FILTER_LIMIT:
        contains = _kernels.contains_132
        return (Permutation(q) for q in _all_perms(range(1, n + 1)) if not contains(q))
    return (phi(t) for t in enumerate_ordered(n + 1, cap=max(limit + 1, n + 1)))


def count_all_rtilde_contain_231(n: int, cap: int | None = None) -> int:
    """Number of ``p`` in Av_n(132) whose windows of size > 1 all contain 231."""
    summary = _kernels.rtilde_summary
    return sum(1 for p in enumerate_av132(n, cap) if summary(p)[1])


def valleys(p: Sequence[int]) -> list[int]:
    """1-based positions whose existing neighbours are all larger."""
    n = len(p)
    return [
        i + 1
        for i in range(n)
        if (i == 0 or p[i - 1] > p[i]) and (i == n - 1 or p[i + 1] > p[i])
    ]


def peaks(p: Sequence[int]) -> list[int]:
    """1-based interior positions larger than both neighbours."""
    return [i + 1 for i in range(1, len(p) - 1) if p[i - 1] < p[i] > p[i + 1]]
