"""Full binary trees, the caterpillar predicate, the gamma statistic and the
Colless index.

Trees are immutable.  Each node caches its leaf count, whether it is a
caterpillar, its gamma value and the sum of child-size differences below it,
all computed bottom-up at construction, so none of the statistics recurse and
very deep trees (long combs parsed from Newick files) are safe.
"""

from __future__ import annotations

import os
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterator, Sequence

from .errors import CapExceeded, IndexOutOfRange, SizeTooSmall

__all__ = [
    "Tree",
    "UnorderedTree",
    "LEAF",
    "ULEAF",
    "cherry",
    "comb",
    "balanced",
    "size",
    "is_caterpillar",
    "gamma",
    "colless_index",
    "canonicalize",
    "mirror",
    "enumerate_ordered",
    "enumerate_unordered",
    "enumeration_cap",
    "nodes",
    "subtree",
    "delta",
    "to_code",
    "from_code",
]

DEFAULT_ORDERED_CAP = 18
DEFAULT_UNORDERED_CAP = 20
CAP_ENV = "CATERPILLAR_MAX_N"


class Tree:
    """An ordered full binary tree: either a leaf or a node with two subtrees."""

    __slots__ = ("left", "right", "size", "caterpillar", "gamma", "delta_sum", "_hash")

    def __init__(self, left: Tree | None = None, right: Tree | None = None):
        if (left is None) != (right is None):
            raise ValueError("a node needs either zero or two children")
        put = object.__setattr__
        if left is None:
            put(self, "left", None)
            put(self, "right", None)
            put(self, "size", 1)
            put(self, "caterpillar", True)
            put(self, "gamma", 1)
            put(self, "delta_sum", 0)
            put(self, "_hash", hash((type(self).__name__, 1)))
            return
        left, right = self._arrange(left, right)
        n = left.size + right.size
        cat = (left.left is None or right.left is None) and left.caterpillar and right.caterpillar
        put(self, "left", left)
        put(self, "right", right)
        put(self, "size", n)
        put(self, "caterpillar", cat)
        put(self, "gamma", n if cat else max(left.gamma, right.gamma))
        put(self, "delta_sum", abs(left.size - right.size) + left.delta_sum + right.delta_sum)
        put(self, "_hash", hash((left._hash, right._hash)))

    @staticmethod
    def _arrange(left, right):
        return left, right

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            if a._hash != b._hash or a.size != b.size:
                return False
            if a.left is None:
                continue
            stack.append((a.right, b.right))
            stack.append((a.left, b.left))
        return True

    def __repr__(self):
        from .newick import to_newick

        return f"{type(self).__name__}({to_newick(self, names=[''] * self.size)!r})"


class UnorderedTree(Tree):
    """A binary tree up to sibling swaps, stored in canonical form.

    At every node the smaller child comes first under the order
    ``key(t) = (size, key(first), key(second))`` with leaves smallest, so two
    unordered trees are equal exactly when their canonical forms coincide.
    """

    __slots__ = ()

    @staticmethod
    def _arrange(left, right):
        if not isinstance(left, UnorderedTree) or not isinstance(right, UnorderedTree):
            raise TypeError("children of an UnorderedTree must be UnorderedTree")
        if canonical_cmp(left, right) > 0:
            return right, left
        return left, right

    def __lt__(self, other):
        return canonical_cmp(self, other) < 0

    def __le__(self, other):
        return canonical_cmp(self, other) <= 0


def canonical_cmp(a: Tree, b: Tree) -> int:
    """Three-way comparison under the canonical order (size first, then children)."""
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x is y:
            continue
        if x.size != y.size:
            return -1 if x.size < y.size else 1
        if x.left is None:
            continue
        stack.append((x.right, y.right))
        stack.append((x.left, y.left))
    return 0


LEAF = Tree()
ULEAF = UnorderedTree()


def cherry(unordered: bool = False) -> Tree:
    leaf = ULEAF if unordered else LEAF
    return type(leaf)(leaf, leaf)


def comb(n: int, side: str = "left") -> Tree:
    """The comb caterpillar with ``n`` leaves, growing on ``side``."""
    if n < 1:
        raise ValueError("n must be positive")
    t = LEAF
    for _ in range(n - 1):
        t = Tree(t, LEAF) if side == "left" else Tree(LEAF, t)
    return t


def balanced(depth: int) -> Tree:
    """The complete balanced tree with ``2**depth`` leaves."""
    t = LEAF
    for _ in range(depth):
        t = Tree(t, t)
    return t


def size(t: Tree) -> int:
    return t.size


def is_caterpillar(t: Tree) -> bool:
    """True when every internal node has at least one leaf child."""
    return t.caterpillar


def gamma(t: Tree) -> int:
    """Leaf count of the largest caterpillar rooted subtree of ``t``."""
    return t.gamma


def colless_index(t: Tree) -> Fraction:
    """Normalised Colless index, ``2 * sum|L - R| / ((n-1)(n-2))``.

    Equals 1 exactly for caterpillars and 0 for perfectly balanced trees.
    """
    n = t.size
    if n <= 2:
        raise SizeTooSmall(f"Colless index needs more than 2 leaves, got {n}")
    return Fraction(2 * t.delta_sum, (n - 1) * (n - 2))


def mirror(t: Tree) -> Tree:
    """Swap the children of every node."""
    return _rebuild(t, lambda l, r: Tree(r, l))


def canonicalize(t: Tree) -> UnorderedTree:
    if isinstance(t, UnorderedTree):
        return t
    return _rebuild(t, UnorderedTree, ULEAF)


def _rebuild(t, make_node, leaf=LEAF):
    # post-order without recursion
    out = []
    stack = [(t, False)]
    while stack:
        node, done = stack.pop()
        if node.left is None:
            out.append(leaf)
        elif done:
            r = out.pop()
            l = out.pop()
            out.append(make_node(l, r))
        else:
            stack.append((node, True))
            stack.append((node.right, False))
            stack.append((node.left, False))
    return out[0]


# -- node addressing -------------------------------------------------------


def nodes(t: Tree) -> Iterator[tuple[tuple[str, ...], Tree]]:
    """Yield ``(path, subtree)`` in pre-order; a path is a tuple of ``'L'``/``'R'``."""
    stack = [((), t)]
    while stack:
        path, node = stack.pop()
        yield path, node
        if node.left is not None:
            stack.append((path + ("R",), node.right))
            stack.append((path + ("L",), node.left))


def subtree(t: Tree, path: Sequence[str]) -> Tree:
    node = t
    for step in path:
        if node.left is None:
            raise IndexOutOfRange(f"path {''.join(path)!r} runs past a leaf")
        if step == "L":
            node = node.left
        elif step == "R":
            node = node.right
        else:
            raise ValueError(f"bad path step {step!r}")
    return node


def delta(t: Tree, path: Sequence[str] = ()) -> int:
    """``|size(left) - size(right)|`` at the addressed node, 0 at a leaf."""
    node = subtree(t, path)
    if node.left is None:
        return 0
    return abs(node.left.size - node.right.size)


# -- pre-order codes ---------------------------------------------------------


def to_code(t: Tree) -> bytes:
    """Pre-order code: ``1`` for an internal node, ``0`` for a leaf."""
    out = bytearray()
    stack = [t]
    while stack:
        node = stack.pop()
        if node.left is None:
            out.append(0)
        else:
            out.append(1)
            stack.append(node.right)
            stack.append(node.left)
    return bytes(out)


def from_code(code: Sequence[int], unordered: bool = False) -> Tree:
    leaf = ULEAF if unordered else LEAF
    make = type(leaf)
    stack = []
    for symbol in reversed(code):
        if symbol:
            if len(stack) < 2:
                raise ValueError("invalid pre-order code")
            left = stack.pop()
            right = stack.pop()
            stack.append(make(left, right))
        else:
            stack.append(leaf)
    if len(stack) != 1:
        raise ValueError("invalid pre-order code")
    return stack[0]


# -- exhaustive generators ---------------------------------------------------


def enumeration_cap(default: int) -> int:
    """Enumeration cap, overridable through the ``CATERPILLAR_MAX_N`` variable."""
    raw = os.environ.get(CAP_ENV)
    return int(raw) if raw else default


def _check_cap(n: int, cap: int | None, default: int) -> None:
    if n < 1:
        raise ValueError("n must be positive")
    limit = enumeration_cap(default) if cap is None else cap
    if n > limit:
        raise CapExceeded(f"exhaustive enumeration of size {n} exceeds cap {limit}")


_ORDERED_MEMO: dict[int, tuple[Tree, ...]] = {1: (LEAF,)}
_MEMO_LIMIT = 10


def _ordered(n: int) -> Iterator[Tree]:
    memo = _ORDERED_MEMO.get(n)
    if memo is not None:
        yield from memo
        return
    if n <= _MEMO_LIMIT:
        trees = tuple(Tree(l, r) for i in range(1, n) for l in _ordered(i) for r in _ordered(n - i))
        _ORDERED_MEMO[n] = trees
        yield from trees
        return
    for i in range(1, n):
        right = _ORDERED_MEMO.get(n - i)
        for l in _ordered(i):
            for r in right if right is not None else _ordered(n - i):
                yield Tree(l, r)


def enumerate_ordered(n: int, cap: int | None = None) -> Iterator[Tree]:
    """Yield every ordered tree with ``n`` leaves exactly once (Catalan many)."""
    _check_cap(n, cap, DEFAULT_ORDERED_CAP)
    return _ordered(n)


_UNORDERED_MEMO: dict[int, list[UnorderedTree]] = {1: [ULEAF]}


def _unordered(n: int) -> list[UnorderedTree]:
    if n in _UNORDERED_MEMO:
        return _UNORDERED_MEMO[n]
    out = []
    for i in range(1, n // 2 + 1):
        j = n - i
        if i < j:
            out.extend(UnorderedTree(a, b) for a in _unordered(i) for b in _unordered(j))
        else:
            out.extend(UnorderedTree(a, b) for a, b in combinations_with_replacement(_unordered(i), 2))
    _UNORDERED_MEMO[n] = out
    return out


def enumerate_unordered(n: int, cap: int | None = None) -> Iterator[UnorderedTree]:
    """Yield every unordered tree with ``n`` leaves once (Wedderburn-Etherington many)."""
    _check_cap(n, cap, DEFAULT_UNORDERED_CAP)
    return iter(_unordered(n))
