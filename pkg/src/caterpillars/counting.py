"""Exact big-integer coefficient engines.

``f_minus(k, n)`` counts ordered trees with ``n`` leaves whose biggest
caterpillar subtree has at most ``k`` leaves; ``w_minus(k, n)`` is the same
count for unordered trees.  Both are computed from the quadratic
recurrences satisfied by their generating functions (a leaf, or a root over
two admissible subtrees, minus the caterpillars of size ``k + 1``), with one
memoised coefficient list per ``(family, k)``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Literal

from . import _kernels
from .trees import enumerate_ordered, enumerate_unordered, gamma

Family = Literal["ordered", "unordered"]

__all__ = [
    "CoefficientTable",
    "catalan",
    "f_minus",
    "f_plus",
    "f_exact",
    "wedderburn",
    "w_minus",
    "w_exact",
    "catalan_deficit",
    "expected_gamma_exact",
    "gamma_histogram_oracle",
    "coefficient_table",
]


@dataclass(frozen=True)
class CoefficientTable:
    """Coefficients ``coeffs[n - 1]`` for ``n = 1..len(coeffs)``.

    ``k is None`` stands for the unconstrained family (no cap on gamma).
    """

    family: Family
    k: int | None
    coeffs: tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        if n < 1:
            raise IndexError(n)
        return self.coeffs[n - 1]

    def __len__(self):
        return len(self.coeffs)


class _Engine:
    """Grow-on-demand coefficient lists, one per cap ``k``."""

    def __init__(self, step):
        self._step = step
        self._tables: dict[int | None, list[int]] = {}
        self._lock = threading.Lock()

    def get(self, k, n):
        table = self._tables.get(k)
        if table is not None and len(table) > n:
            return table[n]
        with self._lock:
            table = self._tables.setdefault(k, [0])
            while len(table) <= n:
                table.append(self._step(table, len(table), k))
            return table[n]


def _ordered_step(f, n, k):
    half = n // 2
    s = 2 * sum(f[i] * f[n - i] for i in range(1, (n + 1) // 2))
    if n % 2 == 0:
        s += f[half] * f[half]
    if n == 1:
        s += 1
    if k is not None and n == k + 1:
        s -= 1 << (k - 1)
    return s


def _unordered_step(w, n, k):
    # half of the convolution plus half of W(x^2), kept in the integers:
    # pairs of distinct subtrees once, equal-size pairs as multisets
    s = sum(w[i] * w[n - i] for i in range(1, (n + 1) // 2))
    if n % 2 == 0:
        half = w[n // 2]
        s += half * (half + 1) // 2
    if n == 1:
        s += 1
    if k is not None and n == k + 1:
        s -= 1
    return s


_ORDERED = _Engine(_ordered_step)
_UNORDERED = _Engine(_unordered_step)


def _check(k, n):
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if k is not None and k < 0:
        raise ValueError(f"k must be non-negative, got {k}")


def catalan(n: int) -> int:
    """Number of ordered binary trees with ``n`` leaves: 1, 1, 2, 5, 14, ..."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return comb(2 * n - 2, n - 1) // n


def f_minus(k: int | None, n: int) -> int:
    """Ordered trees with ``n`` leaves and gamma at most ``k``.

    ``k = 0`` gives 0 and ``k = None`` the unconstrained (Catalan) count.
    """
    _check(k, n)
    if k == 0:
        return 0
    if k is None or k >= n:
        return catalan(n)
    return _ORDERED.get(k, n)


def f_plus(k: int, n: int) -> int:
    """Ordered trees with ``n`` leaves and gamma at least ``k``."""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    return catalan(n) - f_minus(k - 1, n)


def f_exact(k: int, n: int) -> int:
    """Ordered trees with ``n`` leaves and gamma exactly ``k``."""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    return f_minus(k, n) - f_minus(k - 1, n)


def wedderburn(n: int) -> int:
    """Number of unordered binary trees with ``n`` leaves: 1, 1, 1, 2, 3, 6, 11, ..."""
    return w_minus(None, n)


def w_minus(k: int | None, n: int) -> int:
    """Unordered trees with ``n`` leaves and gamma at most ``k``."""
    _check(k, n)
    if k == 0:
        return 0
    if k is not None and k >= n:
        k = None
    return _UNORDERED.get(k, n)


def w_exact(k: int, n: int) -> int:
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    return w_minus(k, n) - w_minus(k - 1, n)


def _central_series(j: int, m: int) -> int:
    """``[x^m] (1 - 4x)^(1/2 - j)`` for ``j >= 1``."""
    r0 = j - 1
    r1 = j + m - 1
    return comb(2 * r1, r1) * comb(r1, m) // comb(2 * r0, r0)


def catalan_deficit(k: int, n: int) -> int:
    """``catalan(n) - f_minus(k, n)`` from the binomial expansion of the
    closed form ``(1 - sqrt(1 - 4x + 2^(k+1) x^(k+1))) / 2``.

    Writing the radicand as ``(1 - 4x)(1 + 2^(k+1) x^(k+1) / (1 - 4x))`` and
    expanding the second square root gives a finite sum of ``n / (k + 1)``
    integer terms, so no coefficient table is needed.  This is the fast path
    behind :func:`expected_gamma_exact`.
    """
    _check(k, n)
    if k == 0:
        return catalan(n)
    total = 0
    j = 1
    while j * (k + 1) <= n:
        term = (comb(2 * j - 2, j - 1) // j) << ((k - 1) * j)
        term *= _central_series(j, n - j * (k + 1))
        total += term if j % 2 else -term
        j += 1
    return total


def expected_gamma_exact(n: int) -> Fraction:
    """Mean of gamma over the ``catalan(n)`` ordered trees with ``n`` leaves.

    Uses ``E = 1 + sum_{k=1}^{n-1} (C_n - f_minus(k, n)) / C_n``; the terms
    vanish for ``k >= n``.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    total = sum(catalan_deficit(k, n) for k in range(1, n))
    return 1 + Fraction(total, catalan(n))


def gamma_histogram_oracle(n: int, family: Family = "ordered", method: str = "kernel") -> dict[int, int]:
    """Brute-force distribution of gamma over all trees of size ``n``.

    Keys run over every attainable value (1 for ``n == 1``, else ``2..n``).
    ``method="kernel"`` walks pre-order codes in the hot kernel (ordered
    family only); ``method="trees"`` builds each tree object.
    """
    if family == "ordered":
        if method == "kernel":
            enumerate_ordered(n)  # cap check only
            hist = _kernels.gamma_histogram(n)
            counts = {g: hist[g] for g in range(len(hist))}
        else:
            counts = _tally(enumerate_ordered(n))
    elif family == "unordered":
        counts = _tally(enumerate_unordered(n))
    else:
        raise ValueError(f"unknown family {family!r}")
    lo = 1 if n == 1 else 2
    return {g: counts.get(g, 0) for g in range(lo, n + 1)}


def _tally(trees):
    counts: dict[int, int] = {}
    for t in trees:
        g = gamma(t)
        counts[g] = counts.get(g, 0) + 1
    return counts


def coefficient_table(family: Family, k: int | None, n_max: int, which: str = "minus") -> CoefficientTable:
    """Coefficients for ``n = 1..n_max``; ``which`` is ``minus``, ``plus`` or ``exact``."""
    if family == "ordered":
        fn = {"minus": f_minus, "plus": f_plus, "exact": f_exact}[which]
    elif family == "unordered":
        fn = {"minus": w_minus, "exact": w_exact, "plus": _w_plus}[which]
    else:
        raise ValueError(f"unknown family {family!r}")
    if k is None and which != "minus":
        raise ValueError("plus/exact counts need a finite k")
    return CoefficientTable(family, k, tuple(fn(k, n) for n in range(1, n_max + 1)))


def _w_plus(k, n):
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    return wedderburn(n) - w_minus(k - 1, n)
