"""Exact counts over the four tree classes, and exhaustive enumerators.

All counts are Python ints.  Sequence caches (Catalan, Euler zigzag,
Wedderburn-Etherington) grow under a lock, so concurrent readers never see a
partially filled table.
"""
from __future__ import annotations

import itertools
import math
import os
import threading
from collections import Counter
from fractions import Fraction
from typing import Callable

from .errors import ResourceGuardError
from .trees import (
    AnyTree,
    PlaneTree,
    RankedPlaneTree,
    RankedTree,
    TreeShape,
    cherries,
    subtree_internal_sizes,
    symmetry_nodes,
)

FAMILIES = ("ranked_plane", "plane", "ranked", "shape")

DEFAULT_GUARDS = {"ranked_plane": 9, "plane": 12, "ranked": 12, "shape": 12}
GUARD_ENV = "ARBOR_GUARD_N"


def guard_limit(family: str) -> int:
    env = os.environ.get(GUARD_ENV)
    if env:
        return int(env)
    return DEFAULT_GUARDS[family]


def check_guard(n: int, family: str):
    limit = guard_limit(family)
    if n > limit:
        raise ResourceGuardError(
            f"exhaustive {family} enumeration at n={n} exceeds the limit n<={limit} "
            f"(set {GUARD_ENV} to override)"
        )


class _Sequence:
    """Append-only integer table filled by a recurrence in index order."""

    def __init__(self, initial: list[int], step: Callable[[list[int], int], int]):
        self._values = list(initial)
        self._step = step
        self._lock = threading.Lock()

    def __call__(self, n: int) -> int:
        if n < 0:
            raise ValueError(f"index must be nonnegative, got {n}")
        values = self._values
        if n < len(values):
            return values[n]
        with self._lock:
            while len(self._values) <= n:
                self._values.append(self._step(self._values, len(self._values)))
            return self._values[n]


def _catalan_step(c: list[int], n: int) -> int:
    return c[n - 1] * 2 * (2 * n - 1) // (n + 1)


def _zigzag_step(e: list[int], n: int) -> int:
    total = sum(math.comb(n - 1, k) * e[k] * e[n - 1 - k] for k in range(n))
    return total // 2


def _we_step(w: list[int], n: int) -> int:
    # w[0] is a placeholder; w[n] counts shapes with n leaves
    if n % 2:
        return sum(w[i] * w[n - i] for i in range(1, n // 2 + 1))
    m = n // 2
    return sum(w[i] * w[n - i] for i in range(1, m)) + w[m] * (w[m] + 1) // 2


_catalan = _Sequence([1], _catalan_step)
_zigzag = _Sequence([1, 1], _zigzag_step)
_we = _Sequence([0, 1], _we_step)


def catalan(n: int) -> int:
    return _catalan(n)


def euler_zigzag(n: int) -> int:
    """e(n): the number of ranked trees with n + 1 leaves."""
    return _zigzag(n)


def wedderburn_etherington(n: int) -> int:
    """Number of tree shapes with n leaves."""
    if n < 1:
        raise ValueError("a tree has at least one leaf")
    return _we(n)


# -- per-tree coefficients ----------------------------------------------------


def catalan_coefficient(t: AnyTree) -> int:
    """B(t): ranked plane trees projecting onto the plane tree ``t``.

    (n-1)! divided by the product of internal-subtree sizes; it depends only
    on the shape of ``t``.
    """
    sizes = subtree_internal_sizes(t)
    m = len(sizes)
    return math.factorial(m) // math.prod(sizes.values())


def balance_q(t: AnyTree) -> Fraction:
    """Q(t) = B(t)/(n-1)! = 1 / prod of internal-subtree sizes."""
    return Fraction(1, math.prod(subtree_internal_sizes(t).values()))


def _n_leaves(t: AnyTree) -> int:
    return t.n_leaves


def _require_two_leaves(t: AnyTree):
    if _n_leaves(t) < 2:
        raise ValueError("the coefficient is defined for trees with at least two leaves")


def shape_coefficient(t: AnyTree) -> int:
    """C(t) = 2^(n-1-s(t)): plane trees with the shape of ``t``."""
    _require_two_leaves(t)
    return 2 ** (_n_leaves(t) - 1 - symmetry_nodes(t))


def rpt_per_ranked_tree(rt: RankedTree | RankedPlaneTree) -> int:
    """2^(n-1-cherries): ranked plane trees projecting onto a ranked tree."""
    _require_two_leaves(rt)
    return 2 ** (rt.n_leaves - 1 - cherries(rt))


def rpt_per_shape(t: AnyTree) -> int:
    _require_two_leaves(t)
    return catalan_coefficient(t) * shape_coefficient(t)


def ranked_per_shape(t: AnyTree) -> int:
    """Ranked trees with the shape of ``t``: B(t) 2^(cherries - s(t))."""
    _require_two_leaves(t)
    return catalan_coefficient(t) * 2 ** cherries(t) // 2 ** symmetry_nodes(t)


def max_catalan_coefficient(n: int) -> int:
    """Largest B over n-leaf trees (the number of heaps on n-1 elements).

    B = (n-1)!/P with P the product of subtree sizes, so it suffices to
    minimise P, which splits over the root: P(m) = m * min P(l) P(m-1-l).
    """
    if n < 1:
        raise ValueError("a tree has at least one leaf")
    best = [1]
    for m in range(1, n):
        best.append(m * min(best[l] * best[m - 1 - l] for l in range(m)))
    return math.factorial(n - 1) // best[n - 1]


def count_unit_B_plane_trees(n: int) -> int:
    """Number of n-leaf plane trees with Catalan coefficient 1."""
    if n < 2:
        raise ValueError("defined for n >= 2")
    check_guard(n, "plane")
    return sum(1 for t in enumerate_plane(n) if catalan_coefficient(t) == 1)


def catalan_coefficient_frequencies(n: int) -> dict[int, int]:
    """Histogram {B: number of n-leaf plane trees with that B}."""
    check_guard(n, "plane")
    return dict(sorted(Counter(catalan_coefficient(t) for t in enumerate_plane(n)).items()))


# -- enumeration --------------------------------------------------------------


def enumerate_histories(n: int) -> list[RankedPlaneTree]:
    """All ranked plane trees with n leaves, by exhausting every splitting history."""
    if n < 1:
        raise ValueError("a tree has at least one leaf")
    check_guard(n, "ranked_plane")
    out = []
    for choices in itertools.product(*(range(k) for k in range(1, n))):
        out.append(RankedPlaneTree.from_history(choices))
    return out


def _plane_structures(m: int, memo: dict) -> list:
    if m in memo:
        return memo[m]
    if m == 0:
        res = [None]
    else:
        res = [
            (a, b)
            for j in range(m)
            for a in _plane_structures(j, memo)
            for b in _plane_structures(m - 1 - j, memo)
        ]
    memo[m] = res
    return res


def enumerate_plane(n: int) -> list[PlaneTree]:
    if n < 1:
        raise ValueError("a tree has at least one leaf")
    check_guard(n, "plane")
    return [PlaneTree._make(s, n) for s in _plane_structures(n - 1, {})]


def _shape_keys(n: int, memo: dict) -> list:
    # canonical (structure, key) pairs in ascending canonical order
    if n in memo:
        return memo[n]
    if n == 1:
        res = [(None, "·")]
    else:
        res = []
        for i in range(1, n // 2 + 1):
            lefts, rights = _shape_keys(i, memo), _shape_keys(n - i, memo)
            for a_idx, a in enumerate(lefts):
                start = a_idx if i == n - i else 0
                for b in rights[start:]:
                    res.append(((a[0], b[0]), "(" + a[1] + b[1] + ")"))
    memo[n] = res
    return res


def enumerate_shapes(n: int) -> list[TreeShape]:
    if n < 1:
        raise ValueError("a tree has at least one leaf")
    check_guard(n, "shape")
    return [TreeShape(PlaneTree._make(s, n)) for s, _ in _shape_keys(n, {})]


def _ranked_structures(labels: tuple[int, ...]):
    # standard-form increasing trees on the given sorted labels
    if not labels:
        yield None
        return
    root, rest = labels[0], labels[1:]
    if not rest:
        yield (root, None, None)
        return
    first, others = rest[0], rest[1:]
    for k in range(len(others) + 1):
        for pick in itertools.combinations(others, k):
            left = (first,) + pick
            right = tuple(x for x in others if x not in pick)
            for a in _ranked_structures(left):
                for b in _ranked_structures(right):
                    yield (root, a, b)


def enumerate_ranked(n: int) -> list[RankedTree]:
    if n < 1:
        raise ValueError("a tree has at least one leaf")
    check_guard(n, "ranked")
    out = []
    for s in _ranked_structures(tuple(range(1, n))):
        rt = RankedTree.__new__(RankedTree)
        rt.embedding = RankedPlaneTree._make(s, n)
        out.append(rt)
    return out


def enumerate_trees(n: int, family: str) -> list:
    """Complete duplicate-free list of ``family`` trees with n leaves."""
    if family == "ranked_plane":
        return enumerate_histories(n)
    if family == "plane":
        return enumerate_plane(n)
    if family == "ranked":
        return enumerate_ranked(n)
    if family == "shape":
        return enumerate_shapes(n)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def family_count(n: int, family: str) -> int:
    """Closed-form cardinality of ``family`` at n leaves."""
    if n < 1:
        raise ValueError("a tree has at least one leaf")
    if family == "ranked_plane":
        return math.factorial(n - 1)
    if family == "plane":
        return catalan(n - 1)
    if family == "ranked":
        return euler_zigzag(n - 1)
    if family == "shape":
        return wedderburn_etherington(n)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
