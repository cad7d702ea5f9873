"""Tree-pair diagrams for Thompson's group F.

A pair of plane trees with the same number of leaves determines two dyadic
partitions of [0, 1]; the group element is the piecewise-linear map sending
the i-th endpoint of the first to the i-th endpoint of the second.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .counting import catalan, catalan_coefficient
from .errors import InvalidPairError
from .partitions import partition_of
from .trees import AnyTree, PlaneTree, as_plane


@dataclass(frozen=True)
class TreePair:
    domain_tree: PlaneTree
    range_tree: PlaneTree

    def __post_init__(self):
        object.__setattr__(self, "domain_tree", as_plane(self.domain_tree))
        object.__setattr__(self, "range_tree", as_plane(self.range_tree))
        if self.domain_tree.n_leaves != self.range_tree.n_leaves:
            raise InvalidPairError(
                f"tree pair sizes differ: {self.domain_tree.n_leaves} vs {self.range_tree.n_leaves} leaves"
            )

    @property
    def size(self) -> int:
        """Internal nodes per tree."""
        return self.domain_tree.n_internal


def _is_dyadic(x: Fraction) -> bool:
    d = x.denominator
    return d & (d - 1) == 0


def _is_power_of_two(x: Fraction) -> bool:
    # reduced, so one of numerator and denominator is 1
    return x > 0 and x.numerator & (x.numerator - 1) == 0 and _is_dyadic(x)


class PLMap:
    """An orientation-preserving PL homeomorphism of [0, 1] with dyadic
    breakpoints and power-of-two slopes.

    Collinear interior breakpoints are removed on construction, so two maps
    are equal exactly when they agree as functions.
    """

    __slots__ = ("breakpoints",)

    def __init__(self, breakpoints: Sequence[tuple]):
        pts = [(Fraction(x), Fraction(y)) for x, y in breakpoints]
        if len(pts) < 2 or pts[0] != (0, 0) or pts[-1] != (1, 1):
            raise InvalidPairError("breakpoints must start at (0,0) and end at (1,1)")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x1 <= x0 or y1 <= y0:
                raise InvalidPairError("breakpoint coordinates must be strictly increasing")
        for x, y in pts:
            if not (_is_dyadic(x) and _is_dyadic(y)):
                raise InvalidPairError(f"breakpoint ({x}, {y}) is not dyadic")
        reduced = [pts[0]]
        for i in range(1, len(pts) - 1):
            if _slope(reduced[-1], pts[i]) != _slope(pts[i], pts[i + 1]):
                reduced.append(pts[i])
        reduced.append(pts[-1])
        for a, b in zip(reduced, reduced[1:]):
            if not _is_power_of_two(_slope(a, b)):
                raise InvalidPairError(f"slope {_slope(a, b)} between {a} and {b} is not a power of two")
        self.breakpoints = tuple(reduced)

    @classmethod
    def identity(cls) -> "PLMap":
        return cls([(0, 0), (1, 1)])

    def slopes(self) -> tuple[Fraction, ...]:
        b = self.breakpoints
        return tuple(_slope(p, q) for p, q in zip(b, b[1:]))

    def evaluate(self, x) -> Fraction:
        x = Fraction(x)
        if not 0 <= x <= 1:
            raise ValueError(f"{x} is outside [0, 1]")
        b = self.breakpoints
        for (x0, y0), (x1, y1) in zip(b, b[1:]):
            if x <= x1:
                return y0 + (x - x0) * (y1 - y0) / (x1 - x0)
        raise AssertionError("unreachable: the last breakpoint is x=1")

    __call__ = evaluate

    def to_json(self):
        return {
            "breakpoints": [[_fstr(x), _fstr(y)] for x, y in self.breakpoints],
            "slopes": [_fstr(s) for s in self.slopes()],
        }

    def __eq__(self, other):
        return isinstance(other, PLMap) and self.breakpoints == other.breakpoints

    def __hash__(self):
        return hash(self.breakpoints)

    def __repr__(self):
        inner = ", ".join(f"({_fstr(x)}, {_fstr(y)})" for x, y in self.breakpoints)
        return f"PLMap([{inner}])"


def _slope(p, q) -> Fraction:
    return (q[1] - p[1]) / (q[0] - p[0])


def _fstr(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def pl_map(pair: TreePair) -> PLMap:
    xs = partition_of(pair.domain_tree).endpoints
    ys = partition_of(pair.range_tree).endpoints
    return PLMap(list(zip(xs, ys)))


def pair_weights(pair: TreePair) -> tuple[Fraction, Fraction]:
    """(uniform, Yule) selection probabilities of a size-n tree pair.

    Uniform picks both trees uniformly among the C_n plane trees with n
    internal nodes; Yule grows each tree independently, so the pair has
    probability B(s) B(t) / (n!)^2.
    """
    n = pair.size
    uniform = Fraction(1, catalan(n) ** 2)
    yule = Fraction(
        catalan_coefficient(pair.domain_tree) * catalan_coefficient(pair.range_tree),
        math.factorial(n) ** 2,
    )
    return uniform, yule


def make_pair(domain: AnyTree | str, range_: AnyTree | str) -> TreePair:
    """Build a pair from trees or parenthesised literals."""
    d = PlaneTree.from_parens(domain) if isinstance(domain, str) else domain
    r = PlaneTree.from_parens(range_) if isinstance(range_, str) else range_
    return TreePair(d, r)
