"""Interval partitions of [0, 1]: endpoints, widths and dyadic depth vectors.

Intervals are indexed from 0 in :func:`split_midpoint` and :func:`split_at`;
depth vectors are indexed from 1 in :func:`split_depths`.  So
``split_depths(depths(p), i + 1) == depths(split_midpoint(p, i))``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InvalidPartitionError, NotDyadicError

DepthVector = tuple[int, ...]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class Partition:
    endpoints: tuple[Fraction, ...]

    def __post_init__(self):
        pts = tuple(_frac(x) for x in self.endpoints)
        object.__setattr__(self, "endpoints", pts)
        if len(pts) < 2 or pts[0] != 0 or pts[-1] != 1:
            raise InvalidPartitionError(f"endpoints must run from 0 to 1: {self.to_text()}")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise InvalidPartitionError(f"endpoints must be strictly increasing: {self.to_text()}")

    @classmethod
    def trivial(cls) -> "Partition":
        return cls((Fraction(0), Fraction(1)))

    @classmethod
    def from_text(cls, text: str) -> "Partition":
        try:
            return cls(tuple(Fraction(x.strip()) for x in text.split(",")))
        except (ValueError, ZeroDivisionError):
            raise InvalidPartitionError(f"malformed partition literal {text!r}") from None

    @classmethod
    def from_json(cls, obj) -> "Partition":
        return cls(tuple(Fraction(p["num"], p["den"]) for p in obj))

    @classmethod
    def from_depths(cls, y: Sequence[int]) -> "Partition":
        if sum(Fraction(1, 2**d) for d in y) != 1:
            raise InvalidPartitionError(f"depths {tuple(y)} violate the Kraft equality")
        pts = [Fraction(0)]
        for d in y:
            pts.append(pts[-1] + Fraction(1, 2**d))
        return cls(tuple(pts))

    def __len__(self):
        """Number of intervals."""
        return len(self.endpoints) - 1

    def widths(self) -> tuple[Fraction, ...]:
        e = self.endpoints
        return tuple(b - a for a, b in zip(e, e[1:]))

    def is_dyadic(self) -> bool:
        return all(_is_power_of_two(x.denominator) for x in self.endpoints)

    def to_text(self) -> str:
        return ",".join(str(x) for x in self.endpoints)

    def to_json(self):
        return [{"num": x.numerator, "den": x.denominator} for x in self.endpoints]

    __str__ = to_text


def _is_power_of_two(d: int) -> bool:
    return d > 0 and d & (d - 1) == 0


def _check_index(p: Partition, i: int):
    if not 0 <= i < len(p):
        raise IndexError(f"interval index {i} out of range for {len(p)} intervals")


def split_at(p: Partition, i: int, s) -> Partition:
    """Insert the point ``s`` strictly inside interval ``i``."""
    _check_index(p, i)
    s = _frac(s)
    lo, hi = p.endpoints[i], p.endpoints[i + 1]
    if not lo < s < hi:
        raise InvalidPartitionError(f"split point {s} is not inside ({lo}, {hi})")
    e = p.endpoints
    return Partition(e[: i + 1] + (s,) + e[i + 1 :])


def split_midpoint(p: Partition, i: int) -> Partition:
    _check_index(p, i)
    return split_at(p, i, (p.endpoints[i] + p.endpoints[i + 1]) / 2)


def depths(p: Partition) -> DepthVector:
    """``-log2`` of each width; the partition must be dyadic."""
    out = []
    for w in p.widths():
        if w.numerator != 1 or not _is_power_of_two(w.denominator):
            raise NotDyadicError(f"width {w} of {p.to_text()} is not a power of 1/2")
        out.append(w.denominator.bit_length() - 1)
    return tuple(out)


def split_depths(y: Sequence[int], i: int) -> DepthVector:
    """Replace the 1-based entry ``i`` by two entries one level deeper."""
    y = tuple(y)
    if not 1 <= i <= len(y):
        raise IndexError(f"depth index {i} out of range 1..{len(y)}")
    return y[: i - 1] + (y[i - 1] + 1, y[i - 1] + 1) + y[i:]


def kraft_sum(y: Sequence[int]) -> Fraction:
    return sum((Fraction(1, 2**d) for d in y), Fraction(0))


def leaf_interval(address: str) -> tuple[Fraction, Fraction]:
    """Dyadic interval of the node at ``address`` under midpoint bisection."""
    num = 0
    for step in address:
        num = 2 * num + (1 if step == "R" else 0)
    den = 2 ** len(address)
    return Fraction(num, den), Fraction(num + 1, den)


def partition_of(tree) -> Partition:
    """Dyadic partition whose intervals are the leaves of a plane tree."""
    pts = [Fraction(0)]
    for a in tree.leaves():
        pts.append(leaf_interval(a)[1])
    return Partition(tuple(pts))
