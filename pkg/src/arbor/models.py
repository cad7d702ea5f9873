"""Markov splitting models on ranked plane trees.

A model picks, at every step, one of the current leaves (equivalently one of
the intervals of the current partition of [0, 1]) to split next.  Exact
probabilities are :class:`fractions.Fraction` values; samplers take a seeded
:class:`numpy.random.Generator` (or an integer seed) and never touch global
random state.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Union

import numpy as np

from . import _kernels
from .counting import catalan, catalan_coefficient, enumerate_histories
from .errors import InvalidModelError, TheoremInapplicableError
from .partitions import Partition, depths, partition_of
from .trees import (
    AnyTree,
    PlaneTree,
    RankedPlaneTree,
    TreeShape,
    as_plane,
    embeddings,
    preorder_ranking,
    rankings,
    symmetry_nodes,
)

State = Union[PlaneTree, RankedPlaneTree, Partition]
RngLike = Union[np.random.Generator, int, None]


def as_rng(rng: RngLike) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def _rising(x: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= x + i
    return out


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class SplittingModel:
    """Base class: a Markov kernel over the leaves of the current state.

    ``split_exchangeable`` and ``plane_invariant`` are ``True``/``False`` when
    known for every parameter value, ``None`` when they must be checked.
    """

    name = "markov"
    split_exchangeable: bool | None = None
    plane_invariant: bool | None = None

    @property
    def label(self) -> str:
        return self.name

    def leaf_distribution(self, state: State) -> tuple[Fraction, ...]:
        raise NotImplementedError

    def history_probability(self, tree: RankedPlaneTree) -> Fraction:
        """Product over the splitting history of the chosen leaf's probability."""
        prob = Fraction(1)
        cur = RankedPlaneTree.single()
        for idx in tree.history_indices():
            prob *= self.leaf_distribution(cur)[idx]
            if prob == 0:
                return prob
            cur = cur.split_leaf(cur.leaves()[idx])
        return prob

    def rpt_probability(self, tree: RankedPlaneTree) -> Fraction:
        return self.history_probability(tree)

    # sampling

    def _histories(self, m: int, draws: int, rng: np.random.Generator) -> np.ndarray:
        u = rng.random((draws, m))
        out = np.empty((draws, m), dtype=np.int64)
        for d in range(draws):
            leaves = [""]
            for k in range(m):
                w = np.asarray(self._float_weights(leaves), dtype=float)
                cum = np.cumsum(w)
                idx = int(np.searchsorted(cum, u[d, k] * cum[-1], side="right"))
                idx = min(idx, len(leaves) - 1)
                out[d, k] = idx
                a = leaves[idx]
                leaves[idx : idx + 1] = [a + "L", a + "R"]
        return out

    def _float_weights(self, leaves: list[str]):
        return [float(p) for p in self.leaf_distribution(_plane_from_leaves(leaves))]

    def sample_many(self, n: int, draws: int, rng: RngLike = None) -> list[RankedPlaneTree]:
        """``draws`` independent trees with n leaves."""
        if n < 1:
            raise ValueError("a tree has at least one leaf")
        rng = as_rng(rng)
        if n == 1:
            return [RankedPlaneTree.single() for _ in range(draws)]
        hist = self._histories(n - 1, draws, rng)
        cache: dict[bytes, RankedPlaneTree] = {}
        out = []
        for row in hist:
            key = row.tobytes()
            t = cache.get(key)
            if t is None:
                t = cache[key] = RankedPlaneTree.from_history(row)
            out.append(t)
        return out

    def sample(self, n: int, rng: RngLike = None) -> RankedPlaneTree:
        return self.sample_many(n, 1, rng)[0]

    def __repr__(self):
        return f"<{type(self).__name__} {self.label}>"


def _plane_from_leaves(leaves: list[str]) -> PlaneTree:
    internal = {a[:i] for a in leaves for i in range(len(a))}

    def build(a):
        return (build(a + "L"), build(a + "R")) if a in internal else None

    return PlaneTree._make(build(""), len(leaves))


def _leaf_depths(state: State) -> tuple[int, ...]:
    if isinstance(state, Partition):
        return depths(state)
    return tuple(len(a) for a in state.leaves())


def _endpoints(state: State) -> tuple[Fraction, ...]:
    if isinstance(state, Partition):
        return state.endpoints
    return partition_of(state).endpoints


def _n_states(state: State) -> int:
    return len(state) if isinstance(state, Partition) else state.n_leaves


class YuleModel(SplittingModel):
    """Uniform choice among the current leaves."""

    name = "yule"
    split_exchangeable = True
    plane_invariant = True

    def leaf_distribution(self, state):
        k = _n_states(state)
        return (Fraction(1, k),) * k

    def rpt_probability(self, tree):
        return Fraction(1, math.factorial(tree.n_leaves - 1))

    def _histories(self, m, draws, rng):
        return _kernels.yule_histories(rng.random((draws, m)))


class SEBModel(SplittingModel):
    """Leaf chosen with the F-mass of its interval, split at the midpoint.

    ``cdf`` must accept both Fractions (exact probabilities) and floats
    (sampling).
    """

    name = "seb"
    split_exchangeable = True

    def __init__(self, cdf: Callable, label: str = "F", plane_invariant: bool | None = None):
        if cdf(Fraction(0)) != 0 or cdf(Fraction(1)) != 1:
            raise InvalidModelError("the SEB distribution function needs F(0)=0 and F(1)=1")
        self.cdf = cdf
        self._label = label
        self.plane_invariant = plane_invariant

    @classmethod
    def uniform(cls) -> "SEBModel":
        return cls(lambda x: x, label="x")

    @classmethod
    def power(cls, k: int) -> "SEBModel":
        if k < 1:
            raise InvalidModelError("power must be a positive integer")
        if k == 1:
            return cls.uniform()
        return cls(lambda x: x**k, label=f"x^{k}")

    @property
    def label(self):
        return f"seb({self._label})"

    def leaf_distribution(self, state):
        e = _endpoints(state)
        f = [as_fraction(self.cdf(x)) for x in e]
        probs = tuple(b - a for a, b in zip(f, f[1:]))
        if any(p < 0 for p in probs):
            raise InvalidModelError("the SEB distribution function must be nondecreasing")
        return probs

    def _float_weights(self, leaves):
        out = []
        for a in leaves:
            num = 0
            for step in a:
                num = 2 * num + (step == "R")
            h = 0.5 ** len(a)
            out.append(self.cdf((num + 1) * h) - self.cdf(num * h))
        return out


class DepthProportionalModel(SplittingModel):
    """Leaf chosen with probability proportional to its depth."""

    name = "depth"
    split_exchangeable = False
    plane_invariant = None

    def leaf_distribution(self, state):
        y = _leaf_depths(state)
        total = sum(y)
        if total == 0:
            # only the unsplit root: the kernel on a one-point set
            return (Fraction(1),) * len(y)
        return tuple(Fraction(d, total) for d in y)

    def _histories(self, m, draws, rng):
        return _kernels.depth_histories(rng.random((draws, m)))


class BetaSplittingModel(SplittingModel):
    """Width-proportional choice; the chosen interval is cut at a
    Beta(alpha+1, beta+1) fraction of its length.

    The ranked-plane-tree probability integrates the split fractions out:
    each internal node with l internal nodes on its left and r on its right
    contributes B(l+alpha+1, r+beta+1)/B(alpha+1, beta+1), which for rational
    parameters is the rational (alpha+1)_l (beta+1)_r / (alpha+beta+2)_(l+r).
    """

    name = "beta"
    split_exchangeable = True

    def __init__(self, alpha=0, beta=0):
        self.alpha = as_fraction(alpha)
        self.beta = as_fraction(beta)
        if self.alpha <= -1 or self.beta <= -1:
            raise InvalidModelError(f"beta-splitting needs alpha, beta > -1, got {self.alpha}, {self.beta}")
        self.plane_invariant = self.alpha == self.beta

    @property
    def label(self):
        return f"beta({_fmt(self.alpha)},{_fmt(self.beta)})"

    def leaf_distribution(self, state):
        if not isinstance(state, Partition):
            raise TypeError("beta-splitting leaf weights are interval widths; pass a Partition")
        return state.widths()

    def node_factor(self, l: int, r: int) -> Fraction:
        a1, b1 = self.alpha + 1, self.beta + 1
        return _rising(a1, l) * _rising(b1, r) / _rising(a1 + b1, l + r)

    def rpt_probability(self, tree):
        prob = Fraction(1)

        def go(s):
            nonlocal prob
            if s is None:
                return 0
            l, r = go(s[1]), go(s[2])
            prob *= self.node_factor(l, r)
            return l + r + 1

        go(tree.structure)
        return prob

    def log_rpt_probability(self, tree) -> float:
        """Natural log of :meth:`rpt_probability` via log-gamma, for large trees."""
        a1, b1 = float(self.alpha) + 1, float(self.beta) + 1
        base = math.lgamma(a1) + math.lgamma(b1) - math.lgamma(a1 + b1)
        total = 0.0
        stack = [(tree.structure, False)]
        sizes: list[int] = []
        while stack:
            s, seen = stack.pop()
            if s is None:
                sizes.append(0)
            elif not seen:
                stack.append((s, True))
                stack.append((s[2], False))
                stack.append((s[1], False))
            else:
                r, l = sizes.pop(), sizes.pop()
                total += math.lgamma(l + a1) + math.lgamma(r + b1) - math.lgamma(l + r + a1 + b1) - base
                sizes.append(l + r + 1)
        return total

    def _draw(self, m, draws, rng):
        u = rng.random((draws, m))
        b = rng.beta(float(self.alpha) + 1, float(self.beta) + 1, size=(draws, m))
        return u, b

    def _histories(self, m, draws, rng):
        u, b = self._draw(m, draws, rng)
        return _kernels.beta_histories(u, b)

    def sample_with_intervals(self, n: int, rng: RngLike = None):
        """A tree plus the interval label of each leaf, as floats."""
        rng = as_rng(rng)
        if n == 1:
            return RankedPlaneTree.single(), {"": (0.0, 1.0)}
        u, b = self._draw(n - 1, 1, rng)
        hist = _kernels.beta_histories(u, b)[0]
        labels = {"": (0.0, 1.0)}
        leaves = [""]
        for k, idx in enumerate(hist):
            a = leaves[idx]
            lo, hi = labels.pop(a)
            s = float(lo + (hi - lo) * b[0, k])
            labels[a + "L"], labels[a + "R"] = (lo, s), (s, hi)
            leaves[idx : idx + 1] = [a + "L", a + "R"]
        return RankedPlaneTree.from_history(hist), labels


MODEL_NAMES = ("yule", "seb", "depth", "beta")


def make_model(name: str, alpha=None, beta=None, cdf_power: int = 1) -> SplittingModel:
    if name in ("yule", "uniform", "uniform_yule"):
        return YuleModel()
    if name == "seb":
        return SEBModel.power(cdf_power)
    if name in ("depth", "depth_proportional"):
        return DepthProportionalModel()
    if name == "beta":
        return BetaSplittingModel(0 if alpha is None else alpha, 0 if beta is None else beta)
    raise InvalidModelError(f"unknown model {name!r}; expected one of {MODEL_NAMES}")


# -- fiber sums and the lifting theorems --------------------------------------


def plane_probability(model: SplittingModel, tree: AnyTree) -> Fraction:
    """Probability of a plane tree as an explicit sum over its rankings."""
    return sum((model.rpt_probability(t) for t in rankings(tree)), Fraction(0))


def shape_probability(model: SplittingModel, shape: AnyTree) -> Fraction:
    """Probability of a tree shape as a sum over its plane embeddings."""
    return sum((plane_probability(model, p) for p in embeddings(shape)), Fraction(0))


@dataclass
class CheckResult:
    holds: bool
    property: str
    model: str
    n: int
    witness: tuple = field(default=None)

    def __bool__(self):
        return self.holds

    def to_json(self):
        out = {"model": self.model, "property": self.property, "n": self.n, "holds": self.holds}
        if self.witness is not None:
            out["counterexample"] = [
                {"tree": _witness_repr(t), "probability": _fmt(p)} for t, p in self.witness
            ]
        return out


def _witness_repr(t):
    if isinstance(t, RankedPlaneTree):
        return "".join(map(str, t.infix())) if t.n_internal <= 9 else ",".join(map(str, t.infix()))
    return t.to_parens()


def check_split_exchangeable(model: SplittingModel, n: int) -> CheckResult:
    """Is the ranked-plane-tree probability constant on every plane fiber, up to n leaves?"""
    for k in range(2, n + 1):
        seen: dict[PlaneTree, tuple] = {}
        for t in enumerate_histories(k):
            p = model.rpt_probability(t)
            key = t.plane()
            if key in seen:
                if seen[key][1] != p:
                    return CheckResult(False, "split-exchangeable", model.label, n, (seen[key], (t, p)))
            else:
                seen[key] = (t, p)
    return CheckResult(True, "split-exchangeable", model.label, n)


def plane_probabilities(model: SplittingModel, n: int) -> dict[PlaneTree, Fraction]:
    """Every n-leaf plane tree's probability, summed over all splitting histories."""
    out: dict[PlaneTree, Fraction] = {}
    for t in enumerate_histories(n):
        key = t.plane()
        out[key] = out.get(key, Fraction(0)) + model.rpt_probability(t)
    return out


def check_plane_invariant(model: SplittingModel, n: int) -> CheckResult:
    """Is the plane-tree probability constant on every shape fiber, up to n leaves?"""
    for k in range(2, n + 1):
        seen: dict[TreeShape, tuple] = {}
        for plane, p in plane_probabilities(model, k).items():
            key = TreeShape(plane)
            if key in seen:
                if seen[key][1] != p:
                    return CheckResult(False, "plane-invariant", model.label, n, (seen[key], (plane, p)))
            else:
                seen[key] = (plane, p)
    return CheckResult(True, "plane-invariant", model.label, n)


def _require(model: SplittingModel, prop: str, n: int):
    declared = getattr(model, prop)
    if declared is None:
        # undeclared: decide by exhaustive check, remembered per size
        cache = model.__dict__.setdefault("_checked", {})
        if (prop, n) not in cache:
            check = check_split_exchangeable if prop == "split_exchangeable" else check_plane_invariant
            cache[prop, n] = check(model, n).holds
        declared = cache[prop, n]
    if not declared:
        raise TheoremInapplicableError(f"{model.label} is not {prop.replace('_', '-')}")


def lift_to_plane(model: SplittingModel, tree: AnyTree) -> Fraction:
    """Plane-tree probability as B(t) times the probability of any one ranking."""
    plane = as_plane(tree)
    if plane.n_leaves > 1:
        _require(model, "split_exchangeable", plane.n_leaves)
    return catalan_coefficient(plane) * model.rpt_probability(preorder_ranking(plane))


def lift_to_shape(model: SplittingModel, shape: AnyTree) -> Fraction:
    """Shape probability as B(t) 2^(n-1-s(t)) times the probability of any one ranking."""
    n = shape.n_leaves
    if n == 1:
        return Fraction(1)
    _require(model, "split_exchangeable", n)
    _require(model, "plane_invariant", n)
    mult = catalan_coefficient(shape) * 2 ** (n - 1 - symmetry_nodes(shape))
    return mult * model.rpt_probability(preorder_ranking(shape))


# -- uniform plane trees and the balance functional ---------------------------


def _randbelow(rng: np.random.Generator, bound: int) -> int:
    if bound < 2**62:
        return int(rng.integers(bound))
    k = bound.bit_length()
    nbytes = (k + 7) // 8
    while True:
        r = int.from_bytes(rng.bytes(nbytes), "little") >> (8 * nbytes - k)
        if r < bound:
            return r


def sample_uniform_plane_tree(n: int, rng: RngLike = None) -> PlaneTree:
    """Uniform over the C_(n-1) plane trees with n leaves.

    The left subtree gets j of the m internal nodes with probability
    C_j C_(m-1-j) / C_m, recursively.
    """
    if n < 1:
        raise ValueError("a tree has at least one leaf")
    rng = as_rng(rng)

    def build(m):
        if m == 0:
            return None
        r = _randbelow(rng, catalan(m))
        j = 0
        acc = catalan(0) * catalan(m - 1)
        while r >= acc:
            j += 1
            acc += catalan(j) * catalan(m - 1 - j)
        return (build(j), build(m - 1 - j))

    return PlaneTree._make(build(n - 1), n)


@dataclass(frozen=True)
class FillEstimate:
    source: str
    n: int
    draws: int
    mean: float
    stderr: float

    def to_json(self):
        se = None if math.isnan(self.stderr) else self.stderr
        return {"source": self.source, "n": self.n, "draws": self.draws, "mean": self.mean, "stderr": se}


def neg_log_q_samples(source: str, n: int, draws: int, rng: RngLike = None) -> np.ndarray:
    """Draws of -ln Q(t) for random n-leaf plane trees.

    ``source="yule"`` grows Yule trees; ``"uniform_plane"`` uses Remy's
    algorithm, which is uniform over plane trees and linear in n.
    """
    rng = as_rng(rng)
    m = n - 1
    if source == "yule":
        return _kernels.yule_neg_log_q(rng.random((draws, m)))
    if source in ("uniform_plane", "uniform"):
        return _kernels.remy_neg_log_q(rng.random((draws, m)), rng.random((draws, m)))
    raise ValueError(f"unknown source {source!r}; expected 'yule' or 'uniform_plane'")


def estimate_fill_limit(source: str, n: int, draws: int, rng: RngLike = None) -> FillEstimate:
    """Monte Carlo mean of -ln Q(t)/n with its standard error."""
    if n < 1 or draws < 1:
        raise ValueError("need n >= 1 and draws >= 1")
    x = neg_log_q_samples(source, n, draws, rng) / n
    se = float(x.std(ddof=1) / math.sqrt(draws)) if draws > 1 else float("nan")
    return FillEstimate(source, n, draws, float(x.mean()), se)
