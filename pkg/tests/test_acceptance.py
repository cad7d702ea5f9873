"""Acceptance criteria, one group of tests per criterion.

The terminal summary prints one PASS/FAIL line per criterion (see conftest).
"""
import itertools
import math
from collections import Counter
from fractions import Fraction as F

import numpy as np
import pytest

from arbor import PlaneTree, RankedPlaneTree, TreeShape, project
from arbor.trees import preorder_ranking
from arbor.bijections import bst_insert_all, canonical_ranked_word, is_canonical, lift, read_infix
from arbor.counting import (
    catalan,
    catalan_coefficient,
    count_unit_B_plane_trees,
    enumerate_histories,
    enumerate_plane,
    enumerate_ranked,
    enumerate_shapes,
    enumerate_trees,
    euler_zigzag,
    max_catalan_coefficient,
    ranked_per_shape,
    rpt_per_ranked_tree,
    rpt_per_shape,
    shape_coefficient,
    wedderburn_etherington,
)
from arbor.models import (
    BetaSplittingModel,
    DepthProportionalModel,
    SEBModel,
    YuleModel,
    check_plane_invariant,
    check_split_exchangeable,
    estimate_fill_limit,
    lift_to_plane,
    lift_to_shape,
    sample_uniform_plane_tree,
)
from arbor.errors import TheoremInapplicableError
from arbor.thompson import TreePair, make_pair, pair_weights, pl_map

import oracles

CRITERIA = {
    1: "enumeration cardinalities for n = 1..7 and the zigzag / Wedderburn-Etherington sequences",
    2: "worked Catalan coefficients B = 80 and B = 6",
    3: "counting identities for n <= 8, heap maxima, unit-B plane trees",
    4: "bijection round trips, canonical words, |A_m| = e(m), BST insertion of 2,1,3",
    5: "exact normalization of ranked-plane-tree probabilities, n <= 7",
    6: "lifting theorems agree with fiber sums, Yule shape probabilities at n = 4",
    7: "split-exchangeability and plane-invariance classifications with counterexamples",
    8: "beta(0,0) reduces to Yule; beta formula against symbolic integration and Monte Carlo",
    9: "sampler frequencies within 4 sigma at n = 5",
    10: "Monte Carlo -ln Q / n at n = 4096 near 2.03 (uniform plane) and 1.204 (Yule)",
    11: "tree-pair PL maps, slopes, weight normalization, PL invariants for n <= 6",
}


def mc_within(counts, probs, draws, k=4.0):
    worst = 0.0
    for t, p in probs.items():
        p = float(p)
        sigma = math.sqrt(draws * p * (1 - p))
        z = abs(counts.get(t, 0) - draws * p) / sigma if sigma else abs(counts.get(t, 0) - draws * p)
        worst = max(worst, z)
    assert set(counts) <= set(probs)
    assert worst <= k, f"largest deviation {worst:.2f} sigma"
    return worst


# 1 ----------------------------------------------------------------------------------


@pytest.mark.parametrize("n", range(1, 8))
def test_criterion_01_enumeration(n):
    assert len(enumerate_trees(n, "ranked_plane")) == math.factorial(n - 1)
    assert len(enumerate_trees(n, "plane")) == oracles.catalan_binomial(n - 1)
    assert len(enumerate_trees(n, "ranked")) == oracles.ZIGZAG[n - 1]
    assert len(enumerate_trees(n, "shape")) == oracles.WEDDERBURN[n - 1]
    for fam in ("ranked_plane", "plane", "ranked", "shape"):
        trees = enumerate_trees(n, fam)
        assert len(set(trees)) == len(trees)


def test_criterion_01_sequences():
    assert [euler_zigzag(n) for n in range(10)] == oracles.ZIGZAG
    assert oracles.ZIGZAG[-1] == 7936
    assert [wedderburn_etherington(n) for n in range(1, 19)] == oracles.WEDDERBURN
    assert oracles.WEDDERBURN[-1] == 56011


# 2 ----------------------------------------------------------------------------------


def test_criterion_02_worked_coefficients():
    perfect = PlaneTree.from_parens("(((··)(··))((··)(··)))")
    six = PlaneTree.from_parens("(((··)·)(·(··)))")
    assert catalan_coefficient(perfect) == 80 == oracles.linear_extensions(perfect.structure)
    assert catalan_coefficient(six) == 6 == oracles.linear_extensions(six.structure)


# 3 ----------------------------------------------------------------------------------


@pytest.mark.parametrize("n", range(2, 9))
def test_criterion_03_identities(n):
    planes = enumerate_plane(n)
    shapes = enumerate_shapes(n)
    assert sum(catalan_coefficient(t) for t in planes) == math.factorial(n - 1)
    assert sum(shape_coefficient(s) for s in shapes) == catalan(n - 1)
    for s in shapes:
        assert catalan_coefficient(s) * shape_coefficient(s) == rpt_per_shape(s)
    for rt in enumerate_ranked(n):
        shape = TreeShape(rt.embedding.plane())
        assert rpt_per_ranked_tree(rt) * ranked_per_shape(shape) == rpt_per_shape(shape)
    assert count_unit_B_plane_trees(n) == 2 ** (n - 2)
    assert max_catalan_coefficient(n) == max(catalan_coefficient(t) for t in planes) == oracles.HEAPS[n - 1]


def test_criterion_03_heap_sequence():
    assert [max_catalan_coefficient(n) for n in range(1, 14)] == oracles.HEAPS
    assert max_catalan_coefficient(8) == 80 and max_catalan_coefficient(10) == 896


# 4 ----------------------------------------------------------------------------------


@pytest.mark.parametrize("m", range(0, 8))
def test_criterion_04_round_trip(m):
    for w in itertools.permutations(range(1, m + 1)):
        t = lift(w)
        assert read_infix(t) == w
    for t in enumerate_histories(m + 1):
        assert lift(read_infix(t)) == t


@pytest.mark.parametrize("m", range(0, 7))
def test_criterion_04_canonical_words(m):
    classes = {}
    for w in itertools.permutations(range(1, m + 1)):
        c = canonical_ranked_word(w)
        assert canonical_ranked_word(c) == c
        classes.setdefault(c, set()).add(project(lift(w), "ranked"))
    # equal canonical word <=> equal ranked tree
    assert all(len(v) == 1 for v in classes.values())
    assert len({next(iter(v)) for v in classes.values()}) == len(classes)


@pytest.mark.parametrize("m", range(0, 10))
def test_criterion_04_canonical_count(m):
    assert sum(1 for w in itertools.permutations(range(1, m + 1)) if is_canonical(w)) == oracles.seidel_zigzag(m)


def test_criterion_04_bst_example():
    t = bst_insert_all((2, 1, 3))
    # root key 2 (rank 1), left key 1 (rank 2), right key 3 (rank 3)
    assert t.rank_map() == {"": 1, "L": 2, "R": 3}
    from arbor.bijections import bst_keys

    assert bst_keys(t) == {"": 2, "L": 1, "R": 3}


# 5 ----------------------------------------------------------------------------------

NORMALIZED = [
    YuleModel(),
    SEBModel.uniform(),
    DepthProportionalModel(),
    BetaSplittingModel(0, 0),
    BetaSplittingModel(1, 1),
    BetaSplittingModel(2, 1),
]


@pytest.mark.parametrize("n", range(1, 8))
@pytest.mark.parametrize("model", NORMALIZED, ids=lambda m: m.label)
def test_criterion_05_normalization(model, n):
    total = sum(model.rpt_probability(t) for t in enumerate_histories(n))
    assert isinstance(total, F) and total == 1


# 6 ----------------------------------------------------------------------------------

LIFT_MODELS = [
    YuleModel(),
    SEBModel.uniform(),
    SEBModel.power(2),
    DepthProportionalModel(),
    BetaSplittingModel(0, 0),
    BetaSplittingModel(1, 1),
    BetaSplittingModel(2, 1),
    BetaSplittingModel(1, 0),
]


@pytest.mark.parametrize("n", range(2, 8))
@pytest.mark.parametrize("model", LIFT_MODELS, ids=lambda m: m.label)
def test_criterion_06_lifting(model, n):
    plane_mass = Counter()
    for choices in oracles.histories(n):
        plane_mass[oracles.history_plane(choices)] += model.rpt_probability(RankedPlaneTree.from_history(choices))
    shape_mass = Counter()
    for s, p in plane_mass.items():
        shape_mass[oracles.shape_key(s)] += p
    if check_split_exchangeable(model, n):
        for t in enumerate_plane(n):
            _check_lift(lift_to_plane, model, ["split_exchangeable"], t, plane_mass[t.structure])
        if check_plane_invariant(model, n):
            for s in enumerate_shapes(n):
                _check_lift(lift_to_shape, model, ["split_exchangeable", "plane_invariant"], s, shape_mass[oracles.shape_key(s.structure)])
    else:
        assert model.label == "depth"


def _check_lift(lifted, model, props, tree, expected):
    # the theorem's product formula, evaluated directly
    formula = catalan_coefficient(tree) * model.rpt_probability(preorder_ranking(tree))
    if lifted is lift_to_shape and tree.n_leaves > 1:
        formula *= shape_coefficient(tree)
    assert formula == expected
    if any(getattr(model, p) is False for p in props) and tree.n_leaves > 1:
        # passes the check at this size but the property fails in general:
        # the library refuses the theorem rather than answer by size
        with pytest.raises(TheoremInapplicableError):
            lifted(model, tree)
    else:
        assert lifted(model, tree) == expected


def test_criterion_06_yule_shapes_n4():
    y = YuleModel()
    assert lift_to_shape(y, TreeShape.from_parens("(((··)·)·)")) == F(2, 3)
    assert lift_to_shape(y, TreeShape.from_parens("((··)(··))")) == F(1, 3)


# 7 ----------------------------------------------------------------------------------


def test_criterion_07_split_exchangeable():
    for m in [YuleModel(), SEBModel.uniform(), SEBModel.power(2), BetaSplittingModel(0, 0),
              BetaSplittingModel(1, 1), BetaSplittingModel(2, 1), BetaSplittingModel(1, 0),
              BetaSplittingModel(2, "1/2")]:
        assert check_split_exchangeable(m, 6), m.label
    r = check_split_exchangeable(DepthProportionalModel(), 6)
    assert not r and r.witness is not None
    (a, pa), (b, pb) = r.witness
    assert a.plane() == b.plane() and pa != pb
    print("depth counterexample:", r.to_json()["counterexample"])


def test_criterion_07_plane_invariant():
    for m in [YuleModel(), BetaSplittingModel(0, 0), BetaSplittingModel(1, 1), BetaSplittingModel("1/2", "1/2")]:
        assert check_plane_invariant(m, 5), m.label
    for m in [SEBModel.power(2), BetaSplittingModel(1, 0)]:
        r = check_plane_invariant(m, 5)
        assert not r and r.witness is not None
        (a, pa), (b, pb) = r.witness
        assert TreeShape(a) == TreeShape(b) and pa != pb
        print(m.label, "counterexample:", r.to_json()["counterexample"])


# 8 ----------------------------------------------------------------------------------


@pytest.mark.parametrize("n", range(1, 8))
def test_criterion_08_yule_reduction(n):
    b = BetaSplittingModel(0, 0)
    assert all(b.rpt_probability(t) == F(1, math.factorial(n - 1)) for t in enumerate_histories(n))


@pytest.mark.parametrize("alpha,beta", [(0, 0), (1, 1), (2, 1), (2, "1/2")])
def test_criterion_08_symbolic_oracle(alpha, beta):
    m = BetaSplittingModel(alpha, beta)
    for n in range(1, 6):
        for choices in oracles.histories(n):
            assert m.rpt_probability(RankedPlaneTree.from_history(choices)) == oracles.sympy_beta_probability(
                choices, alpha, beta
            )


@pytest.mark.parametrize("alpha,beta", [(2, "1/2"), (1, 0)])
def test_criterion_08_monte_carlo_n6(alpha, beta):
    m = BetaSplittingModel(alpha, beta)
    draws = 100_000
    counts = Counter(m.sample_many(6, draws, np.random.default_rng(606)))
    probs = {t: m.rpt_probability(t) for t in enumerate_histories(6)}
    mc_within(counts, probs, draws)


# 9 ----------------------------------------------------------------------------------

SAMPLED = [
    YuleModel(),
    SEBModel.uniform(),
    SEBModel.power(2),
    DepthProportionalModel(),
    BetaSplittingModel(0, 0),
    BetaSplittingModel(1, 1),
    BetaSplittingModel(2, 1),
    BetaSplittingModel(2, "1/2"),
]


@pytest.mark.parametrize("model", SAMPLED, ids=lambda m: m.label)
def test_criterion_09_sampler(model):
    draws = 50_000
    counts = Counter(model.sample_many(5, draws, np.random.default_rng(9)))
    probs = {t: model.rpt_probability(t) for t in enumerate_histories(5)}
    mc_within(counts, probs, draws)


def test_criterion_09_uniform_plane():
    draws = 50_000
    rng = np.random.default_rng(99)
    counts = Counter(sample_uniform_plane_tree(5, rng) for _ in range(draws))
    mc_within(counts, {t: F(1, catalan(4)) for t in enumerate_plane(5)}, draws)


# 10 ---------------------------------------------------------------------------------


@pytest.mark.slow
@pytest.mark.parametrize("source,target,tol", [("uniform_plane", 2.03, 0.08), ("yule", 1.204, 0.05)])
def test_criterion_10_fill_limits(source, target, tol):
    est = estimate_fill_limit(source, 4096, 200, np.random.default_rng(4096))
    print(f"{source}: mean {est.mean:.4f} +- {est.stderr:.4f} (target {target} +- {tol})")
    assert abs(est.mean - target) <= tol


# 11 ---------------------------------------------------------------------------------


def test_criterion_11_figure_pair():
    f = pl_map(make_pair("((··)·)", "(·(··))"))
    assert f.breakpoints == ((0, 0), (F(1, 4), F(1, 2)), (F(1, 2), F(3, 4)), (1, 1))
    assert f.slopes() == (2, 1, F(1, 2))


@pytest.mark.parametrize("n", range(0, 7))
def test_criterion_11_pairs(n):
    trees = enumerate_plane(n + 1)
    total = F(0)
    for s, t in itertools.product(trees, repeat=2):
        pair = TreePair(s, t)
        f = pl_map(pair)
        b = f.breakpoints
        assert b[0] == (0, 0) and b[-1] == (1, 1)
        assert all(x1 > x0 and y1 > y0 for (x0, y0), (x1, y1) in zip(b, b[1:]))
        assert all(x.denominator & (x.denominator - 1) == 0 == y.denominator & (y.denominator - 1) for x, y in b)
        for sl in f.slopes():
            assert (sl.numerator == 1 or sl.denominator == 1) and sl.numerator * sl.denominator & (
                sl.numerator * sl.denominator - 1
            ) == 0
        total += pair_weights(pair)[1]
    assert total == 1
