"""Command-line entry point: ``arbor <command> [options]``."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .bijections import bst_insert_all, canonical_ranked_word, format_permutation, lift, parse_permutation
from .counting import check_guard, enumerate_trees, family_count, FAMILIES
from .errors import (
    ArborError,
    InvalidModelError,
    InvalidPairError,
    InvalidPermutationError,
    InvalidTreeError,
    ResourceGuardError,
    TheoremInapplicableError,
)
from .models import (
    MODEL_NAMES,
    as_fraction,
    check_plane_invariant,
    check_split_exchangeable,
    estimate_fill_limit,
    lift_to_plane,
    lift_to_shape,
    make_model,
    plane_probability,
    shape_probability,
)
from .thompson import make_pair, pair_weights, pl_map
from .trees import RankedPlaneTree, RankedTree, TreeShape, _format_word

# diagnostics prefix per error kind, so scripts can tell them apart
_KINDS = [
    (InvalidTreeError, "invalid tree literal"),
    (InvalidPermutationError, "invalid permutation literal"),
    (ResourceGuardError, "resource guard exceeded"),
    (InvalidModelError, "invalid model parameters"),
    (InvalidPairError, "invalid tree pair"),
    (ArborError, "error"),
]


def fstr(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _word(t: RankedPlaneTree) -> str:
    return _format_word(t.infix())


def _model_from(args):
    return make_model(args.model, alpha=args.alpha, beta=args.beta, cdf_power=args.cdf_power)


def _model_args(p, required=True):
    p.add_argument("--model", choices=MODEL_NAMES, required=required)
    p.add_argument("--alpha", type=as_fraction, default=None, help="beta-splitting alpha (> -1)")
    p.add_argument("--beta", type=as_fraction, default=None, help="beta-splitting beta (> -1)")
    p.add_argument("--cdf-power", type=int, default=1, help="SEB distribution function F(x)=x^k")


def _seed(text):
    # any 64-bit integer, signed or not, folded into numpy's non-negative range
    n = int(text)
    if not -(2**63) <= n < 2**64:
        raise argparse.ArgumentTypeError(f"seed {n} does not fit in 64 bits")
    return n % 2**64


def _positive(text):
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


# -- commands -------------------------------------------------------------------


def cmd_sample(args):
    model = _model_from(args)
    trees = model.sample_many(args.n, args.draws, args.seed)
    if args.format == "json":
        return {
            "model": model.label,
            "n": args.n,
            "seed": args.seed,
            "draws": args.draws,
            "trees": [{"infix": _word(t), "tree": t.to_json()} for t in trees],
        }
    if args.format == "parens":
        return "\n".join(t.to_parens() for t in trees)
    return "\n".join(_word(t) for t in trees)


def _tree_text(t):
    if isinstance(t, RankedPlaneTree):
        return _word(t)
    if isinstance(t, RankedTree):
        return _format_word(t.word())
    if isinstance(t, TreeShape):
        return t.plane.to_parens()
    return t.to_parens()


def _tree_json(t):
    if isinstance(t, RankedTree):
        return t.embedding.to_json()
    if isinstance(t, TreeShape):
        return t.plane.to_json()
    return t.to_json()


def cmd_enumerate(args):
    trees = enumerate_trees(args.n, args.family)
    if args.format == "json":
        return {
            "n": args.n,
            "family": args.family,
            "count": str(len(trees)),
            "trees": [{"text": _tree_text(t), "tree": _tree_json(t)} for t in trees],
        }
    return "\n".join(_tree_text(t) for t in trees)


def cmd_prob(args):
    model = _model_from(args)
    tree = lift(parse_permutation(args.tree))
    method = "direct"
    if args.level == "rpt":
        p = model.rpt_probability(tree)
    else:
        if args.level == "plane":
            lifted, brute, target = lift_to_plane, plane_probability, tree.plane()
        else:
            lifted, brute, target = lift_to_shape, shape_probability, TreeShape(tree.plane())
        try:
            p = lifted(model, target)
            method = "theorem"
        except TheoremInapplicableError:
            check_guard(tree.n_leaves, "ranked_plane")
            p = brute(model, target)
            method = "enumeration"
    if args.format == "json":
        return {
            "model": model.label,
            "tree": _word(tree),
            "level": args.level,
            "probability": fstr(p),
            "method": method,
        }
    return fstr(p)


def cmd_count(args):
    c = family_count(args.n, args.family)
    if args.format == "text":
        return str(c)
    return {"n": args.n, "family": args.family, "count": str(c)}


def cmd_lift(args):
    perm = parse_permutation(args.perm)
    if args.canonical:
        perm = canonical_ranked_word(perm)
    tree = bst_insert_all(perm) if args.method == "bst" else lift(perm)
    if args.format == "json":
        return {
            "permutation": format_permutation(perm),
            "method": args.method,
            "infix": _word(tree),
            "parens": tree.to_parens(),
            "tree": tree.to_json(),
        }
    return f"{tree.to_parens()} {_word(tree)}"


def cmd_check(args):
    model = _model_from(args)
    check = check_split_exchangeable if args.property == "split-exchangeable" else check_plane_invariant
    result = check(model, args.n)
    if args.format == "json":
        out = result.to_json()
    else:
        out = ("true" if result.holds else "false") + (
            "" if result.witness is None else "\n" + json.dumps(result.to_json()["counterexample"])
        )
    return out, 0 if result.holds else 1


def cmd_thompson(args):
    pair = make_pair(args.domain, args.range)
    f = pl_map(pair)
    uniform, yule = pair_weights(pair)
    out = {"domain": pair.domain_tree.to_parens(), "range": pair.range_tree.to_parens(), "size": pair.size}
    out.update(f.to_json())
    out["uniform_weight"] = fstr(uniform)
    out["yule_weight"] = fstr(yule)
    if args.eval is not None:
        try:
            x = Fraction(args.eval)
        except (ValueError, ZeroDivisionError):
            raise ArborError(f"malformed rational {args.eval!r}") from None
        try:
            out["eval"] = {"x": fstr(x), "y": fstr(f(x))}
        except ValueError as exc:
            raise ArborError(str(exc)) from None
    if args.format == "text":
        lines = [
            "breakpoints " + " ".join(f"({x},{y})" for x, y in out["breakpoints"]),
            "slopes " + " ".join(out["slopes"]),
            f"weights uniform={out['uniform_weight']} yule={out['yule_weight']}",
        ]
        if "eval" in out:
            lines.append(f"f({out['eval']['x']}) = {out['eval']['y']}")
        return "\n".join(lines)
    return out


def cmd_fill(args):
    est = estimate_fill_limit(args.source, args.n, args.draws, args.seed)
    if args.format == "text":
        return f"{est.mean:.6f} +- {est.stderr:.6f}"
    out = est.to_json()
    out["seed"] = args.seed
    return out


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0, help="random seed (64-bit integer)")
    common.add_argument("--out", default="-", help="output path, '-' for stdout")

    def fmt(p, choices=("text", "json"), default="text"):
        p.add_argument("--format", choices=choices, default=default)

    parser = argparse.ArgumentParser(prog="arbor", description="Random binary trees: counting, models, bijections.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", parents=[common], help="draw ranked plane trees from a splitting model")
    _model_args(p)
    p.add_argument("--n", type=_positive, required=True, help="number of leaves")
    p.add_argument("--draws", type=_positive, default=1)
    fmt(p, ("infix", "text", "parens", "json"), "infix")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("enumerate", parents=[common], help="list every tree of a family")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--family", choices=FAMILIES, required=True)
    fmt(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("prob", parents=[common], help="exact probability of a tree under a model")
    _model_args(p)
    p.add_argument("--tree", required=True, help="in-fix word of a ranked plane tree, e.g. 213")
    p.add_argument("--level", choices=("rpt", "plane", "shape"), default="rpt")
    fmt(p)
    p.set_defaults(func=cmd_prob)

    p = sub.add_parser("count", parents=[common], help="number of trees in a family")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--family", choices=FAMILIES, required=True)
    fmt(p, default="json")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("lift", parents=[common], help="ranked plane tree of a permutation")
    p.add_argument("--perm", required=True, help="permutation word, e.g. 213 or 10,2,...")
    p.add_argument("--method", choices=("infix", "bst"), default="infix")
    p.add_argument("--canonical", action="store_true", help="use the canonical ranked-tree word first")
    fmt(p)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("check", parents=[common], help="test a model property exhaustively")
    _model_args(p)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--property", choices=("split-exchangeable", "plane-invariant"), required=True)
    fmt(p, default="json")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("thompson", parents=[common], help="PL map of a tree pair diagram")
    p.add_argument("--domain", required=True, help="parenthesised plane tree, e.g. '((..).)'")
    p.add_argument("--range", required=True)
    p.add_argument("--eval", default=None, help="rational point in [0,1] to evaluate")
    fmt(p, default="json")
    p.set_defaults(func=cmd_thompson)

    p = sub.add_parser("fill", parents=[common], help="Monte Carlo mean of -ln Q / n")
    p.add_argument("--source", choices=("uniform_plane", "yule"), required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--draws", type=_positive, default=200)
    fmt(p, default="json")
    p.set_defaults(func=cmd_fill)
    return parser


def _emit(payload, out: str):
    text = payload if isinstance(payload, str) else json.dumps(payload, ensure_ascii=False)
    if not text.endswith("\n"):
        text += "\n"
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except ArborError as exc:
        kind = next(label for cls, label in _KINDS if isinstance(exc, cls))
        print(f"arbor: {kind}: {exc}", file=sys.stderr)
        return 2
    code = 0
    if isinstance(result, tuple):
        result, code = result
    _emit(result, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
