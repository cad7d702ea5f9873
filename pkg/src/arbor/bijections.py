"""Permutations, binary search tree insertion and dyadic partitions as
alternative encodings of ranked plane trees."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidPermutationError
from .partitions import Partition, leaf_interval
from .trees import RankedPlaneTree, _format_word

Permutation = tuple[int, ...]


def check_permutation(word: Iterable[int]) -> Permutation:
    w = tuple(int(x) for x in word)
    if sorted(w) != list(range(1, len(w) + 1)):
        raise InvalidPermutationError(f"{w} is not a permutation of 1..{len(w)}")
    return w


def parse_permutation(text: str) -> Permutation:
    """Parse ``"213"`` (single digits) or ``"10,2,3,..."``; ``""``/``"ε"`` is empty."""
    text = text.strip()
    if text in ("", "ε", "e", "-"):
        return ()
    try:
        if "," in text:
            letters = [int(x) for x in text.split(",") if x.strip()]
        else:
            letters = [int(ch) for ch in text]
    except ValueError:
        raise InvalidPermutationError(f"malformed permutation literal {text!r}") from None
    return check_permutation(letters)


def format_permutation(word: Sequence[int]) -> str:
    return _format_word(tuple(word))


def _decompose(word: Permutation):
    i = word.index(min(word))
    return word[:i], word[i], word[i + 1 :]


def lift(perm: Sequence[int]) -> RankedPlaneTree:
    """Increasing binary tree of a permutation: the minimum letter is the root,
    the letters to its left and right build the two subtrees."""
    word = check_permutation(perm)

    def build(w):
        if not w:
            return None
        left, root, right = _decompose(w)
        return (root, build(left), build(right))

    return RankedPlaneTree._make(build(word), len(word) + 1)


def read_infix(tree: RankedPlaneTree) -> Permutation:
    return tree.infix()


def canonical_ranked_word(perm: Sequence[int]) -> Permutation:
    """Representative word of the ranked (non-plane) tree of ``perm``.

    The decomposition around the minimum letter is flipped whenever the left
    part is empty while the right is not, or when both are non-empty and the
    left part has the larger minimum.
    """
    word = check_permutation(perm)

    def canon(w):
        if not w:
            return ()
        left, root, right = _decompose(w)
        left, right = canon(left), canon(right)
        if (not left and right) or (left and right and min(left) > min(right)):
            left, right = right, left
        return left + (root,) + right

    return canon(word)


def is_canonical(perm: Sequence[int]) -> bool:
    word = check_permutation(perm)
    return canonical_ranked_word(word) == word


def bst_insert_all(perm: Sequence[int]) -> RankedPlaneTree:
    """Grow a binary search tree by inserting the letters of ``perm`` in order.

    The node created by the i-th insertion gets rank i, so the in-fix reading
    of the result is the inverse permutation and :func:`bst_keys` recovers
    each node's key.
    """
    word = check_permutation(perm)
    keys: dict[str, int] = {}
    ranks: dict[str, int] = {}
    for i, key in enumerate(word, start=1):
        a = ""
        while a in keys:
            a += "L" if key < keys[a] else "R"
        keys[a] = key
        ranks[a] = i
    return RankedPlaneTree._from_rank_map(ranks, len(word) + 1)


def bst_keys(tree: RankedPlaneTree) -> dict[str, int]:
    """Search-tree key of each internal node: its position in in-fix order."""
    order = []
    stack: list = []
    node, addr = tree.structure, ""
    while stack or node is not None:
        while node is not None:
            stack.append((node, addr))
            node, addr = node[1], addr + "L"
        node, addr = stack.pop()
        order.append(addr)
        node, addr = node[2], addr + "R"
    return {a: i for i, a in enumerate(order, start=1)}


def tree_to_partition(tree: RankedPlaneTree) -> tuple[tuple[Fraction, ...], Partition]:
    """Replay the splitting history as midpoint bisections of [0, 1].

    Returns the endpoint sequence ``X_0, X_1, ...`` in insertion order and the
    sorted partition.
    """
    seq = [Fraction(0), Fraction(1)]
    for a in tree.history():
        lo, hi = leaf_interval(a)
        seq.append((lo + hi) / 2)
    return tuple(seq), Partition(tuple(sorted(seq)))
