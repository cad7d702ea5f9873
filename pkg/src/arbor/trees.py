"""The four classes of finite rooted binary trees.

Trees are immutable values backed by nested tuples:

* plane structure  -- ``None`` for a leaf, ``(left, right)`` for an internal node
* ranked structure -- ``None`` for a leaf, ``(rank, left, right)`` for an internal node

Nodes are addressed by strings over ``"L"`` and ``"R"``; the empty string is
the root.  Leaves are always listed left to right, which is also the order of
the intervals of the associated partition of [0, 1].
"""
from __future__ import annotations

from typing import Iterator, Union

from .errors import InvalidSplitError, InvalidTreeError

Address = str

LEAF_CHARS = ("·", ".")


def format_address(address: Address) -> str:
    return "ρ" + address


# -- structure helpers --------------------------------------------------------


def _count_leaves(s) -> int:
    if s is None:
        return 1
    return _count_leaves(s[0]) + _count_leaves(s[1])


def _check_plane(s) -> int:
    if s is None:
        return 1
    if not (isinstance(s, tuple) and len(s) == 2):
        raise InvalidTreeError(f"not a plane tree structure: {s!r}")
    return _check_plane(s[0]) + _check_plane(s[1])


def _strip_ranks(s):
    if s is None:
        return None
    return (_strip_ranks(s[1]), _strip_ranks(s[2]))


def _parens(s) -> str:
    if s is None:
        return "·"
    return "(" + _parens(s[0]) + _parens(s[1]) + ")"


def _plane_json(s):
    if s is None:
        return None
    return {"rank": None, "left": _plane_json(s[0]), "right": _plane_json(s[1])}


def _ranked_json(s):
    if s is None:
        return None
    return {"rank": s[0], "left": _ranked_json(s[1]), "right": _ranked_json(s[2])}


def _walk(s, address: Address, ranked: bool) -> Iterator[tuple[Address, object]]:
    # preorder; yields (address, structure) pairs
    stack = [(address, s)]
    while stack:
        a, node = stack.pop()
        yield a, node
        if node is not None:
            left, right = (node[1], node[2]) if ranked else (node[0], node[1])
            stack.append((a + "R", right))
            stack.append((a + "L", left))


def _leaves_in_order(s, ranked: bool, address: Address = "") -> list[Address]:
    out: list[Address] = []
    stack = [(address, s)]
    while stack:
        a, node = stack.pop()
        if node is None:
            out.append(a)
            continue
        left, right = (node[1], node[2]) if ranked else (node[0], node[1])
        stack.append((a + "R", right))
        stack.append((a + "L", left))
    return out


def _descend(s, address: Address, ranked: bool):
    node = s
    for step in address:
        if node is None:
            raise KeyError(address)
        off = 1 if ranked else 0
        if step == "L":
            node = node[off]
        elif step == "R":
            node = node[off + 1]
        else:
            raise KeyError(address)
    return node


# -- plane trees --------------------------------------------------------------


class PlaneTree:
    """A rooted binary tree whose two subtrees at each node are ordered."""

    __slots__ = ("structure", "n_leaves", "_hash")

    def __init__(self, structure=None):
        self.structure = structure
        self.n_leaves = _check_plane(structure)
        self._hash = None

    @classmethod
    def _make(cls, structure, n_leaves: int | None = None) -> "PlaneTree":
        t = cls.__new__(cls)
        t.structure = structure
        t.n_leaves = _count_leaves(structure) if n_leaves is None else n_leaves
        t._hash = None
        return t

    @classmethod
    def leaf(cls) -> "PlaneTree":
        return cls._make(None, 1)

    @classmethod
    def join(cls, left: "PlaneTree", right: "PlaneTree") -> "PlaneTree":
        return cls._make((left.structure, right.structure), left.n_leaves + right.n_leaves)

    @classmethod
    def from_parens(cls, text: str) -> "PlaneTree":
        """Parse ``"((··)·)"``-style text; ``.`` is accepted for a leaf."""
        text = "".join(text.split())
        if not text:
            raise InvalidTreeError("empty tree literal")
        stack: list[list] = []
        result = None
        done = False
        for pos, ch in enumerate(text):
            if done:
                raise InvalidTreeError(f"trailing characters at {pos} in {text!r}")
            if ch == "(":
                stack.append([])
                continue
            if ch in LEAF_CHARS:
                item = None
            elif ch == ")":
                if not stack or len(stack[-1]) != 2:
                    raise InvalidTreeError(f"unbalanced or non-binary node at {pos} in {text!r}")
                item = tuple(stack.pop())
            else:
                raise InvalidTreeError(f"unexpected character {ch!r} in {text!r}")
            if stack:
                if len(stack[-1]) == 2:
                    raise InvalidTreeError(f"node with more than two children in {text!r}")
                stack[-1].append(item)
            else:
                result = item
                done = True
        if stack or not done:
            raise InvalidTreeError(f"unbalanced tree literal {text!r}")
        return cls(result)

    @classmethod
    def from_json(cls, obj) -> "PlaneTree":
        def build(o):
            if o is None:
                return None
            return (build(o["left"]), build(o["right"]))

        return cls(build(obj))

    @property
    def n_internal(self) -> int:
        return self.n_leaves - 1

    def is_leaf(self) -> bool:
        return self.structure is None

    @property
    def left(self) -> "PlaneTree":
        if self.structure is None:
            raise InvalidTreeError("a leaf has no children")
        return PlaneTree._make(self.structure[0])

    @property
    def right(self) -> "PlaneTree":
        if self.structure is None:
            raise InvalidTreeError("a leaf has no children")
        return PlaneTree._make(self.structure[1])

    def subtree(self, address: Address) -> "PlaneTree":
        return PlaneTree._make(_descend(self.structure, address, False))

    def nodes(self) -> list[Address]:
        return [a for a, _ in _walk(self.structure, "", False)]

    def internal_nodes(self) -> list[Address]:
        """Internal node addresses in preorder."""
        return [a for a, s in _walk(self.structure, "", False) if s is not None]

    def leaves(self) -> list[Address]:
        return _leaves_in_order(self.structure, False)

    def mirror(self) -> "PlaneTree":
        def flip(s):
            return None if s is None else (flip(s[1]), flip(s[0]))

        return PlaneTree._make(flip(self.structure), self.n_leaves)

    def to_parens(self) -> str:
        return _parens(self.structure)

    def to_json(self):
        return _plane_json(self.structure)

    def __eq__(self, other):
        return isinstance(other, PlaneTree) and self.structure == other.structure

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("plane", self.structure))
        return self._hash

    def __repr__(self):
        return f"PlaneTree({self.to_parens()!r})"

    __str__ = to_parens


# -- ranked plane trees -------------------------------------------------------


def _check_ranked(s) -> list[int]:
    # returns ranks in preorder, validating increase along every path
    ranks: list[int] = []
    stack = [(s, 0)]
    while stack:
        node, parent_rank = stack.pop()
        if node is None:
            continue
        if not (isinstance(node, tuple) and len(node) == 3 and isinstance(node[0], int)):
            raise InvalidTreeError(f"not a ranked tree structure: {node!r}")
        if node[0] <= parent_rank:
            raise InvalidTreeError("ranks must increase along every root-to-leaf path")
        ranks.append(node[0])
        stack.append((node[2], node[0]))
        stack.append((node[1], node[0]))
    if sorted(ranks) != list(range(1, len(ranks) + 1)):
        raise InvalidTreeError(f"ranks {sorted(ranks)} are not 1..{len(ranks)}")
    return ranks


class RankedPlaneTree:
    """A plane tree whose internal nodes carry their splitting order 1..n-1."""

    __slots__ = ("structure", "n_leaves", "_hash")

    def __init__(self, structure=None):
        ranks = _check_ranked(structure)
        self.structure = structure
        self.n_leaves = len(ranks) + 1
        self._hash = None

    @classmethod
    def _make(cls, structure, n_leaves: int | None = None) -> "RankedPlaneTree":
        t = cls.__new__(cls)
        t.structure = structure
        t.n_leaves = _count_ranked_leaves(structure) if n_leaves is None else n_leaves
        t._hash = None
        return t

    @classmethod
    def single(cls) -> "RankedPlaneTree":
        """The one-node tree: the root, unsplit."""
        return cls._make(None, 1)

    @classmethod
    def from_ranks(cls, ranks: dict[Address, int]) -> "RankedPlaneTree":
        used = set()

        def build(a):
            if a not in ranks:
                return None
            used.add(a)
            return (ranks[a], build(a + "L"), build(a + "R"))

        s = build("")
        if used != set(ranks):
            raise InvalidTreeError(f"addresses not reachable from the root: {sorted(set(ranks) - used)}")
        return cls(s)

    @classmethod
    def from_history(cls, choices) -> "RankedPlaneTree":
        """Replay a splitting history given as left-to-right leaf indices.

        At step ``i`` (1-based) the leaf at position ``choices[i-1]`` among the
        ``i`` current leaves is split and receives rank ``i``.
        """
        leaves = [""]
        ranks: dict[Address, int] = {}
        for i, idx in enumerate(choices, start=1):
            idx = int(idx)
            if not 0 <= idx < len(leaves):
                raise InvalidSplitError(f"step {i}: leaf index {idx} out of range for {len(leaves)} leaves")
            a = leaves[idx]
            ranks[a] = i
            leaves[idx : idx + 1] = [a + "L", a + "R"]
        return cls._from_rank_map(ranks, len(leaves))

    @classmethod
    def _from_rank_map(cls, ranks, n_leaves):
        def build(a):
            r = ranks.get(a)
            if r is None:
                return None
            return (r, build(a + "L"), build(a + "R"))

        return cls._make(build(""), n_leaves)

    @classmethod
    def from_json(cls, obj) -> "RankedPlaneTree":
        def build(o):
            if o is None:
                return None
            return (o["rank"], build(o["left"]), build(o["right"]))

        return cls(build(obj))

    @property
    def n_internal(self) -> int:
        return self.n_leaves - 1

    def is_leaf(self) -> bool:
        return self.structure is None

    @property
    def root_rank(self) -> int | None:
        return None if self.structure is None else self.structure[0]

    def rank_map(self) -> dict[Address, int]:
        return {a: s[0] for a, s in _walk(self.structure, "", True) if s is not None}

    def history(self) -> list[Address]:
        """Addresses of the split leaves, in splitting order."""
        rm = self.rank_map()
        return sorted(rm, key=rm.__getitem__)

    def history_indices(self) -> list[int]:
        """Inverse of :meth:`from_history`."""
        leaves = [""]
        out = []
        for a in self.history():
            idx = leaves.index(a)
            out.append(idx)
            leaves[idx : idx + 1] = [a + "L", a + "R"]
        return out

    def nodes(self) -> list[Address]:
        return [a for a, _ in _walk(self.structure, "", True)]

    def internal_nodes(self) -> list[Address]:
        return [a for a, s in _walk(self.structure, "", True) if s is not None]

    def leaves(self) -> list[Address]:
        return _leaves_in_order(self.structure, True)

    def split_leaf(self, leaf: Address) -> "RankedPlaneTree":
        """Split ``leaf`` into an internal node with the next rank and two new leaves."""
        new_rank = self.n_leaves

        def rebuild(s, path):
            if not path:
                if s is not None:
                    raise InvalidSplitError(f"{format_address(leaf)} is an internal node")
                return (new_rank, None, None)
            if s is None:
                raise InvalidSplitError(f"{format_address(leaf)} is not a node of the tree")
            step, rest = path[0], path[1:]
            if step == "L":
                return (s[0], rebuild(s[1], rest), s[2])
            if step == "R":
                return (s[0], s[1], rebuild(s[2], rest))
            raise InvalidSplitError(f"bad address character {step!r}")

        return RankedPlaneTree._make(rebuild(self.structure, leaf), self.n_leaves + 1)

    def plane(self) -> PlaneTree:
        return PlaneTree._make(_strip_ranks(self.structure), self.n_leaves)

    def infix(self) -> tuple[int, ...]:
        """Ranks read in symmetric (in-fix) order."""
        out: list[int] = []
        stack: list = []
        node = self.structure
        while stack or node is not None:
            while node is not None:
                stack.append(node)
                node = node[1]
            node = stack.pop()
            out.append(node[0])
            node = node[2]
        return tuple(out)

    def to_json(self):
        return _ranked_json(self.structure)

    def to_parens(self) -> str:
        return _parens(_strip_ranks(self.structure))

    def __eq__(self, other):
        return isinstance(other, RankedPlaneTree) and self.structure == other.structure

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("rpt", self.structure))
        return self._hash

    def __repr__(self):
        word = self.infix()
        return f"RankedPlaneTree({_format_word(word)!r})"


def _count_ranked_leaves(s) -> int:
    if s is None:
        return 1
    return _count_ranked_leaves(s[1]) + _count_ranked_leaves(s[2])


def _format_word(word) -> str:
    if not word:
        return "ε"
    if max(word) <= 9:
        return "".join(map(str, word))
    return ",".join(map(str, word))


# -- quotient classes ---------------------------------------------------------


def _foata(s):
    if s is None:
        return None
    left, right = _foata(s[1]), _foata(s[2])
    if left is None and right is not None:
        left, right = right, left
    elif left is not None and right is not None and left[0] > right[0]:
        left, right = right, left
    return (s[0], left, right)


def _canonical_shape(s):
    """Returns (canonical structure, leaf count, canonical string)."""
    if s is None:
        return None, 1, "·"
    a = _canonical_shape(s[0])
    b = _canonical_shape(s[1])
    if (b[1], b[2]) < (a[1], a[2]):
        a, b = b, a
    return (a[0], b[0]), a[1] + b[1], "(" + a[2] + b[2] + ")"


class RankedTree:
    """A ranked tree with planarity forgotten, held in Foata standard form.

    In standard form the internal child of a node precedes a leaf child, and of
    two internal children the lower-ranked one is on the left.
    """

    __slots__ = ("embedding",)

    def __init__(self, tree: RankedPlaneTree):
        self.embedding = RankedPlaneTree._make(_foata(tree.structure), tree.n_leaves)

    @property
    def n_leaves(self) -> int:
        return self.embedding.n_leaves

    @property
    def structure(self):
        return self.embedding.structure

    def word(self) -> tuple[int, ...]:
        return self.embedding.infix()

    def is_canonical_form(self) -> bool:
        return _foata(self.embedding.structure) == self.embedding.structure

    def __eq__(self, other):
        return isinstance(other, RankedTree) and self.embedding == other.embedding

    def __hash__(self):
        return hash(("ranked", self.embedding.structure))

    def __repr__(self):
        return f"RankedTree({_format_word(self.word())!r})"


class TreeShape:
    """A tree with both ranks and planarity forgotten.

    Held as a canonical plane tree: at every node the smaller subtree is on
    the left, ties broken by the canonical parenthesis string.
    """

    __slots__ = ("plane", "_key")

    def __init__(self, tree: PlaneTree):
        s, n, key = _canonical_shape(tree.structure)
        self.plane = PlaneTree._make(s, n)
        self._key = key

    @classmethod
    def from_parens(cls, text: str) -> "TreeShape":
        return cls(PlaneTree.from_parens(text))

    @property
    def n_leaves(self) -> int:
        return self.plane.n_leaves

    @property
    def structure(self):
        return self.plane.structure

    def key(self) -> str:
        return self._key

    def to_parens(self) -> str:
        return self._key

    def __eq__(self, other):
        return isinstance(other, TreeShape) and self._key == other._key

    def __hash__(self):
        return hash(("shape", self._key))

    def __lt__(self, other):
        return (self.n_leaves, self._key) < (other.n_leaves, other._key)

    def __repr__(self):
        return f"TreeShape({self._key!r})"


AnyTree = Union[PlaneTree, RankedPlaneTree, RankedTree, TreeShape]


def plane_structure(tree: AnyTree):
    """Unranked nested-tuple structure of any tree class."""
    if isinstance(tree, PlaneTree):
        return tree.structure
    if isinstance(tree, RankedPlaneTree):
        return _strip_ranks(tree.structure)
    if isinstance(tree, RankedTree):
        return _strip_ranks(tree.embedding.structure)
    if isinstance(tree, TreeShape):
        return tree.plane.structure
    raise TypeError(f"not a tree: {type(tree).__name__}")


def as_plane(tree: AnyTree) -> PlaneTree:
    if isinstance(tree, PlaneTree):
        return tree
    return PlaneTree._make(plane_structure(tree))


# -- structural statistics ----------------------------------------------------


def subtree_internal_sizes(tree: AnyTree) -> dict[Address, int]:
    """Number of internal nodes below (and including) each internal node."""
    out: dict[Address, int] = {}

    def go(s, a):
        if s is None:
            return 0
        k = 1 + go(s[0], a + "L") + go(s[1], a + "R")
        out[a] = k
        return k

    go(plane_structure(tree), "")
    return out


def cherries(tree: AnyTree) -> int:
    """Internal nodes whose two children are both leaves."""
    return sum(
        1
        for _, s in _walk(plane_structure(tree), "", False)
        if s is not None and s[0] is None and s[1] is None
    )


def symmetry_nodes(tree: AnyTree) -> int:
    """Internal nodes whose left and right subtrees are isomorphic shapes."""
    count = 0

    def go(s):
        nonlocal count
        if s is None:
            return 1, "·"
        a, b = go(s[0]), go(s[1])
        if a == b:
            count += 1
        if b < a:
            a, b = b, a
        return a[0] + b[0], "(" + a[1] + b[1] + ")"

    go(plane_structure(tree))
    return count


def project(tree: RankedPlaneTree, target: str):
    """Forget ranks (``"plane"``), planarity (``"ranked"``) or both (``"shape"``)."""
    if target == "plane":
        return tree.plane()
    if target == "ranked":
        return RankedTree(tree)
    if target == "shape":
        return TreeShape(tree.plane())
    raise ValueError(f"unknown projection target {target!r}")


def preorder_ranking(tree: AnyTree) -> RankedPlaneTree:
    """Some ranked plane tree projecting onto ``tree`` (ranks in preorder)."""
    counter = 0

    def go(s):
        nonlocal counter
        if s is None:
            return None
        counter += 1
        r = counter
        return (r, go(s[0]), go(s[1]))

    s = plane_structure(tree)
    return RankedPlaneTree._make(go(s), _count_leaves(s))


def rankings(tree: AnyTree) -> Iterator[RankedPlaneTree]:
    """All ranked plane trees projecting onto the plane tree ``tree``.

    Enumerates the valid splitting orders directly: at each step, any leaf of
    the partially built tree that is internal in ``tree`` may be split next.
    """
    target = plane_structure(tree)
    n = _count_leaves(target)
    internal = {a for a, s in _walk(target, "", False) if s is not None}

    def go(frontier: tuple[Address, ...], ranks: dict[Address, int], step: int):
        if step > n - 1:
            yield RankedPlaneTree._from_rank_map(dict(ranks), n)
            return
        for i, a in enumerate(frontier):
            ranks[a] = step
            kids = tuple(c for c in (a + "L", a + "R") if c in internal)
            yield from go(frontier[:i] + frontier[i + 1 :] + kids, ranks, step + 1)
            del ranks[a]

    start = ("",) if target is not None else ()
    yield from go(start, {}, 1)


def embeddings(tree: AnyTree) -> list[PlaneTree]:
    """The distinct plane trees sharing the shape of ``tree``."""

    def go(s):
        if s is None:
            return [None]
        out = set()
        for a in go(s[0]):
            for b in go(s[1]):
                out.add((a, b))
                out.add((b, a))
        return sorted(out, key=_parens)

    s = plane_structure(tree)
    n = _count_leaves(s)
    return [PlaneTree._make(x, n) for x in go(s)]
