"""Finite trees with coding nodes: level structure, restrictions, cuts.

Trees here follow the weak convention: a tree is a node set together with an
explicit set of levels, closed under restriction to any of its levels.  A
node whose length is not a level is a construction error.  Coding nodes are
a distinguished sub-sequence of members with strictly increasing lengths.
"""

from __future__ import annotations

import math
from typing import Iterable

from . import core
from .core import Node, restrict, meet
from .errors import DepthError, DomainError, StructureError


class CodingTree:
    """A finite tree with levels and coding nodes.

    nodes   -- frozenset of Node, every length a member of `levels`
    levels  -- strictly increasing tuple of lengths
    coding  -- tuple of coding nodes, strictly increasing lengths
    """

    __slots__ = ("nodes", "levels", "coding")

    def __init__(self, nodes: Iterable[Node], levels: Iterable[int],
                 coding: Iterable[Node] = (), validate: bool = True):
        self.nodes = frozenset(nodes)
        self.levels = tuple(levels)
        self.coding = tuple(coding)
        if validate:
            self._validate()

    def _validate(self):
        if list(self.levels) != sorted(set(self.levels)):
            raise StructureError(f"levels not strictly increasing: {self.levels}")
        level_set = set(self.levels)
        for t in self.nodes:
            if t.len not in level_set:
                raise StructureError(f"node {t.text()!r} has non-level length {t.len}")
            for l in self.levels:
                if l >= t.len:
                    break
                if restrict(t, l) not in self.nodes:
                    raise StructureError(
                        f"tree not closed: {t.text()!r} restricted to {l} missing")
        lengths = [c.len for c in self.coding]
        if lengths != sorted(set(lengths)):
            raise StructureError("coding node lengths must strictly increase")
        for c in self.coding:
            if c not in self.nodes:
                raise StructureError(f"coding node {c.text()!r} not in tree")
            if c.len not in level_set:
                raise StructureError(f"coding length {c.len} not a level")

    def __eq__(self, other):
        return (
            isinstance(other, CodingTree)
            and self.nodes == other.nodes
            and self.levels == other.levels
            and self.coding == other.coding
        )

    def __hash__(self):
        return hash((self.nodes, self.levels, self.coding))

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, t: Node):
        return t in self.nodes

    def __repr__(self):
        return (f"CodingTree({len(self.nodes)} nodes, levels={list(self.levels)}, "
                f"coding=[{', '.join(c.text() or 'e' for c in self.coding)}])")

    def level(self, length: int) -> core.LevelSet:
        """All members of the given length, as a level set."""
        return core.LevelSet((t for t in self.nodes if t.len == length), length)

    def coding_at(self, length: int) -> Node | None:
        for c in self.coding:
            if c.len == length:
                return c
        return None

    def max_nodes(self) -> frozenset:
        """The set of maximal nodes (no proper extension in the tree)."""
        return max_nodes(self.nodes)

    def to_json_dict(self) -> dict:
        return {
            "levels": list(self.levels),
            "nodes": sorted(t.text() for t in sorted(self.nodes, key=_tri_key)),
            "coding": [c.text() for c in self.coding],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "CodingTree":
        return cls(
            (Node.from_text(s) for s in doc.get("nodes", [])),
            doc.get("levels", []),
            (Node.from_text(s) for s in doc.get("coding", [])),
        )


def _tri_key(t: Node):
    return (t.len, t.lex_key())


EMPTY_TREE = CodingTree((), (), ())


class FiniteApprox(CodingTree):
    """A finite approximation: a coding tree tagged with its coding-level count.

    Whether the tree really is strongly similar to an initial segment of the
    standard coding tree is checked by similarity.is_approximation; this class
    only carries the shape.
    """

    __slots__ = ()

    @property
    def k(self) -> int:
        return len(self.coding)

    @classmethod
    def from_tree(cls, tree: CodingTree) -> "FiniteApprox":
        return cls(tree.nodes, tree.levels, tree.coding, validate=False)


def max_nodes(nodes: Iterable[Node]) -> frozenset:
    """Nodes of a finite set with no proper extension inside the set."""
    nodes = set(nodes)
    out = set()
    for t in nodes:
        if not any(t is not u and core.is_initial_segment(t, u) for u in nodes):
            out.add(t)
    return frozenset(out)


def meet_closure(nodes: Iterable[Node]) -> frozenset:
    """Smallest superset closed under pairwise meets."""
    closed = set(nodes)
    frontier = list(closed)
    while frontier:
        added = []
        items = list(closed)
        for s in frontier:
            for t in items:
                m = meet(s, t)
                if m not in closed:
                    closed.add(m)
                    added.append(m)
        frontier = added
    return frozenset(closed)


def is_meet_closed(nodes: Iterable[Node]) -> bool:
    items = list(nodes)
    closed = set(items)
    for i, s in enumerate(items):
        for t in items[i + 1:]:
            if meet(s, t) not in closed:
                return False
    return True


def level_closure(nodes: Iterable[Node]) -> tuple:
    """Close a node set under restriction to all member lengths.

    Returns (frozenset of nodes, tuple of levels).
    """
    nodes = set(nodes)
    levels = sorted({t.len for t in nodes})
    out = set(nodes)
    for t in nodes:
        for l in levels:
            if l >= t.len:
                break
            out.add(restrict(t, l))
    return frozenset(out), tuple(levels)


def cut(nodes: Iterable[Node], l: int) -> frozenset:
    """Nodes below length l together with the length-l truncations of the rest."""
    out = set()
    for t in nodes:
        out.add(t if t.len < l else restrict(t, l))
    return frozenset(out)


def plus(tree, ambient: CodingTree | None = None) -> frozenset:
    """The node set together with both one-bit extensions of each maximal node.

    When an ambient tree is given, the maximal nodes must sit on one of its
    levels, so that they split in the ambient initial-segment closure.
    """
    nodes = set(tree.nodes if isinstance(tree, CodingTree) else tree)
    maxes = max_nodes(nodes)
    if ambient is not None:
        for s in maxes:
            if s.len not in ambient.levels:
                raise StructureError(
                    f"maximal node {s.text()!r} does not sit on an ambient level")
    out = set(nodes)
    for s in maxes:
        out.add(s.append(0))
        out.add(s.append(1))
    return frozenset(out)


def restriction(tree: CodingTree, k: int) -> FiniteApprox:
    """The subtree of all nodes shorter than the k-th coding node's length.

    For k equal to the number of coding nodes the tree is returned as-is
    (a finite truncation is its own deepest restriction); larger k raises.
    """
    n = len(tree.coding)
    if k < 0 or k > n:
        raise DepthError(f"restriction to {k} coding levels, tree has {n}")
    if k == 0:
        return FiniteApprox((), (), ())
    if k == n:
        return FiniteApprox.from_tree(tree)
    l_k = tree.coding[k].len
    nodes = {t for t in tree.nodes if t.len < l_k}
    levels = tuple(l for l in tree.levels if l < l_k)
    return FiniteApprox(nodes, levels, tree.coding[:k], validate=False)


def le_fin(a: CodingTree, b: CodingTree) -> bool:
    """Subtree order with maximal nodes preserved.

    a <=_fin b iff a's nodes are nodes of b, a's coding nodes are coding in b,
    and every maximal node of a is maximal in b.
    """
    if not a.nodes:
        return True
    if not a.nodes <= b.nodes:
        return False
    if not set(a.coding) <= set(b.coding):
        return False
    return a.max_nodes() <= b.max_nodes()


def depth_in(tree: CodingTree, a: CodingTree):
    """Least k with a <=_fin restriction(tree, k), or math.inf if none exists."""
    for k in range(len(tree.coding) + 1):
        if le_fin(a, restriction(tree, k)):
            return k
    return math.inf


def passing_number(t: Node, s: Node) -> int:
    """The bit of the longer node t at the shorter node s's length."""
    if s.len >= t.len:
        raise DomainError(
            f"passing number needs |s| < |t|, got {s.len} >= {t.len}")
    return t[s.len]


def is_strong_subtree(sub: CodingTree, tree: CodingTree) -> bool:
    """True iff sub lies in tree and splits fully at every non-final level.

    Every node of sub at a non-final sub-level must have extensions in sub
    passing through both of its one-bit successors.
    """
    if not sub.nodes <= tree.nodes:
        return False
    levels = sub.levels
    for t in sub.nodes:
        idx = levels.index(t.len)
        if idx == len(levels) - 1:
            continue
        for bit in (0, 1):
            want = t.append(bit)
            if not any(core.is_initial_segment(want, u) for u in sub.nodes):
                return False
    return True
