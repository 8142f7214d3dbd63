"""Finite 0/1 sequences (tree nodes) and the node-level orderings.

A node is a finite binary sequence.  Coordinate 0 comes first, so the text
form "110" is the sequence (1, 1, 0).  Storage is bit-packed: coordinate i
lives at bit i of an int, so a node is one machine word up to the configured
maximum depth.

Comparator functions return LESS / EQUAL / GREATER (usable with
functools.cmp_to_key); lex_cmp additionally returns COMPARABLE for pairs
where one node is an initial segment of the other.
"""

from __future__ import annotations

import os
from functools import lru_cache

from .errors import DepthError, DomainError

DEFAULT_MAX_DEPTH = 64

LESS = -1
EQUAL = 0
GREATER = 1
COMPARABLE = 2


def max_depth() -> int:
    """Maximum node length; RADO_MAX_DEPTH overrides the built-in default."""
    value = os.environ.get("RADO_MAX_DEPTH")
    return int(value) if value else DEFAULT_MAX_DEPTH


class Node:
    """An immutable finite binary sequence, bit-packed with coordinate 0 at bit 0."""

    __slots__ = ("bits", "len", "_hash")

    def __init__(self, bits: int, length: int):
        if length < 0:
            raise DomainError(f"negative length {length}")
        if length > max_depth():
            raise DepthError(f"node length {length} exceeds MAX_DEPTH {max_depth()}")
        if bits < 0 or bits >> length:
            raise DomainError(f"bits {bits:#x} do not fit in length {length}")
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "len", length)
        object.__setattr__(self, "_hash", hash((bits, length)))

    def __setattr__(self, *_):
        raise AttributeError("Node is immutable")

    def __reduce__(self):
        return (Node, (self.bits, self.len))

    def __len__(self) -> int:
        return self.len

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Node)
            and self.len == other.len
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return self._hash

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.len:
            raise DomainError(f"coordinate {i} out of range for length {self.len}")
        return (self.bits >> i) & 1

    def __repr__(self) -> str:
        return f"Node('{self.text()}')"

    def text(self) -> str:
        """Text form: coordinate 0 first, empty string for the empty sequence."""
        return "".join(str((self.bits >> i) & 1) for i in range(self.len))

    @classmethod
    def from_text(cls, s: str) -> "Node":
        s = s.strip()
        if s in ("", "e", "<>"):
            return cls(0, 0)
        if any(c not in "01" for c in s):
            raise DomainError(f"bad node text {s!r}")
        bits = 0
        for i, c in enumerate(s):
            if c == "1":
                bits |= 1 << i
        return cls(bits, len(s))

    @classmethod
    def from_bits(cls, seq) -> "Node":
        bits = 0
        seq = list(seq)
        for i, b in enumerate(seq):
            if b not in (0, 1):
                raise DomainError(f"bad bit {b!r}")
            if b:
                bits |= 1 << i
        return cls(bits, len(seq))

    def append(self, bit: int) -> "Node":
        if bit not in (0, 1):
            raise DomainError(f"bad bit {bit!r}")
        return Node(self.bits | (bit << self.len), self.len + 1)

    def lex_key(self):
        """Sort key realizing lexicographic order among nodes of equal length."""
        # coordinate 0 is the most significant position for lex order
        rev = 0
        for i in range(self.len):
            rev = (rev << 1) | ((self.bits >> i) & 1)
        return rev


EMPTY = Node(0, 0)


def restrict(s: Node, m: int) -> Node:
    """Initial segment of s with domain m."""
    if m < 0 or m > s.len:
        raise DomainError(f"restriction to {m} outside domain of length-{s.len} node")
    if m == s.len:
        return s
    return Node(s.bits & ((1 << m) - 1), m)


def meet(s: Node, t: Node) -> Node:
    """Longest common initial segment of s and t."""
    m = min(s.len, t.len)
    diff = (s.bits ^ t.bits) & ((1 << m) - 1)
    if diff:
        m = min(m, (diff & -diff).bit_length() - 1)
    return Node(s.bits & ((1 << m) - 1), m)


def is_initial_segment(s: Node, t: Node) -> bool:
    """True iff s is an initial segment of t (including s == t)."""
    return s.len <= t.len and (t.bits & ((1 << s.len) - 1)) == s.bits


def lex_cmp(s: Node, t: Node) -> int:
    """Lexicographic comparison; COMPARABLE when one is an initial segment of the other."""
    m = min(s.len, t.len)
    diff = (s.bits ^ t.bits) & ((1 << m) - 1)
    if not diff:
        return COMPARABLE
    i = (diff & -diff).bit_length() - 1
    return LESS if (s.bits >> i) & 1 == 0 else GREATER


def lex_ext_cmp(s: Node, t: Node) -> int:
    """Extended lexicographic order: a total order of the rational-order type.

    Initial-segment pairs are decided by the first bit past the shorter node:
    s comes before its extension t iff t continues with 1, and an extension s
    comes before its prefix t iff s continues with 0.
    """
    m = min(s.len, t.len)
    diff = (s.bits ^ t.bits) & ((1 << m) - 1)
    if diff:
        i = (diff & -diff).bit_length() - 1
        return LESS if (s.bits >> i) & 1 == 0 else GREATER
    if s.len == t.len:
        return EQUAL
    if s.len < t.len:
        return LESS if (t.bits >> s.len) & 1 else GREATER
    return LESS if (s.bits >> t.len) & 1 == 0 else GREATER


def tri_cmp(s: Node, t: Node) -> int:
    """Length-first, then lexicographic: a total order of type omega on all nodes.

    The source material defines this order by a disjunction that is ambiguous
    when a longer node is lex-below a shorter one; comparing lengths first is
    the reading that actually yields order type omega.
    """
    if s.len != t.len:
        return LESS if s.len < t.len else GREATER
    if s.bits == t.bits:
        return EQUAL
    return lex_cmp(s, t)


class LevelSet:
    """A set of nodes of one common length, kept lex-sorted without duplicates."""

    __slots__ = ("nodes", "length")

    def __init__(self, nodes, length: int | None = None):
        nodes = sorted(set(nodes), key=Node.lex_key)
        if nodes:
            lengths = {v.len for v in nodes}
            if len(lengths) != 1:
                raise DomainError(f"mixed lengths in level set: {sorted(lengths)}")
            inferred = nodes[0].len
            if length is not None and length != inferred:
                raise DomainError(f"declared length {length} != member length {inferred}")
            length = inferred
        elif length is None:
            length = 0
        self.nodes = tuple(nodes)
        self.length = length

    def __iter__(self):
        return iter(self.nodes)

    def __len__(self):
        return len(self.nodes)

    def __eq__(self, other):
        return (
            isinstance(other, LevelSet)
            and self.length == other.length
            and self.nodes == other.nodes
        )

    def __hash__(self):
        return hash((self.length, self.nodes))

    def __repr__(self):
        return f"LevelSet([{', '.join(v.text() or 'e' for v in self.nodes)}] @ {self.length})"


def level_set_cmp(x: LevelSet, y: LevelSet) -> int:
    """Three-clause order on level sets: by length, then sequence prefix, then node order."""
    if x.length != y.length:
        return LESS if x.length < y.length else GREATER
    if x.nodes == y.nodes:
        return EQUAL
    n = min(len(x.nodes), len(y.nodes))
    for i in range(n):
        if x.nodes[i] != y.nodes[i]:
            return tri_cmp(x.nodes[i], y.nodes[i])
    # one lex-sorted enumeration is a proper initial sequence of the other
    return LESS if len(x.nodes) < len(y.nodes) else GREATER


def end_extends(x, y) -> bool:
    """True iff level set x end-extends level set y.

    Every node of x must extend a node of y (restriction to y's length lands
    in y) and every node of y must have at least one extension in x.
    """
    xs, ys = list(x), list(y)
    if not ys:
        return not xs
    ly = ys[0].len
    yset = set(ys)
    covered = set()
    for v in xs:
        if v.len < ly:
            return False
        stub = restrict(v, ly)
        if stub not in yset:
            return False
        covered.add(stub)
    return covered == yset


@lru_cache(maxsize=None)
def all_nodes(max_len: int) -> tuple:
    """All nodes of length <= max_len, in tri order."""
    out = []
    for n in range(max_len + 1):
        level = sorted((Node(b, n) for b in range(1 << n)), key=Node.lex_key)
        out.extend(level)
    return tuple(out)
