"""Strong similarity: clause-by-clause testing, canonical forms, diagonal antichains.

A canonical form collapses the distinct member lengths of a meet-closed node
set to ranks 0..k-1 and records, for every node, its bits at the collapsed
levels strictly below its own length.  Since every pairwise meet is a member,
comparability, meets, lexicographic order and all passing numbers are
functions of those bits, so two sets have equal forms exactly when a strong
similarity exists between them.  The order-only variant keeps just the bits
at splitting-node levels along each node's own ancestry, the minimal data
for the order clauses.
"""

from __future__ import annotations

import hashlib
import json
import struct
from enum import Enum
from typing import Iterable, Mapping, Optional

from .core import COMPARABLE, Node, is_initial_segment, lex_cmp, meet, LESS
from .errors import BudgetError, StructureError
from .trees import CodingTree, is_meet_closed, meet_closure
from . import rado

BRUTE_FORCE_CAP = 12


class SimKind(Enum):
    """Which similarity clauses apply: passing numbers included or order only."""

    FULL = "full"
    ORDER_ONLY = "order"


def _splitting_nodes(nodes) -> set:
    """Members that are the meet of two incomparable members."""
    items = list(nodes)
    out = set()
    for i, u in enumerate(items):
        for v in items[i + 1:]:
            if lex_cmp(u, v) != COMPARABLE:
                out.add(meet(u, v))
    return out


class CanonicalForm:
    """Level-collapsed invariant of a meet-closed set with optional coding flags."""

    __slots__ = ("kind", "k", "entries")

    def __init__(self, kind: SimKind, k: int, entries: tuple):
        self.kind = kind
        self.k = k
        self.entries = entries

    def __eq__(self, other):
        return (
            isinstance(other, CanonicalForm)
            and self.kind == other.kind
            and self.k == other.k
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.kind, self.k, self.entries))

    def __repr__(self):
        return f"CanonicalForm({self.kind.value}, k={self.k}, {len(self.entries)} entries)"

    @property
    def size(self) -> int:
        return len(self.entries)

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "k": self.k,
            "entries": [
                {
                    "rank": rank,
                    "trace": list(trace),
                    "coding": coding,
                    "member": member,
                }
                for rank, trace, coding, member in self.entries
            ],
        }

    def digest(self) -> str:
        """Stable 128-bit digest.

        Byte layout: b"RRCF" | version u8 | kind u8 (0 full, 1 order) |
        k u32le | entry count u32le | per entry: rank u32le, coding+1 u32le
        (0 = none), member u8, trace length u32le, then the trace -- full
        mode one byte per bit, order mode (rank u32le, bit u8) per item.
        All hashed with BLAKE2b-128.
        """
        h = hashlib.blake2b(digest_size=16)
        h.update(b"RRCF")
        h.update(struct.pack("<BBII", 1, 0 if self.kind is SimKind.FULL else 1,
                             self.k, len(self.entries)))
        for rank, trace, coding, member in self.entries:
            h.update(struct.pack("<IIBI", rank, 0 if coding is None else coding + 1,
                                 1 if member else 0, len(trace)))
            if self.kind is SimKind.FULL:
                h.update(bytes(trace))
            else:
                for r, b in trace:
                    h.update(struct.pack("<IB", r, b))
        return h.hexdigest()


def canonical_form(nodes: Iterable[Node],
                   coding: Iterable[Node] | None = None,
                   members: Iterable[Node] | None = None,
                   kind: SimKind = SimKind.FULL) -> CanonicalForm:
    """Canonical form of a meet-closed node set.

    coding, when given, flags a sub-list of nodes as coding nodes (indexed in
    length order); members, when given, flags the distinguished subset (for
    antichains: the antichain itself inside its meet closure).  Without it
    every node is flagged.
    """
    node_set = frozenset(nodes)
    if not is_meet_closed(node_set):
        raise StructureError("canonical form requires a meet-closed set")
    lengths = sorted({t.len for t in node_set})
    rank_of = {l: i for i, l in enumerate(lengths)}
    k = len(lengths)

    coding_index: dict[Node, int] = {}
    if coding is not None:
        coding = list(coding)
        for c in coding:
            if c not in node_set:
                raise StructureError(f"coding node {c.text()!r} not a member")
        for i, c in enumerate(sorted(coding, key=lambda t: t.len)):
            coding_index[c] = i

    member_set = node_set if members is None else frozenset(members)
    if not member_set <= node_set:
        raise StructureError("member flags must select a subset")

    if kind is SimKind.FULL:
        def trace(t: Node) -> tuple:
            return tuple(t[l] for l in lengths if l < t.len)
    else:
        splitting = _splitting_nodes(node_set)
        split_levels = sorted({m.len for m in splitting})

        def trace(t: Node) -> tuple:
            # bits at splitting nodes along the node's own ancestry only
            out = []
            for l in split_levels:
                if l >= t.len:
                    break
                stub = Node(t.bits & ((1 << l) - 1), l)
                if stub in splitting:
                    out.append((rank_of[l], t[l]))
            return tuple(out)

    entries = tuple(sorted(
        (rank_of[t.len], trace(t), coding_index.get(t), t in member_set)
        for t in node_set
    ))
    return CanonicalForm(kind, k, entries)


def is_strong_similarity(f: Mapping[Node, Node],
                         s_set: Iterable[Node], t_set: Iterable[Node],
                         kind: SimKind = SimKind.FULL,
                         s_coding: Iterable[Node] | None = None,
                         t_coding: Iterable[Node] | None = None) -> bool:
    """Check every similarity clause literally for the given bijection.

    Clauses: lexicographic order, initial segments between meets, meets,
    relative meet lengths, passing numbers (full mode only), and coding nodes
    mapped onto coding nodes when flags are supplied.  Quadruple clauses are
    checked over all pairs of pairwise meets, which is the same quantification.
    """
    s_items = list(set(s_set))
    t_items = set(t_set)
    if not (is_meet_closed(s_items) and is_meet_closed(t_items)):
        raise StructureError("strong similarity is defined on meet-closed sets")
    if set(f.keys()) != set(s_items) or set(f.values()) != t_items:
        return False
    if len(set(f.values())) != len(s_items):
        return False

    # clause: lexicographic order (incomparable pairs decided by the meet bit)
    for i, s in enumerate(s_items):
        for t in s_items[i + 1:]:
            if (lex_cmp(s, t) == LESS) != (lex_cmp(f[s], f[t]) == LESS):
                return False
            if (lex_cmp(t, s) == LESS) != (lex_cmp(f[t], f[s]) == LESS):
                return False

    # meets of all pairs, source and image side
    pair_meets = []
    for i, s in enumerate(s_items):
        for t in s_items[i:]:
            m = meet(s, t)
            fm = meet(f[s], f[t])
            # clause: f preserves meets
            if m not in f or f[m] != fm:
                return False
            pair_meets.append((m, fm))

    # clauses: initial segments and relative lengths, over pairs of meets
    for m1, fm1 in pair_meets:
        for m2, fm2 in pair_meets:
            if is_initial_segment(m1, m2) != is_initial_segment(fm1, fm2):
                return False
            if (m1.len < m2.len) != (fm1.len < fm2.len):
                return False

    if kind is SimKind.FULL:
        for s in s_items:
            for t in s_items:
                if s.len < t.len and f[t][f[s].len] != t[s.len]:
                    return False

    if s_coding is not None or t_coding is not None:
        s_cod = set(s_coding or ())
        t_cod = set(t_coding or ())
        if {f[c] for c in s_cod} != t_cod:
            return False
    return True


def brute_force_similarity(s_set: Iterable[Node], t_set: Iterable[Node],
                           kind: SimKind = SimKind.FULL,
                           s_coding: Iterable[Node] | None = None,
                           t_coding: Iterable[Node] | None = None
                           ) -> Optional[dict]:
    """Independent similarity oracle: search structure-respecting bijections.

    Any similarity must preserve the relative order of member lengths and the
    lexicographic order inside each length class, so at most one candidate
    bijection respects the structure; it is built and then checked clause by
    clause.  Returns the bijection or None.
    """
    s_items = list(set(s_set))
    t_items = list(set(t_set))
    if len(s_items) != len(t_items):
        return None
    if len(s_items) > BRUTE_FORCE_CAP:
        raise BudgetError(
            f"brute-force similarity capped at {BRUTE_FORCE_CAP} nodes")
    if not (is_meet_closed(s_items) and is_meet_closed(t_items)):
        raise StructureError("strong similarity is defined on meet-closed sets")
    if not s_items:
        return {}

    def classes(items):
        by_len: dict[int, list] = {}
        for t in items:
            by_len.setdefault(t.len, []).append(t)
        return [sorted(by_len[l], key=Node.lex_key) for l in sorted(by_len)]

    s_classes = classes(s_items)
    t_classes = classes(t_items)
    if [len(c) for c in s_classes] != [len(c) for c in t_classes]:
        return None
    f = {}
    for sc, tc in zip(s_classes, t_classes):
        for a, b in zip(sc, tc):
            f[a] = b
    ok = is_strong_similarity(f, s_items, t_items, kind,
                              s_coding=s_coding, t_coding=t_coding)
    return f if ok else None


def are_strongly_similar(s_set: Iterable[Node], t_set: Iterable[Node],
                         kind: SimKind = SimKind.FULL,
                         s_coding: Iterable[Node] | None = None,
                         t_coding: Iterable[Node] | None = None,
                         s_members: Iterable[Node] | None = None,
                         t_members: Iterable[Node] | None = None) -> bool:
    """Strong similarity via canonical-form equality."""
    left = canonical_form(s_set, coding=s_coding, members=s_members, kind=kind)
    right = canonical_form(t_set, coding=t_coding, members=t_members, kind=kind)
    return left == right


def similar_trees(a: CodingTree, b: CodingTree, kind: SimKind = SimKind.FULL) -> bool:
    """Strong similarity of trees with coding nodes."""
    return are_strongly_similar(a.nodes, b.nodes, kind,
                                s_coding=a.coding, t_coding=b.coding)


def tree_form(a: CodingTree, kind: SimKind = SimKind.FULL) -> CanonicalForm:
    return canonical_form(a.nodes, coding=a.coding, kind=kind)


def is_strongly_diagonal(antichain: Iterable[Node]) -> bool:
    """Diagonal test: distinct closure lengths, passing 0 over foreign splitting nodes."""
    items = list(set(antichain))
    for i, u in enumerate(items):
        for v in items[i + 1:]:
            if is_initial_segment(u, v) or is_initial_segment(v, u):
                raise StructureError("input is not an antichain")
    closure = meet_closure(items)
    lengths = [t.len for t in closure]
    if len(lengths) != len(set(lengths)):
        return False
    splitting = closure - set(items)
    for t in items:
        for m in splitting:
            if m.len < t.len and not is_initial_segment(m, t) and t[m.len] != 0:
                return False
    return True


def is_approximation(tree: CodingTree, oracle: rado.AdjacencyOracle) -> Optional[int]:
    """The k for which the tree is strongly similar to the depth-k standard
    truncation for this oracle, or None.

    The only candidate k is the tree's own coding-node count.
    """
    k = len(tree.coding)
    target = rado.build_SR(oracle, k)
    try:
        return k if similar_trees(tree, target, SimKind.FULL) else None
    except StructureError:
        return None


def form_to_json_text(form: CanonicalForm) -> str:
    return json.dumps(form.to_json(), sort_keys=True, separators=(",", ":"))
