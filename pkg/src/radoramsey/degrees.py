"""Similarity types of strongly diagonal antichains and big Ramsey degree counts.

The primary enumeration walks collapsed shapes directly: a binary splitting
shape on n lex-ordered leaves, an interleaving of the 2n-1 closure nodes onto
distinct levels, and (in full mode) the free passing bits at leaf levels.
Each combination is realized as a minimally-spaced witness antichain and
canonicalized, so the catalog is exactly the set of canonical forms actual
antichains produce.  A depth-bounded search over real antichains serves as
the independent oracle.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .core import Node, all_nodes, is_initial_segment
from .errors import BudgetError, StructureError
from .rado import AdjacencyOracle, FiniteGraph, coding_node, graph_isomorphic
from .similarity import (CanonicalForm, SimKind, canonical_form,
                         is_strongly_diagonal)
from .trees import meet_closure

ENUM_CAP = 6
BRUTE_N_CAP = 4
BRUTE_DEPTH_CAP = 7
DEVLIN_CAP = 5


@dataclass
class TypeCatalog:
    """Distinct canonical forms of size-n strongly diagonal antichains."""

    n: int
    kind: SimKind
    entries: dict = field(default_factory=dict)  # digest -> (form, count, witness)

    def add(self, form: CanonicalForm, witness: tuple):
        digest = form.digest()
        if digest in self.entries:
            old_form, count, old_wit = self.entries[digest]
            best = min(old_wit, witness, key=_witness_key)
            self.entries[digest] = (old_form, count + 1, best)
        else:
            self.entries[digest] = (form, 1, witness)

    def merge(self, other: "TypeCatalog"):
        for digest, (form, count, wit) in other.entries.items():
            if digest in self.entries:
                f, c, w = self.entries[digest]
                self.entries[digest] = (f, c + count, min(w, wit, key=_witness_key))
            else:
                self.entries[digest] = (form, count, wit)

    def digests(self) -> set:
        return set(self.entries)

    def __len__(self):
        return len(self.entries)

    def to_json(self, include_witnesses: bool = False) -> dict:
        out = {"n": self.n, "mode": self.kind.value, "count": len(self.entries),
               "digests": sorted(self.entries)}
        if include_witnesses:
            out["witnesses"] = {
                d: [v.text() for v in wit]
                for d, (_, _, wit) in sorted(self.entries.items())
            }
        return out


def _witness_key(witness: tuple):
    return tuple((v.len, v.lex_key()) for v in witness)


def _shapes(n: int):
    """Full binary splitting shapes on n ordered leaves (Catalan many)."""
    if n == 1:
        yield 0  # a leaf
        return
    for left in range(1, n):
        for ls in _shapes(left):
            for rs in _shapes(n - left):
                yield (ls, rs)


def _shape_nodes(shape, counter=None):
    """Flatten a shape into (ids, parent, is_leaf, leaf_order) lists.

    Node 0 is the root; children carry their parent's id.  Leaves appear in
    lexicographic order.
    """
    parents = []
    is_leaf = []

    def walk(sh, parent):
        me = len(parents)
        parents.append(parent)
        is_leaf.append(sh == 0)
        if sh != 0:
            left, right = sh
            walk(left, me)
            walk(right, me)
        return me

    walk(shape, -1)
    return parents, is_leaf


def _linear_extensions(parents):
    """All rank assignments consistent with parent-before-child."""
    n = len(parents)
    children = [[] for _ in range(n)]
    roots = []
    for i, p in enumerate(parents):
        if p < 0:
            roots.append(i)
        else:
            children[p].append(i)
    order = []
    available = sorted(roots)

    def rec():
        if len(order) == n:
            yield tuple(order)
            return
        for i in list(available):
            available.remove(i)
            order.append(i)
            new = [c for c in children[i]]
            for c in new:
                available.append(c)
            available.sort()
            yield from rec()
            for c in new:
                available.remove(c)
            available.sort()
            order.pop()
            available.append(i)
            available.sort()

    yield from rec()


def _sides(shape):
    """For each flattened node, the 0/1 branch bits taken from the root."""
    sides = []

    def walk(sh, path):
        sides.append(tuple(path))
        if sh != 0:
            left, right = sh
            walk(left, path + [0])
            walk(right, path + [1])

    walk(shape, [])
    return sides


def _realize(parents, is_leaf, sides, ranks, free_bits):
    """Build the minimally spaced witness: node lengths equal their ranks."""
    n = len(parents)
    rank_of = list(ranks)  # rank_of[node] = level 0..n-1
    leaf_rank = {rank_of[i] for i in range(n) if is_leaf[i]}
    nodes_bits = [None] * n
    built = [None] * n
    free_iter = iter(free_bits)
    for i in sorted(range(n), key=lambda i: rank_of[i]):
        p = parents[i]
        if p < 0:
            bits = 0
            base = 0
        else:
            bits = nodes_bits[p]
            base = rank_of[p]
            bits |= sides[i][len(sides[p])] << base
            base += 1
        for l in range(base, rank_of[i]):
            if l in leaf_rank:
                bits |= next(free_iter) << l
            # splitting levels between parent and child stay 0 (diagonal)
        nodes_bits[i] = bits
        built[i] = Node(bits, rank_of[i])
    leaves = tuple(sorted((built[i] for i in range(n) if is_leaf[i]),
                          key=lambda v: v.len))
    return frozenset(built), leaves


def _free_slots(parents, is_leaf, ranks):
    """Number of free passing bits: leaf levels inside each parent-child gap."""
    n = len(parents)
    leaf_rank = {ranks[i] for i in range(n) if is_leaf[i]}
    slots = 0
    for i in range(n):
        base = 0 if parents[i] < 0 else ranks[parents[i]] + 1
        slots += sum(1 for l in range(base, ranks[i]) if l in leaf_rank)
    return slots


def _enumerate_shape(args):
    shape, n, kind_value = args
    kind = SimKind(kind_value)
    catalog = TypeCatalog(n, kind)
    parents, is_leaf = _shape_nodes(shape)
    sides = _sides(shape)
    total = len(parents)
    for ext in _linear_extensions(parents):
        ranks = [0] * total
        for level, node_id in enumerate(ext):
            ranks[node_id] = level
        nfree = _free_slots(parents, is_leaf, ranks)
        if kind is SimKind.FULL:
            choices = itertools.product((0, 1), repeat=nfree)
        else:
            # passing bits at leaf levels do not enter order-only forms
            choices = [(0,) * nfree]
        for bits in choices:
            nodes, leaves = _realize(parents, is_leaf, sides, ranks, bits)
            form = canonical_form(nodes, members=leaves, kind=kind)
            catalog.add(form, leaves)
    return catalog


def enumerate_diagonal_types(n: int, kind: SimKind = SimKind.FULL,
                             workers: int = 1) -> TypeCatalog:
    """Exact catalog of strong similarity types of size-n diagonal antichains."""
    if n < 0 or n > ENUM_CAP:
        raise BudgetError(f"type enumeration capped at n <= {ENUM_CAP}")
    catalog = TypeCatalog(n, kind)
    if n == 0:
        return catalog
    jobs = [(shape, n, kind.value) for shape in _shapes(n)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_enumerate_shape, jobs):
                catalog.merge(part)
    else:
        for job in jobs:
            catalog.merge(_enumerate_shape(job))
    return catalog


def brute_force_types(n: int, depth: int, kind: SimKind = SimKind.FULL) -> TypeCatalog:
    """Oracle catalog: scan actual strongly diagonal antichains below the depth."""
    if n > BRUTE_N_CAP:
        raise BudgetError(f"brute-force types capped at n <= {BRUTE_N_CAP}")
    if depth > BRUTE_DEPTH_CAP:
        raise BudgetError(f"brute-force types capped at depth <= {BRUTE_DEPTH_CAP}")
    catalog = TypeCatalog(n, kind)
    if n == 0:
        return catalog
    pool = all_nodes(depth - 1)

    def extend(chosen, start):
        if len(chosen) == n:
            closure = meet_closure(chosen)
            form = canonical_form(closure, members=chosen, kind=kind)
            catalog.add(form, tuple(sorted(chosen, key=lambda v: v.len)))
            return
        for j in range(start, len(pool)):
            v = pool[j]
            if any(is_initial_segment(u, v) or is_initial_segment(v, u)
                   for u in chosen):
                continue
            cand = chosen + [v]
            # violations of the diagonal conditions only grow with the set
            if not is_strongly_diagonal(cand):
                continue
            extend(cand, j + 1)

    extend([], 0)
    return catalog


def leaf_graph(form: CanonicalForm) -> FiniteGraph:
    """The graph a full-mode diagonal type codes on its length-ordered leaves."""
    leaves = sorted((rank, trace) for rank, trace, _, member in form.entries if member)
    ranks = [rank for rank, _ in leaves]
    idx = {rank: i for i, rank in enumerate(ranks)}
    edges = []
    for rank, trace in leaves:
        j = idx[rank]
        for other_rank in ranks:
            if other_rank < rank and trace[other_rank]:
                edges.append((idx[other_rank], j))
    return FiniteGraph(len(leaves), edges)


@dataclass
class DegreeReport:
    """Big Ramsey degree of a graph with the ordered-copy breakdown."""

    graph: FiniteGraph
    degree: int
    ordered_breakdown: dict  # labeled graph6 -> type count
    total_types: int

    def to_json(self) -> dict:
        return {
            "graph": self.graph.to_graph6(),
            "count": self.degree,
            "ordered": dict(sorted(self.ordered_breakdown.items())),
            "total_types": self.total_types,
        }


def big_ramsey_degree(graph: FiniteGraph, workers: int = 1) -> DegreeReport:
    """Count the full-mode diagonal types whose coded graph is isomorphic to
    the given one, with the per-ordered-copy (labeled) breakdown."""
    if graph.n > ENUM_CAP:
        raise BudgetError(f"degrees capped at {ENUM_CAP} vertices")
    catalog = enumerate_diagonal_types(graph.n, SimKind.FULL, workers=workers)
    degree = 0
    breakdown: dict[str, int] = {}
    for digest, (form, _, _) in catalog.entries.items():
        coded = leaf_graph(form)
        if graph_isomorphic(coded, graph):
            degree += 1
            key = coded.to_graph6()
            breakdown[key] = breakdown.get(key, 0) + 1
    return DegreeReport(graph, degree, breakdown, len(catalog))


def devlin_count(n: int, workers: int = 1) -> int:
    """Number of order-only diagonal types of size n (the rational-order counts)."""
    if n > DEVLIN_CAP:
        raise BudgetError(f"devlin counts capped at n <= {DEVLIN_CAP}")
    return len(enumerate_diagonal_types(n, SimKind.ORDER_ONLY, workers=workers))


def realize_witness(form: CanonicalForm, depth: int) -> Optional[tuple]:
    """A strongly diagonal antichain below the depth whose form is the given one.

    The minimally spaced witness places the closure on lengths 0..2n-2, which
    is also the least depth at which any witness exists; the reconstruction is
    verified by re-canonicalization.
    """
    ranks = sorted({rank for rank, _, _, _ in form.entries})
    if not ranks:
        return ()
    if len(ranks) > depth:
        return None
    nodes = []
    members = []
    for rank, trace, _, member in form.entries:
        if form.kind is SimKind.FULL:
            bits = 0
            for l, b in enumerate(trace):
                bits |= b << l
            v = Node(bits, rank)
        else:
            bits = 0
            for r, b in trace:
                bits |= b << r
            v = Node(bits, rank)
        nodes.append(v)
        if member:
            members.append(v)
    members = tuple(sorted(members, key=lambda v: v.len))
    check = canonical_form(frozenset(nodes), members=members, kind=form.kind)
    if check != form:
        return None
    return members


def realize_coding_witness(form: CanonicalForm, oracle: AdjacencyOracle,
                           depth: int) -> Optional[tuple]:
    """A witness whose members are coding nodes of the oracle's tree, or None.

    Backtracks over increasing vertex tuples; a partial choice is kept only
    while it stays an antichain satisfying the diagonal conditions.
    """
    n = sum(1 for _, _, _, member in form.entries if member)
    if n == 0:
        return ()
    cods = [coding_node(oracle, m) for m in range(depth)]

    def extend(chosen, start):
        if len(chosen) == n:
            closure = meet_closure(chosen)
            members = tuple(sorted(chosen, key=lambda v: v.len))
            try:
                cand = canonical_form(closure, members=members, kind=form.kind)
            except Exception:
                return None
            return members if cand == form else None
        for j in range(start, depth):
            v = cods[j]
            if any(is_initial_segment(u, v) or is_initial_segment(v, u)
                   for u in chosen):
                continue
            cand = chosen + [v]
            try:
                if not is_strongly_diagonal(cand):
                    continue
            except Exception:
                continue
            got = extend(cand, j + 1)
            if got is not None:
                return got
        return None

    return extend([], 0)
