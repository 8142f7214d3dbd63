"""Concrete Rado graph instances and the coding tree built from them.

The default instance is the BIT graph: m and n (m < n) are adjacent iff bit m
of n is set.  It is a concrete Rado graph, so fixing it loses nothing for
finite experiments.  Explicit finite prefixes and seeded pseudo-random
instances are also available; all oracles are pure functions of their inputs.
"""

from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass
from typing import Iterable

from . import graph6, trees
from .core import Node, max_depth, restrict
from .errors import DepthError, DomainError, StructureError
from .trees import CodingTree, FiniteApprox, meet_closure


class FiniteGraph:
    """Ordered graph on vertices 0..n-1 with a symmetric irreflexive adjacency."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise DomainError("negative vertex count")
        rows = [0] * n
        for i, j in edges:
            if i == j:
                raise DomainError(f"loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise DomainError(f"edge ({i},{j}) out of range")
            rows[i] |= 1 << j
            rows[j] |= 1 << i
        self.n = n
        self.rows = tuple(rows)

    def has_edge(self, i: int, j: int) -> bool:
        return bool((self.rows[i] >> j) & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for j in range(self.n) for i in range(j) if self.has_edge(i, j)]

    def degree_sequence(self) -> tuple:
        return tuple(sorted(bin(r).count("1") for r in self.rows))

    def induced(self, vertices) -> "FiniteGraph":
        vs = sorted(vertices)
        index = {v: i for i, v in enumerate(vs)}
        return FiniteGraph(
            len(vs),
            ((index[a], index[b]) for a, b in self.edges() if a in index and b in index),
        )

    def complement(self) -> "FiniteGraph":
        return FiniteGraph(
            self.n,
            ((i, j) for j in range(self.n) for i in range(j) if not self.has_edge(i, j)),
        )

    def __eq__(self, other):
        return isinstance(other, FiniteGraph) and self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, self.rows))

    def __repr__(self):
        return f"FiniteGraph({self.n}, {self.edges()})"

    def to_graph6(self, header: bool = False) -> str:
        return graph6.write_graph6(self.n, self.has_edge, header=header)

    @classmethod
    def from_graph6(cls, text: str) -> "FiniteGraph":
        n, edges = graph6.parse_graph6(text)
        return cls(n, edges)

    def is_isomorphic(self, other: "FiniteGraph") -> bool:
        return graph_isomorphic(self, other)


def graph_isomorphic(g: FiniteGraph, h: FiniteGraph) -> bool:
    """Brute-force isomorphism with degree pruning; fine for the small sizes used here."""
    if g.n != h.n:
        return False
    if g.degree_sequence() != h.degree_sequence():
        return False
    n = g.n
    deg_g = [bin(r).count("1") for r in g.rows]
    deg_h = [bin(r).count("1") for r in h.rows]
    candidates = [[v for v in range(n) if deg_h[v] == deg_g[u]] for u in range(n)]
    mapping = [-1] * n
    used = [False] * n

    def assign(u: int) -> bool:
        if u == n:
            return True
        for v in candidates[u]:
            if used[v]:
                continue
            ok = True
            for w in range(u):
                if g.has_edge(u, w) != h.has_edge(v, mapping[w]):
                    ok = False
                    break
            if ok:
                mapping[u] = v
                used[v] = True
                if assign(u + 1):
                    return True
                used[v] = False
                mapping[u] = -1
        return False

    return assign(0)


def bit_adjacent(m: int, n: int) -> bool:
    """BIT graph adjacency: for m < n, true iff bit m of n is set."""
    if m == n:
        raise DomainError(f"no loop at vertex {m}")
    if m > n:
        m, n = n, m
    return bool((n >> m) & 1)


@dataclass(frozen=True)
class AdjacencyOracle:
    """A deterministic countable-graph adjacency: BIT, explicit prefix, or seeded hash."""

    kind: str
    graph: FiniteGraph | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in ("bit", "explicit", "seeded"):
            raise DomainError(f"unknown oracle kind {self.kind!r}")
        if self.kind == "explicit" and self.graph is None:
            raise DomainError("explicit oracle needs a graph")
        if self.kind == "seeded" and self.seed is None:
            raise DomainError("seeded oracle needs a seed")

    def adjacent(self, m: int, n: int) -> bool:
        if m == n:
            raise DomainError(f"no loop at vertex {m}")
        if m > n:
            m, n = n, m
        if self.kind == "bit":
            return bit_adjacent(m, n)
        if self.kind == "explicit":
            if n >= self.graph.n:
                raise DepthError(
                    f"vertex {n} beyond explicit prefix of size {self.graph.n}")
            return self.graph.has_edge(m, n)
        digest = hashlib.blake2b(
            b"radoedge:%d:%d:%d" % (self.seed, m, n), digest_size=1
        ).digest()
        return bool(digest[0] & 1)

    def spec_string(self) -> str:
        if self.kind == "bit":
            return "bit"
        if self.kind == "seeded":
            return f"seed:{self.seed}"
        return f"g6:{self.graph.to_graph6()}"


BIT_ORACLE = AdjacencyOracle("bit")


def oracle_from_spec(spec: str) -> AdjacencyOracle:
    """Parse an oracle spec: 'bit', 'seed:<u64>', 'file:<path>' or 'g6:<string>'."""
    if spec == "bit":
        return BIT_ORACLE
    if spec.startswith("seed:"):
        return AdjacencyOracle("seeded", seed=int(spec[5:], 0))
    if spec.startswith("g6:"):
        return AdjacencyOracle("explicit", graph=FiniteGraph.from_graph6(spec[3:]))
    if spec.startswith("file:"):
        with open(spec[5:], "r", encoding="ascii") as fh:
            return AdjacencyOracle("explicit", graph=FiniteGraph.from_graph6(fh.read()))
    raise DomainError(f"bad oracle spec {spec!r}")


def coding_node(oracle: AdjacencyOracle, n: int) -> Node:
    """The length-n node whose bit at m records adjacency of vertices n and m."""
    bits = 0
    for m in range(n):
        if oracle.adjacent(n, m):
            bits |= 1 << m
    return Node(bits, n)


def build_SR(oracle: AdjacencyOracle, k: int) -> CodingTree:
    """Depth-k truncation of the standard coding tree for the oracle's graph.

    Levels 0..k-1, all binary nodes of each length, and at length n the coding
    node recording vertex n's adjacencies to vertices 0..n-1.
    """
    if k < 0:
        raise DomainError("negative depth")
    if k > max_depth():
        raise DepthError(f"depth {k} exceeds MAX_DEPTH {max_depth()}")
    nodes = [Node(b, n) for n in range(k) for b in range(1 << n)]
    coding = [coding_node(oracle, n) for n in range(k)]
    return CodingTree(nodes, range(k), coding, validate=False)


class RadoTreeSource:
    """Lazy per-level view of the standard coding tree for one oracle.

    Levels are materialized on demand and memoized behind a lock, so repeated
    reads observe identical levels regardless of thread interleaving.
    """

    def __init__(self, oracle: AdjacencyOracle, depth_budget: int):
        if depth_budget > max_depth():
            raise DepthError(
                f"budget {depth_budget} exceeds MAX_DEPTH {max_depth()}")
        self.oracle = oracle
        self.depth_budget = depth_budget
        self._coding: dict[int, Node] = {}
        self._lock = threading.Lock()

    def coding_at(self, n: int) -> Node:
        if n >= self.depth_budget:
            raise DepthError(f"level {n} beyond budget {self.depth_budget}")
        with self._lock:
            if n not in self._coding:
                self._coding[n] = coding_node(self.oracle, n)
            return self._coding[n]

    def truncate(self, k: int) -> CodingTree:
        if k > self.depth_budget:
            raise DepthError(f"depth {k} beyond budget {self.depth_budget}")
        return build_SR(self.oracle, k)


def decode_graph(tree: CodingTree) -> FiniteGraph:
    """The graph represented by the coding nodes: an edge iff the passing number is 1."""
    coding = tree.coding
    n = len(coding)
    edges = []
    for b in range(n):
        for a in range(b):
            if trees.passing_number(coding[b], coding[a]):
                edges.append((a, b))
    return FiniteGraph(n, edges)


def tree_of_subgraph(universe: Iterable[int], ambient: CodingTree) -> CodingTree:
    """The subtree induced by the chosen coding nodes.

    Meet-closes the selected coding nodes and restricts every node of the
    closure to the selected coding lengths, so the result has exactly one
    level per chosen vertex.
    """
    idx = sorted(set(universe))
    n_avail = len(ambient.coding)
    for i in idx:
        if i < 0 or i >= n_avail:
            raise DepthError(f"vertex index {i} outside coding depth {n_avail}")
    chosen = [ambient.coding[i] for i in idx]
    levels = tuple(sorted(c.len for c in chosen))
    closure = meet_closure(chosen)
    nodes = set()
    for t in closure:
        for l in levels:
            if l < t.len:
                nodes.add(restrict(t, l))
            elif l == t.len:
                nodes.add(t)
    return CodingTree(nodes, levels, chosen, validate=False)


def roundtrip_check(approx: CodingTree, oracle: AdjacencyOracle) -> bool:
    """Decode-and-re-encode consistency for one finite approximation.

    Requires the input to be a genuine approximation (else False).  Re-encodes
    the decoded graph through tree_of_subgraph with the approximation itself
    as ambient and demands: the rebuilt tree lies inside the input with the
    same coding nodes, it decodes to the same graph, and re-encoding it again
    is a fixed point.  For trees whose levels are exactly the coding lengths
    the rebuilt tree reproduces the input node-for-node.
    """
    from .similarity import is_approximation  # local import to avoid a cycle

    k = is_approximation(approx, oracle)
    if k is None:
        return False
    if k == 0:
        return True
    rebuilt = tree_of_subgraph(range(k), approx)
    if rebuilt.coding != approx.coding:
        return False
    if not rebuilt.nodes <= approx.nodes:
        return False
    if decode_graph(rebuilt) != decode_graph(approx):
        return False
    # re-encoding is a fixed point; a tree that is itself a tree_of_subgraph
    # image is therefore reproduced node-for-node
    return tree_of_subgraph(range(k), rebuilt) == rebuilt


@dataclass(frozen=True)
class ExtensionReport:
    """Outcome of a finite extension-property audit."""

    depth: int
    budget: int
    checked: int
    failures: tuple

    @property
    def ok(self) -> bool:
        return not self.failures


def check_extension_property(oracle: AdjacencyOracle, depth: int,
                             budget: int | None = None,
                             pool: Iterable[int] | None = None) -> ExtensionReport:
    """Audit that a finite prefix looks Rado-like.

    For every disjoint pair (U, V) drawn from `pool` with |U| + |V| <= budget,
    look for a witness vertex below `depth` adjacent to everything in U and
    nothing in V.  The default budget is log2(depth) and the default pool is
    a small initial segment of the vertices, keeping the audit cheap; both may
    be overridden for sharper checks.
    """
    import itertools

    if depth <= 0:
        return ExtensionReport(depth, 0, 0, ())
    if budget is None:
        budget = min(max(0, depth.bit_length() - 2), 4)
    if pool is None:
        # keep supports low enough that a witness can fit below the depth
        pool = range(min(depth, max(1, depth.bit_length() - 2), 12))
    pool = sorted(set(pool))
    failures = []
    checked = 0
    for size in range(budget + 1):
        for support in itertools.combinations(pool, size):
            for mask in range(1 << size):
                u = frozenset(v for i, v in enumerate(support) if (mask >> i) & 1)
                v = frozenset(support) - u
                checked += 1
                forbidden = set(support)
                found = None
                for w in range(depth):
                    if w in forbidden:
                        continue
                    try:
                        if all(oracle.adjacent(w, a) for a in u) and \
                                not any(oracle.adjacent(w, b) for b in v):
                            found = w
                            break
                    except DepthError:
                        break
                if found is None:
                    failures.append((tuple(sorted(u)), tuple(sorted(v))))
    return ExtensionReport(depth, budget, checked, tuple(failures))


GRAPH_NAMES = ("K", "E", "P", "C")


def graph_from_name(name: str) -> FiniteGraph:
    """Small named graphs: K<n>, Kbar<n>/E<n> (empty), P<n> (path), C<n> (cycle)."""
    name = name.strip()
    if name.startswith("Kbar"):
        n = int(name[4:])
        return FiniteGraph(n)
    kind, num = name[0], name[1:]
    n = int(num)
    if kind == "K":
        return FiniteGraph(n, ((i, j) for j in range(n) for i in range(j)))
    if kind == "E":
        return FiniteGraph(n)
    if kind == "P":
        return FiniteGraph(n, ((i, i + 1) for i in range(n - 1)))
    if kind == "C":
        if n < 3:
            raise DomainError("cycles need at least 3 vertices")
        return FiniteGraph(n, [(i, (i + 1) % n) for i in range(n)])
    raise DomainError(f"unknown graph name {name!r}")
