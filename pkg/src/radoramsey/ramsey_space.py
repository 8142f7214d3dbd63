"""Extension contexts, Nash-Williams families, fronts, ranks, and the
finite monochromatization search with verifiable certificates.

Everything here works inside a finite truncation of the standard coding tree
for a fixed adjacency oracle.  Sub-approximations inherit their coding nodes
from the ambient truncation, so a candidate extension is determined by its
top level set; its lower structure is the meet skeleton of that set.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Optional

from .core import (EQUAL, GREATER, LESS, LevelSet, Node, end_extends,
                   is_initial_segment, level_set_cmp)
from .errors import ContextError, DepthError, DomainError, StructureError
from .ordinals import ONE, OrdinalCNF
from .rado import AdjacencyOracle, build_SR, coding_node, oracle_from_spec
from .similarity import SimKind, is_approximation, tree_form
from .trees import (CodingTree, FiniteApprox, level_closure, max_nodes,
                    meet_closure, restriction)

Coloring = Callable[[FiniteApprox], int]


@lru_cache(maxsize=64)
def _approx_form(oracle: AdjacencyOracle, k: int):
    return tree_form(build_SR(oracle, k), SimKind.FULL)


def _is_approx_fast(tree: FiniteApprox, oracle: AdjacencyOracle) -> bool:
    try:
        return tree_form(tree, SimKind.FULL) == _approx_form(oracle, len(tree.coding))
    except StructureError:
        return False


@dataclass(frozen=True)
class ExtensionContext:
    """The data (T, D, A, B, k) of one pigeonhole instance.

    T is the depth-`depth` truncation of the oracle's coding tree and
    D = r_d(T).  Case "a": A is a k-level approximation inside T and B is A
    plus both one-bit successors of each maximal node.  Case "b": each maximal
    node of A carries exactly one extension in B and max(A) has 2^k nodes.
    """

    oracle: AdjacencyOracle
    depth: int
    a_nodes: frozenset
    b_nodes: frozenset
    k: int
    case: str
    d: int

    @property
    def tree(self) -> CodingTree:
        return _tree_cache(self.oracle, self.depth)

    @property
    def max_a(self) -> frozenset:
        return max_nodes(self.a_nodes)

    @property
    def max_b(self) -> frozenset:
        return max_nodes(self.b_nodes)

    @property
    def l_b(self) -> int:
        return max(t.len for t in self.max_b)

    def slots(self) -> tuple:
        """max(B) in lexicographic order; the extension slots."""
        return tuple(sorted(self.max_b, key=Node.lex_key))

    def s_d(self) -> Node:
        """The member of max(B) every extension's coding node must extend.

        Structurally forced: the new coding node sits at the slot whose
        lexicographic rank equals the rank of the standard tree's next coding
        node among the binary strings of its length.
        """
        slots = self.slots()
        target = coding_node(self.oracle, self.k)
        rank = target.lex_key()
        if rank >= len(slots):
            raise ContextError([f"no slot at coding rank {rank}"])
        return slots[rank]

    def to_json(self) -> dict:
        return {
            "oracle": self.oracle.spec_string(),
            "depth": self.depth,
            "A": sorted(v.text() for v in self.a_nodes),
            "B": sorted(v.text() for v in self.b_nodes),
            "k": self.k,
            "case": self.case,
            "d": self.d,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "ExtensionContext":
        return cls(
            oracle=oracle_from_spec(doc["oracle"]),
            depth=int(doc["depth"]),
            a_nodes=frozenset(Node.from_text(s) for s in doc["A"]),
            b_nodes=frozenset(Node.from_text(s) for s in doc["B"]),
            k=int(doc["k"]),
            case=doc["case"],
            d=int(doc["d"]),
        )


@lru_cache(maxsize=16)
def _tree_cache(oracle: AdjacencyOracle, depth: int) -> CodingTree:
    return build_SR(oracle, depth)


def ambient_coding(nodes: Iterable[Node], oracle: AdjacencyOracle) -> tuple:
    """The coding nodes a node set inherits from the ambient tree."""
    out = [v for v in nodes if v == coding_node(oracle, v.len)]
    return tuple(sorted(out, key=lambda v: v.len))


def as_approx(nodes: Iterable[Node], oracle: AdjacencyOracle) -> FiniteApprox:
    """Package a node set as a finite approximation with ambient coding."""
    closed, levels = level_closure(nodes)
    return FiniteApprox(closed, levels, ambient_coding(closed, oracle),
                        validate=False)


def validate_context(ctx: ExtensionContext) -> list:
    """All invariant violations of the context; empty means valid."""
    problems = []
    if ctx.case not in ("a", "b"):
        problems.append(f"unknown case {ctx.case!r}")
        return problems
    tree = ctx.tree
    if not ctx.a_nodes:
        problems.append("A is empty")
        return problems
    if not ctx.a_nodes <= tree.nodes:
        problems.append("A is not contained in the truncation")
    if not ctx.b_nodes <= tree.nodes:
        problems.append("B is not contained in the truncation")
    if problems:
        return problems
    max_a = ctx.max_a
    if ctx.d < 1 or ctx.d > len(tree.coding):
        problems.append(f"bad restriction depth d={ctx.d}")
        return problems
    d_max = restriction(tree, ctx.d).max_nodes()
    if not max_a <= d_max:
        problems.append("max(A) is not contained in max(r_d(T))")
    lengths = {t.len for t in max_a}
    if len(lengths) != 1:
        problems.append("maximal nodes of A have mixed lengths")
        return problems
    l_a = lengths.pop()
    succ = {s.append(b) for s in max_a for b in (0, 1)}
    if ctx.case == "a":
        if ctx.k < 1:
            problems.append("case (a) needs k >= 1")
        approx = as_approx(ctx.a_nodes, ctx.oracle)
        if is_approximation(approx, ctx.oracle) != ctx.k:
            problems.append(f"A is not a {ctx.k}-level approximation")
        if ctx.b_nodes != ctx.a_nodes | succ:
            problems.append("case (a) needs B = A plus all immediate successors")
    else:
        if len(max_a) != 1 << ctx.k:
            problems.append(f"case (b) needs card(max(A)) = 2^k, got {len(max_a)}")
        extra = ctx.b_nodes - ctx.a_nodes
        if not extra <= succ:
            problems.append("B adds nodes that are not immediate successors of max(A)")
        for s in max_a:
            mine = [t for t in extra if t.len == l_a + 1 and is_initial_segment(s, t)]
            if len(mine) != 1:
                problems.append(
                    f"max(A) node {s.text()!r} has {len(mine)} extensions in B, wanted 1")
    if not problems:
        try:
            ctx.s_d()
        except ContextError as err:
            problems.extend(err.problems)
    return problems


def ensure_valid(ctx: ExtensionContext):
    problems = validate_context(ctx)
    if problems:
        raise ContextError(problems)


def _slot_candidates(ctx: ExtensionContext, level: int,
                     within: CodingTree | None = None):
    """Per-slot node choices at the level: coding slot pinned to the level's
    coding node, other slots free over their slot's extensions."""
    tree = ctx.tree
    c_lvl = tree.coding_at(level)
    s_d = ctx.s_d()
    if c_lvl is None or not is_initial_segment(s_d, c_lvl):
        return None
    allowed = None
    if within is not None:
        allowed = {v for v in within.nodes if v.len == level}
        if c_lvl not in allowed:
            return None
    slots = ctx.slots()
    per_slot = []
    for s in slots:
        if s == s_d:
            per_slot.append([c_lvl])
            continue
        opts = []
        for high in range(1 << (level - s.len)):
            v = Node(s.bits | (high << s.len), level)
            if v != c_lvl and (allowed is None or v in allowed):
                opts.append(v)
        if not opts:
            return None
        opts.sort(key=Node.lex_key)
        per_slot.append(opts)
    return per_slot


def _induced(ctx: ExtensionContext, level_set: tuple) -> FiniteApprox:
    """The approximation induced by the meet closure of a top level set."""
    return as_approx(meet_closure(level_set), ctx.oracle)


def iter_extensions(ctx: ExtensionContext, level: int,
                    within: CodingTree | None = None,
                    validate_all: bool = False) -> Iterator[FiniteApprox]:
    """Lazily yield the (k+1)-level extensions of B whose new level sits at
    `level`, in lexicographic slot order.

    All candidates over one slot share their bits at every lower level of the
    induced tree, so similarity to the standard shape is decided once per
    level; set validate_all to re-check every candidate individually.
    """
    if level >= ctx.depth:
        raise DepthError(f"level {level} outside truncation of depth {ctx.depth}")
    if level < ctx.l_b:
        return
    per_slot = _slot_candidates(ctx, level, within)
    if per_slot is None:
        return
    first = _induced(ctx, tuple(opts[0] for opts in per_slot))
    if len(first.coding) != ctx.k + 1 or not _is_approx_fast(first, ctx.oracle):
        return
    for combo in itertools.product(*per_slot):
        cand = _induced(ctx, combo)
        if validate_all and (len(cand.coding) != ctx.k + 1
                             or not _is_approx_fast(cand, ctx.oracle)):
            continue
        yield cand


def extensions(ctx: ExtensionContext, level: int,
               within: CodingTree | None = None,
               validate_all: bool = False) -> list:
    """All members of the one-step extension set with new level at `level`."""
    ensure_valid(ctx)
    return list(iter_extensions(ctx, level, within, validate_all))


def top_level_set(approx: FiniteApprox) -> LevelSet:
    top = approx.levels[-1]
    return LevelSet((v for v in approx.nodes if v.len == top), top)


def prec_cmp(f: FiniteApprox, g: FiniteApprox) -> int:
    """Restriction-then-level-set order on finite approximations."""
    if f == g:
        return EQUAL
    kf, kg = len(f.coding), len(g.coding)
    common = 0
    for j in range(1, min(kf, kg) + 1):
        if restriction(f, j) == restriction(g, j):
            common = j
        else:
            break
    if common == kf:
        return LESS
    if common == kg:
        return GREATER
    left = LevelSet((v for v in f.nodes if v.len == f.levels[common]),
                    f.levels[common])
    right = LevelSet((v for v in g.nodes if v.len == g.levels[common]),
                     g.levels[common])
    return level_set_cmp(left, right)


def enumerate_prec(ctx: ExtensionContext, bound: int) -> Iterator[FiniteApprox]:
    """Extensions with new level <= bound, in strictly increasing prec order."""
    ensure_valid(ctx)
    import functools

    for level in range(ctx.l_b, min(bound, ctx.depth - 1) + 1):
        batch = list(iter_extensions(ctx, level))
        batch.sort(key=functools.cmp_to_key(
            lambda a, b: level_set_cmp(top_level_set(a), top_level_set(b))))
        yield from batch


class NWFamily:
    """An explicit finite family with the Nash-Williams property."""

    __slots__ = ("members",)

    def __init__(self, members: Iterable[FiniteApprox], check: bool = True):
        self.members = tuple(members)
        if check and not is_nash_williams(self.members):
            raise StructureError("family violates the Nash-Williams property")

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)


def _is_restriction_of(a: FiniteApprox, b: FiniteApprox) -> bool:
    ka, kb = len(a.coding), len(b.coding)
    return ka <= kb and restriction(b, ka) == a


def is_nash_williams(members: Iterable[FiniteApprox]) -> bool:
    """No member is an initial segment of another."""
    items = list(members)
    for i, f in enumerate(items):
        for g in items[i + 1:]:
            if _is_restriction_of(f, g) or _is_restriction_of(g, f):
                return False
    return True


def family_ops(members: Iterable[FiniteApprox], b_nodes: Iterable[Node],
               tree: CodingTree) -> tuple:
    """(F_B, F|T, F-tilde): members reaching past max(B), members inside the
    tree, and all restrictions of members."""
    items = list(members)
    max_b = max_nodes(frozenset(b_nodes))
    f_b = []
    for f in items:
        k = len(f.coding)
        for j in range(k + 1):
            level = restriction(f, j).max_nodes()
            if level and end_extends(level, max_b):
                f_b.append(f)
                break
    f_t = [f for f in items
           if f.nodes <= tree.nodes and set(f.coding) <= set(tree.coding)]
    f_tilde = {restriction(f, j) for f in items for j in range(len(f.coding) + 1)}
    return tuple(f_b), tuple(f_t), f_tilde


def rank(family: NWFamily | Iterable[FiniteApprox]) -> OrdinalCNF:
    """Order type of an explicit finite Nash-Williams family: its cardinality."""
    if not isinstance(family, NWFamily):
        family = NWFamily(family)
    return OrdinalCNF.from_int(len(family))


def symbolic_rank(base: FiniteApprox, n: int) -> OrdinalCNF:
    """Order type of the n-step cylinder above a k-level approximation: w^n."""
    if n < 0:
        raise DomainError("negative cylinder height")
    if n == 0:
        return ONE
    return OrdinalCNF.omega_power(n)


def classify(approx: FiniteApprox, members: Iterable[FiniteApprox]) -> int:
    """Three-way split: 0 in the family, 1 outside all restrictions, 2 a
    proper restriction of some member."""
    items = list(members)
    if any(approx == f for f in items):
        return 0
    _, _, tilde = family_ops(items, frozenset(), CodingTree((), (), ()))
    return 2 if approx in tilde else 1


class FrontVerdict(Enum):
    TRUE = "true"
    FALSE = "false"
    UNDECIDED = "undecided"


def _complete_through(ctx: ExtensionContext, depth: int) -> Iterator[FiniteApprox]:
    """All members of the depth-step set through B, within the truncation."""
    def climb(current: FiniteApprox):
        if len(current.coding) == depth:
            yield current
            return
        produced = False
        for level in range(current.levels[-1] + 1, ctx.depth):
            sub = context_above(ctx.oracle, ctx.depth, current)
            for nxt in iter_extensions(sub, level):
                produced = True
                yield from climb(nxt)
        if not produced:
            yield current  # dead end within the truncation

    for level in range(ctx.l_b, ctx.depth):
        for ext in iter_extensions(ctx, level):
            yield from climb(ext)


def context_above(oracle: AdjacencyOracle, depth: int,
                  approx: FiniteApprox) -> ExtensionContext:
    """The case (a) context extending a given approximation by one level."""
    from .trees import plus

    return ExtensionContext(
        oracle=oracle,
        depth=depth,
        a_nodes=approx.nodes,
        b_nodes=plus(approx.nodes),
        k=len(approx.coding),
        case="a",
        d=approx.levels[-1] + 1,
    )


def is_front(members: Iterable[FiniteApprox], ctx: ExtensionContext,
             depth: int) -> FrontVerdict:
    """Decide front-ness against all depth-level continuations through B.

    FALSE is definitive (a continuation dodges the family and no member could
    catch it deeper); TRUE is relative to the truncation; UNDECIDED means some
    continuation misses the family but members above it remain possible.
    """
    ensure_valid(ctx)
    items = list(members)
    if not is_nash_williams(items):
        return FrontVerdict.FALSE
    if depth <= ctx.k:
        raise DomainError(f"front depth {depth} must exceed k={ctx.k}")
    undecided = False
    for cand in _complete_through(ctx, depth):
        kc = len(cand.coding)
        if any(_is_restriction_of(f, cand) for f in items):
            continue
        if any(_is_restriction_of(cand, f) and len(f.coding) > kc for f in items):
            undecided = True
            continue
        return FrontVerdict.FALSE
    return FrontVerdict.UNDECIDED if undecided else FrontVerdict.TRUE


# ---------------------------------------------------------------------------
# Monochromatization search and certificates
# ---------------------------------------------------------------------------


@dataclass
class Certificate:
    """A chain of approximations on which a coloring is constant.

    The chain starts at a one-step extension of the context's B and grows one
    coding level at a time; every extension of B inside the final member has
    the stated color.
    """

    context: ExtensionContext
    color: int
    chain: tuple

    def final(self) -> FiniteApprox:
        return self.chain[-1]

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "context": self.context.to_json(),
            "color": self.color,
            "chain": [c.to_json_dict() for c in self.chain],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Certificate":
        chain = tuple(FiniteApprox.from_tree(CodingTree.from_json_dict(d))
                      for d in doc["chain"])
        return cls(ExtensionContext.from_json(doc["context"]),
                   int(doc["color"]), chain)


def hosted_extensions(ctx: ExtensionContext, approx: FiniteApprox,
                      level: int) -> list:
    """Extensions of the context's B living inside the approximation at one level."""
    return list(iter_extensions(ctx, level, within=approx))


def search_monochromatic(ctx: ExtensionContext, coloring: Coloring,
                         target_levels: int, depth_budget: int
                         ) -> Optional[Certificate]:
    """Backtracking search for a certificate with the requested number of
    extension-hosting levels, using tree levels below the budget.

    Levels are tried in ascending order and node choices in lexicographic
    order, so the first certificate in that order is returned.  Chain members
    whose top level hosts no extension of B are allowed; only hosting levels
    count toward the target.
    """
    ensure_valid(ctx)
    if target_levels < 1:
        raise DomainError("target_levels must be at least 1")
    bound = min(depth_budget, ctx.depth - 1)

    def climb(chain: list, color: int, hosted: int, next_level: int):
        if hosted == target_levels:
            return Certificate(ctx, color, tuple(chain))
        current = chain[-1]
        for level in range(next_level, bound + 1):
            sub = context_above(ctx.oracle, ctx.depth, current)
            for cand in iter_extensions(sub, level):
                new = hosted_extensions(ctx, cand, level)
                colors = {coloring(e) for e in new}
                if new and colors != {color}:
                    continue
                got = climb(chain + [cand], color,
                            hosted + (1 if new else 0), level + 1)
                if got is not None:
                    return got
        return None

    for level in range(ctx.l_b, bound + 1):
        for first in iter_extensions(ctx, level):
            got = climb([first], coloring(first), 1, level + 1)
            if got is not None:
                return got
    return None


@dataclass
class VerificationResult:
    ok: bool
    problems: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def verify_certificate(cert: Certificate, coloring: Coloring) -> VerificationResult:
    """Independent replay of a certificate.

    Re-validates the context, the chain structure (each member a genuine
    approximation inside the truncation, each a restriction of the next, the
    first a one-step extension of B), then re-enumerates every extension of B
    inside the final member and checks the color.
    """
    problems = []
    ctx = cert.context
    ctx_problems = validate_context(ctx)
    if ctx_problems:
        return VerificationResult(False, [f"context: {p}" for p in ctx_problems])
    tree = ctx.tree
    if not cert.chain:
        return VerificationResult(False, ["empty chain"])
    for i, member in enumerate(cert.chain):
        if not member.nodes <= tree.nodes:
            problems.append(f"chain[{i}] leaves the truncation")
            continue
        if tuple(member.coding) != ambient_coding(member.nodes, ctx.oracle):
            problems.append(f"chain[{i}] coding nodes are not ambient coding nodes")
        if is_approximation(member, ctx.oracle) != len(member.coding):
            problems.append(f"chain[{i}] is not a genuine approximation")
    if problems:
        return VerificationResult(False, problems)
    first = cert.chain[0]
    if len(first.coding) != ctx.k + 1:
        problems.append("chain[0] is not a one-step extension of B")
    else:
        if not end_extends(top_level_set(first), ctx.max_b):
            problems.append("chain[0] max does not end-extend max(B)")
        if not is_initial_segment(ctx.s_d(), first.coding[-1]):
            problems.append("chain[0] coding node misses the designated slot")
    for i in range(len(cert.chain) - 1):
        a, b = cert.chain[i], cert.chain[i + 1]
        if len(b.coding) != len(a.coding) + 1 or restriction(b, len(a.coding)) != a:
            problems.append(f"chain[{i + 1}] does not extend chain[{i}] by one level")
    if problems:
        return VerificationResult(False, problems)
    final = cert.final()
    seen = 0
    for level in final.levels:
        if level < ctx.l_b:
            continue
        for ext in iter_extensions(ctx, level, within=final, validate_all=True):
            seen += 1
            got = coloring(ext)
            if got != cert.color:
                problems.append(
                    f"extension at level {level} has color {got}, expected {cert.color}")
    if seen == 0:
        problems.append("certificate hosts no extensions of B")
    return VerificationResult(not problems, problems)


# ---------------------------------------------------------------------------
# Coloring oracles
# ---------------------------------------------------------------------------


def coloring_from_spec(spec: str) -> Coloring:
    """Parse a coloring spec: const:<c>, parity-level, hash:<seed>:<colors>,
    or file:<json path> mapping canonical digests to colors."""
    if spec.startswith("const:"):
        value = int(spec.split(":", 1)[1])
        return lambda approx: value
    if spec == "parity-level":
        return lambda approx: approx.levels[-1] % 2
    if spec.startswith("hash:"):
        _, seed, ncolors = spec.split(":")
        return hash_coloring(int(seed, 0), int(ncolors))
    if spec.startswith("file:"):
        import json

        with open(spec[5:], "r", encoding="utf-8") as fh:
            table = json.load(fh)
        mapping = {str(k): int(v) for k, v in table.items()}

        def from_file(approx: FiniteApprox) -> int:
            digest = tree_form(approx).digest()
            if digest not in mapping:
                raise DomainError(f"coloring file lacks digest {digest}")
            return mapping[digest]

        return from_file
    raise DomainError(f"bad coloring spec {spec!r}")


def hash_coloring(seed: int, ncolors: int) -> Coloring:
    """Deterministic pseudo-random coloring keyed by the canonical digest."""
    if ncolors < 1:
        raise DomainError("need at least one color")

    def color(approx: FiniteApprox) -> int:
        digest = tree_form(approx).digest()
        h = hashlib.blake2b(f"{seed}:{digest}".encode(), digest_size=8).digest()
        return int.from_bytes(h, "little") % ncolors

    return color
