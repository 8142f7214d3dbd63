"""Coding-tree combinatorics of the Rado graph.

Finite binary sequences and coding trees, strong similarity canonicalization,
big Ramsey degree enumeration, Nash-Williams fronts and ranks, and a
finite-depth monochromatization search with independently verifiable
certificates.
"""

from .core import (COMPARABLE, EQUAL, GREATER, LESS, LevelSet, Node,
                   lex_cmp, lex_ext_cmp, level_set_cmp, max_depth, meet,
                   restrict, tri_cmp)
from .degrees import (TypeCatalog, big_ramsey_degree, brute_force_types,
                      devlin_count, enumerate_diagonal_types, realize_witness,
                      realize_coding_witness)
from .errors import (BudgetError, ContextError, DepthError, DomainError,
                     RadoRamseyError, StructureError)
from .ordinals import OrdinalCNF
from .rado import (AdjacencyOracle, BIT_ORACLE, FiniteGraph, bit_adjacent,
                   build_SR, check_extension_property, decode_graph,
                   oracle_from_spec, roundtrip_check, tree_of_subgraph)
from .ramsey_space import (Certificate, ExtensionContext, FrontVerdict,
                           NWFamily, classify, coloring_from_spec,
                           enumerate_prec, extensions, family_ops, is_front,
                           is_nash_williams, prec_cmp, rank,
                           search_monochromatic, symbolic_rank,
                           validate_context, verify_certificate)
from .similarity import (CanonicalForm, SimKind, are_strongly_similar,
                         brute_force_similarity, canonical_form,
                         is_approximation, is_strong_similarity,
                         is_strongly_diagonal)
from .trees import (CodingTree, FiniteApprox, cut, depth_in, le_fin,
                    meet_closure, passing_number, plus, restriction,
                    is_strong_subtree)

__version__ = "0.1.0"
