import pytest

from radoramsey.core import Node
from radoramsey.errors import BudgetError
from radoramsey.degrees import (big_ramsey_degree, brute_force_types,
                                devlin_count, enumerate_diagonal_types,
                                leaf_graph, realize_coding_witness,
                                realize_witness)
from radoramsey.rado import BIT_ORACLE, graph_from_name
from radoramsey.similarity import SimKind, canonical_form, is_strongly_diagonal
from radoramsey.trees import meet_closure

N = Node.from_text


def test_singleton_counts():
    assert len(enumerate_diagonal_types(1, SimKind.FULL)) == 1
    assert len(brute_force_types(1, 3, SimKind.FULL)) == 1


def test_two_leaf_counts():
    assert len(enumerate_diagonal_types(2, SimKind.FULL)) == 4
    assert len(enumerate_diagonal_types(2, SimKind.ORDER_ONLY)) == 2


def test_oracle_agreement_small():
    for n in (1, 2):
        for kind in (SimKind.FULL, SimKind.ORDER_ONLY):
            enum = enumerate_diagonal_types(n, kind)
            brute = brute_force_types(n, 5, kind)
            assert enum.digests() == brute.digests(), (n, kind)


def test_depth_stability():
    # digest sets grow with depth and stabilize by 2n+1
    for kind in (SimKind.FULL, SimKind.ORDER_ONLY):
        previous = set()
        for depth in range(1, 7):
            got = brute_force_types(2, depth, kind).digests()
            assert previous <= got
            previous = got
        assert previous == brute_force_types(2, 5, kind).digests()
        assert previous == enumerate_diagonal_types(2, kind).digests()


def test_degree_examples():
    assert big_ramsey_degree(graph_from_name("K1")).degree == 1
    k2 = big_ramsey_degree(graph_from_name("K2"))
    e2 = big_ramsey_degree(graph_from_name("Kbar2"))
    assert k2.degree == 2 and e2.degree == 2
    # partition property: unlabeled degrees exhaust the full type count
    assert k2.degree + e2.degree == k2.total_types == 4


def test_devlin_counts():
    assert [devlin_count(n) for n in (1, 2, 3)] == [1, 2, 16]


def test_budget_guards():
    with pytest.raises(BudgetError):
        enumerate_diagonal_types(7)
    with pytest.raises(BudgetError):
        brute_force_types(5, 5)
    with pytest.raises(BudgetError):
        brute_force_types(2, 8)
    with pytest.raises(BudgetError):
        devlin_count(6)
    with pytest.raises(BudgetError):
        big_ramsey_degree(graph_from_name("K7"))


def test_witnesses_recanonicalize():
    for kind in (SimKind.FULL, SimKind.ORDER_ONLY):
        catalog = enumerate_diagonal_types(2, kind)
        for form, _, stored in catalog.entries.values():
            witness = realize_witness(form, 6)
            assert witness is not None
            assert is_strongly_diagonal(witness)
            closure = meet_closure(witness)
            assert canonical_form(closure, members=witness, kind=kind) == form
            # the stored witness doubles as one
            assert canonical_form(meet_closure(stored), members=stored,
                                  kind=kind) == form


def test_witness_depth_limit():
    catalog = enumerate_diagonal_types(2, SimKind.FULL)
    form = next(iter(catalog.entries.values()))[0]
    assert realize_witness(form, 2) is None  # needs 3 distinct lengths
    assert realize_witness(form, 3) is not None


def test_singleton_witness_is_root():
    catalog = enumerate_diagonal_types(1, SimKind.FULL)
    (form, _, _), = catalog.entries.values()
    assert realize_witness(form, 1) == (N(""),)


def test_coding_witness_edge_types():
    catalog = enumerate_diagonal_types(2, SimKind.FULL)
    found = 0
    for form, _, _ in catalog.entries.values():
        if leaf_graph(form).edges() == [(0, 1)]:
            witness = realize_coding_witness(form, BIT_ORACLE, 16)
            assert witness is not None
            assert is_strongly_diagonal(witness)
            closure = meet_closure(witness)
            assert canonical_form(closure, members=witness,
                                  kind=SimKind.FULL) == form
            found += 1
    assert found == 2


def test_leaf_graph_reads_passing_bits():
    catalog = enumerate_diagonal_types(2, SimKind.FULL)
    graphs = sorted(leaf_graph(f).to_graph6() for f, _, _ in catalog.entries.values())
    assert graphs == ["A?", "A?", "A_", "A_"]


def test_parallel_enumeration_matches_serial():
    serial = enumerate_diagonal_types(3, SimKind.FULL, workers=1)
    parallel = enumerate_diagonal_types(3, SimKind.FULL, workers=4)
    assert serial.digests() == parallel.digests()
    assert serial.to_json(include_witnesses=True) == \
        parallel.to_json(include_witnesses=True)
