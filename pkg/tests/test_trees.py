import itertools
import math

import pytest

from radoramsey.core import Node, all_nodes, lex_cmp, COMPARABLE, meet
from radoramsey.errors import DepthError, DomainError, StructureError
from radoramsey.rado import BIT_ORACLE, build_SR
from radoramsey.trees import (CodingTree, FiniteApprox, cut, depth_in,
                              is_meet_closed, is_strong_subtree, le_fin,
                              level_closure, max_nodes, meet_closure, plus,
                              passing_number, restriction)

N = Node.from_text


def test_meet_closure_examples():
    closed = meet_closure({N("00"), N("01"), N("11")})
    assert closed == {N(""), N("0"), N("00"), N("01"), N("11")}
    assert meet_closure({N("0")}) == {N("0")}
    assert meet_closure({N("00"), N("01")}) == {N("0"), N("00"), N("01")}


def test_meet_closure_idempotent_monotone_exhaustive():
    pool = all_nodes(4)
    for size in range(5):
        for combo in itertools.combinations(pool, size):
            closed = meet_closure(combo)
            assert meet_closure(closed) == closed
            assert is_meet_closed(closed)
            for extra in pool[:8]:
                assert closed <= meet_closure(set(combo) | {extra})
            # incomparable pairs have their meet in the closure
            for s, t in itertools.combinations(closed, 2):
                if lex_cmp(s, t) != COMPARABLE:
                    assert meet(s, t) in closed


def test_cut_examples():
    assert cut({N("0"), N("110")}, 2) == {N("0"), N("11")}
    stuff = {N("0"), N("10"), N("111")}
    assert cut(stuff, 5) == stuff
    assert cut({N("11")}, 0) == {N("")}


def test_plus_examples():
    assert plus({N("0"), N("1")}) == {N("0"), N("1"), N("00"), N("01"),
                                      N("10"), N("11")}
    assert plus({N("")}) == {N(""), N("0"), N("1")}
    assert plus(set()) == set()
    got = plus({N(""), N("0"), N("1")})
    assert max_nodes(got) == {N("00"), N("01"), N("10"), N("11")}


def test_plus_ambient_level_check():
    tree = build_SR(BIT_ORACLE, 3)
    assert plus({N("0")}, ambient=tree) == {N("0"), N("00"), N("01")}
    with pytest.raises(StructureError):
        plus({N("0101")}, ambient=tree)


def test_restriction_examples():
    sr = build_SR(BIT_ORACLE, 5)
    r3 = restriction(sr, 3)
    assert len(r3.nodes) == 7
    assert all(t.len < 3 for t in r3.nodes)
    assert [c.text() for c in r3.coding] == ["", "1", "01"]
    assert len(restriction(sr, 0).nodes) == 0
    with pytest.raises(DepthError):
        restriction(sr, 6)


def test_restriction_chain_depth8():
    sr = build_SR(BIT_ORACLE, 8)
    for j in range(9):
        rj = restriction(sr, j)
        for k in range(j, 9):
            rk = restriction(sr, k)
            assert restriction(rk, j) == rj


def test_le_fin_and_depth_in():
    sr = build_SR(BIT_ORACLE, 5)
    r1, r2 = restriction(sr, 1), restriction(sr, 2)
    assert le_fin(r1, r1)
    assert not le_fin(r1, r2)
    assert le_fin(restriction(sr, 0), r2)
    assert depth_in(sr, r2) == 2
    assert depth_in(sr, restriction(sr, 0)) == 0
    stray = FiniteApprox([N("11111")], [5], [])  # node outside the truncation
    assert depth_in(sr, stray) == math.inf
    for k in range(6):
        a = restriction(sr, k)
        d = depth_in(sr, a)
        assert d != math.inf and le_fin(a, restriction(sr, d))


def test_passing_number():
    assert passing_number(N("110"), N("1")) == 1
    assert passing_number(N("0010"), N("01")) == 1
    with pytest.raises(DomainError):
        passing_number(N("1"), N("10"))


def test_is_strong_subtree():
    full = CodingTree(all_nodes(2), [0, 1, 2])
    assert is_strong_subtree(full, full)
    branch = CodingTree([N(""), N("1"), N("11")], [0, 1, 2])
    assert not is_strong_subtree(branch, full)
    spread = CodingTree([N(""), N("00"), N("01"), N("10"), N("11")], [0, 2])
    assert is_strong_subtree(spread, full)


def test_coding_tree_validation():
    with pytest.raises(StructureError):
        CodingTree([N("0")], [0, 1])  # root missing at level 0
    with pytest.raises(StructureError):
        CodingTree([N(""), N("0")], [0, 2])  # length 1 is not a level
    with pytest.raises(StructureError):
        CodingTree([N("")], [0], [N("1")])  # coding node not in the tree
    with pytest.raises(StructureError):
        CodingTree([N(""), N("0"), N("1")], [0, 1], [N("0"), N("1")])


def test_tree_json_roundtrip():
    sr = build_SR(BIT_ORACLE, 4)
    doc = sr.to_json_dict()
    again = CodingTree.from_json_dict(doc)
    assert again == sr


def test_level_closure():
    closed, levels = level_closure({N("10"), N("0")})
    assert levels == (1, 2)
    assert closed == {N("1"), N("10"), N("0")}
