import functools
import itertools

import pytest
from hypothesis import given, strategies as st

from radoramsey.core import (COMPARABLE, EQUAL, GREATER, LESS, LevelSet, Node,
                             all_nodes, end_extends, is_initial_segment,
                             level_set_cmp, lex_cmp, lex_ext_cmp, meet,
                             restrict, tri_cmp)
from radoramsey.errors import DepthError, DomainError

N = Node.from_text

nodes_st = st.builds(
    lambda bits: Node.from_bits(bits),
    st.lists(st.integers(0, 1), max_size=12),
)


def test_restrict_examples():
    assert restrict(N("110"), 2) == N("11")
    assert restrict(N("01"), 0) == N("")
    with pytest.raises(DomainError):
        restrict(N("01"), 3)


def test_meet_examples():
    assert meet(N("011"), N("0101")) == N("01")
    assert meet(N("0"), N("10")) == N("")
    s = N("1101")
    assert meet(s, s) == s


def test_lex_cmp_examples():
    assert lex_cmp(N("01"), N("1")) == LESS
    assert lex_cmp(N("01"), N("001")) == GREATER
    assert lex_cmp(N("0"), N("01")) == COMPARABLE


def test_lex_ext_cmp_examples():
    assert lex_ext_cmp(N("0"), N("01")) == LESS
    assert lex_ext_cmp(N("00"), N("0")) == LESS
    assert lex_ext_cmp(N("1"), N("1")) == EQUAL


def test_tri_cmp_examples():
    assert tri_cmp(N("1"), N("00")) == LESS
    assert tri_cmp(N("01"), N("10")) == LESS
    assert tri_cmp(N(""), N("")) == EQUAL


def test_level_set_cmp_examples():
    assert level_set_cmp(LevelSet([N("0")]), LevelSet([N("00")])) == LESS
    assert level_set_cmp(LevelSet([N("0")]), LevelSet([N("0"), N("1")])) == LESS
    assert level_set_cmp(LevelSet([N("00"), N("10")]),
                         LevelSet([N("00"), N("11")])) == LESS
    assert level_set_cmp(LevelSet([N("1"), N("0")]),
                         LevelSet([N("0"), N("1")])) == EQUAL


def test_level_set_validation():
    with pytest.raises(DomainError):
        LevelSet([N("0"), N("00")])
    assert len(LevelSet([N("0"), N("0")])) == 1
    assert LevelSet([], length=3).length == 3


@given(nodes_st, nodes_st)
def test_meet_commutative_and_short(s, t):
    m = meet(s, t)
    assert m == meet(t, s)
    assert m.len <= min(s.len, t.len)
    assert is_initial_segment(m, s) and is_initial_segment(m, t)


@given(nodes_st, nodes_st, nodes_st)
def test_meet_associative(s, t, u):
    assert meet(meet(s, t), u) == meet(s, meet(t, u))


@given(nodes_st)
def test_meet_idempotent_and_text_roundtrip(s):
    assert meet(s, s) == s
    assert Node.from_text(s.text()) == s


def _check_total_order(cmp, pool):
    # trichotomy on all pairs, then agreement with the sorted sequence;
    # agreement with a strict total order gives transitivity for free
    for s, t in itertools.product(pool, repeat=2):
        c, d = cmp(s, t), cmp(t, s)
        if s == t:
            assert c == EQUAL and d == EQUAL
        else:
            assert {c, d} == {LESS, GREATER}, (s, t, c, d)
    ordered = sorted(pool, key=functools.cmp_to_key(cmp))
    index = {v: i for i, v in enumerate(ordered)}
    for s, t in itertools.product(pool, repeat=2):
        want = EQUAL if index[s] == index[t] else (
            LESS if index[s] < index[t] else GREATER)
        assert cmp(s, t) == want


def test_tri_cmp_total_order_depth6():
    _check_total_order(tri_cmp, all_nodes(6))


def test_lex_ext_cmp_total_order_depth6():
    _check_total_order(lex_ext_cmp, all_nodes(6))


def test_lex_ext_cmp_dense_prefix():
    # between any related pair of length <= 5 lies a node of length <= 6
    small = all_nodes(5)
    pool = all_nodes(6)
    for s, t in itertools.permutations(small, 2):
        if lex_ext_cmp(s, t) != LESS:
            continue
        assert any(lex_ext_cmp(s, m) == LESS and lex_ext_cmp(m, t) == LESS
                   for m in pool), (s.text(), t.text())


def test_restrict_at_meet_length_exhaustive():
    pool = all_nodes(6)
    for s, t in itertools.combinations(pool, 2):
        m = meet(s, t).len
        assert restrict(s, m) == restrict(t, m)


def test_node_storage_invariants():
    with pytest.raises(DomainError):
        Node(0b100, 2)  # bit outside the declared length
    with pytest.raises(DomainError):
        Node(-1, 4)
    assert Node(0b10, 2).text() == "01"
    with pytest.raises(DomainError):
        N("01")[2]


def test_max_depth_env_override(monkeypatch):
    monkeypatch.setenv("RADO_MAX_DEPTH", "8")
    with pytest.raises(DepthError):
        Node(0, 9)
    assert Node(0, 8).len == 8
    monkeypatch.delenv("RADO_MAX_DEPTH")
    assert Node(0, 64).len == 64


def test_end_extends():
    x = [N("010"), N("110")]
    y = [N("0"), N("1")]
    assert end_extends(x, y)
    assert end_extends(y, y)
    assert not end_extends([N("010"), N("011")], y)  # misses the 1 side
    assert end_extends([], [])
    assert not end_extends([], y)


def test_lex_key_orders_equal_lengths():
    level = sorted((Node(b, 3) for b in range(8)), key=Node.lex_key)
    texts = [v.text() for v in level]
    assert texts == ["000", "001", "010", "011", "100", "101", "110", "111"]
