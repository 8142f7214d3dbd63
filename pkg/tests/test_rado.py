import itertools

import pytest

from radoramsey.core import Node
from radoramsey.errors import DepthError, DomainError
from radoramsey.graph6 import parse_graph6, write_graph6
from radoramsey.rado import (AdjacencyOracle, BIT_ORACLE, FiniteGraph,
                             bit_adjacent, build_SR, check_extension_property,
                             coding_node, decode_graph, graph_from_name,
                             graph_isomorphic, oracle_from_spec,
                             roundtrip_check, tree_of_subgraph, RadoTreeSource)
from radoramsey.trees import restriction

N = Node.from_text


def oracle_graph(oracle, n):
    return FiniteGraph(n, ((a, b) for b in range(n) for a in range(b)
                           if oracle.adjacent(a, b)))


def test_bit_adjacent_examples():
    assert bit_adjacent(0, 1)
    assert not bit_adjacent(2, 3)
    assert bit_adjacent(1, 2)
    assert bit_adjacent(2, 1)  # symmetric
    with pytest.raises(DomainError):
        bit_adjacent(3, 3)


def test_build_sr_examples():
    assert build_SR(BIT_ORACLE, 4).coding[3] == N("110")
    assert build_SR(BIT_ORACLE, 5).coding[4] == N("0010")
    assert build_SR(BIT_ORACLE, 1).coding[0] == N("")


def test_build_sr_shape():
    sr = build_SR(BIT_ORACLE, 9)
    for n in range(9):
        assert sr.coding[n].len == n
        assert len([t for t in sr.nodes if t.len == n]) == 1 << n


def test_build_sr_depth_guard(monkeypatch):
    monkeypatch.setenv("RADO_MAX_DEPTH", "10")
    with pytest.raises(DepthError):
        build_SR(BIT_ORACLE, 11)


def test_decode_examples():
    path = decode_graph(restriction(build_SR(BIT_ORACLE, 4), 3))
    assert path.edges() == [(0, 1), (1, 2)]
    single = decode_graph(build_SR(BIT_ORACLE, 1))
    assert single.n == 1 and not single.edges()


@pytest.mark.parametrize("oracle", [
    BIT_ORACLE,
    AdjacencyOracle("seeded", seed=7),
    AdjacencyOracle("explicit", graph=graph_from_name("C5").complement()),
])
def test_decode_matches_oracle_all_kinds(oracle):
    top = 16 if oracle.kind != "explicit" else 5
    for k in range(top + 1):
        assert decode_graph(build_SR(oracle, k)) == oracle_graph(oracle, k)


def test_seeded_oracle_deterministic():
    a = AdjacencyOracle("seeded", seed=123)
    b = AdjacencyOracle("seeded", seed=123)
    assert [a.adjacent(i, j) for i, j in itertools.combinations(range(12), 2)] == \
           [b.adjacent(i, j) for i, j in itertools.combinations(range(12), 2)]
    c = AdjacencyOracle("seeded", seed=124)
    assert any(a.adjacent(i, j) != c.adjacent(i, j)
               for i, j in itertools.combinations(range(12), 2))


def test_explicit_overflow():
    oracle = AdjacencyOracle("explicit", graph=graph_from_name("K3"))
    assert oracle.adjacent(0, 2)
    with pytest.raises(DepthError):
        oracle.adjacent(0, 3)


def test_extension_property_reports():
    good = check_extension_property(BIT_ORACLE, 1024, budget=3)
    assert good.ok and good.checked > 500

    k3 = AdjacencyOracle("explicit", graph=graph_from_name("K3"))
    bad = check_extension_property(k3, 3, budget=3, pool=range(3))
    assert not bad.ok
    assert ((), (0, 1, 2)) in bad.failures

    tiny = check_extension_property(BIT_ORACLE, 2, budget=0)
    assert tiny.ok and tiny.checked == 1


def test_graph6_known_vectors():
    assert FiniteGraph(2).to_graph6() == "A?"
    assert FiniteGraph(2, [(0, 1)]).to_graph6() == "A_"
    assert graph_from_name("K3").to_graph6() == "Bw"
    assert graph_from_name("P3").to_graph6() == "Bg"
    assert FiniteGraph.from_graph6(">>graph6<<Bw") == graph_from_name("K3")


def test_graph6_roundtrip_small():
    for n in range(6):
        for mask in range(1 << (n * (n - 1) // 2)):
            pairs = list(itertools.combinations(range(n), 2))
            edges = [pairs[i] for i in range(len(pairs)) if (mask >> i) & 1]
            g = FiniteGraph(n, edges)
            assert FiniteGraph.from_graph6(g.to_graph6()) == g


def test_graph6_large_n_and_errors():
    g = FiniteGraph(80, [(0, 79), (3, 4)])
    text = g.to_graph6()
    assert text.startswith("~")
    assert FiniteGraph.from_graph6(text) == g
    with pytest.raises(DomainError):
        parse_graph6("B")  # truncated body
    with pytest.raises(DomainError):
        parse_graph6("Bww")  # overlong body
    with pytest.raises(DomainError):
        parse_graph6("")


def test_tree_of_subgraph_examples():
    sr = build_SR(BIT_ORACLE, 6)
    pair = tree_of_subgraph({1, 3}, sr)
    assert [c.text() for c in pair.coding] == ["1", "110"]
    assert pair.levels == (1, 3)
    assert decode_graph(pair).edges() == [(0, 1)]
    empty = tree_of_subgraph(set(), sr)
    assert len(empty.nodes) == 0
    with pytest.raises(DepthError):
        tree_of_subgraph({7}, sr)


def test_tree_of_subgraph_induced_depth6():
    sr = build_SR(BIT_ORACLE, 6)
    whole = decode_graph(sr)
    for size in range(7):
        for combo in itertools.combinations(range(6), size):
            sub = tree_of_subgraph(combo, sr)
            assert decode_graph(sub) == whole.induced(combo)


def test_tree_of_subgraph_is_reencoding_fixed_point():
    sr = build_SR(BIT_ORACLE, 7)
    skinny = tree_of_subgraph(range(7), sr)
    again = tree_of_subgraph(range(7), skinny)
    assert again == skinny


def test_roundtrip_check():
    for k in range(11):
        assert roundtrip_check(restriction(build_SR(BIT_ORACLE, k), k), BIT_ORACLE)
    mangled = build_SR(BIT_ORACLE, 3)
    from radoramsey.trees import FiniteApprox

    broken = FiniteApprox(mangled.nodes - {N("10")}, mangled.levels,
                          mangled.coding, validate=False)
    assert not roundtrip_check(broken, BIT_ORACLE)


def test_lazy_tree_source():
    src = RadoTreeSource(BIT_ORACLE, 12)
    assert src.coding_at(5) == coding_node(BIT_ORACLE, 5)
    assert src.coding_at(5) is src.coding_at(5) or src.coding_at(5) == src.coding_at(5)
    assert src.truncate(4) == build_SR(BIT_ORACLE, 4)
    with pytest.raises(DepthError):
        src.coding_at(12)


def test_graph_names_and_iso():
    assert graph_from_name("K4").degree_sequence() == (3, 3, 3, 3)
    assert graph_from_name("Kbar3").edges() == []
    assert graph_from_name("P4").degree_sequence() == (1, 1, 2, 2)
    assert graph_from_name("C4").degree_sequence() == (2, 2, 2, 2)
    assert graph_isomorphic(graph_from_name("P3"),
                            FiniteGraph(3, [(0, 2), (1, 2)]))
    assert not graph_isomorphic(graph_from_name("P3"), graph_from_name("K3"))
    assert graph_from_name("K3").complement() == graph_from_name("Kbar3")


def test_oracle_from_spec(tmp_path):
    assert oracle_from_spec("bit") is BIT_ORACLE
    assert oracle_from_spec("seed:0x10").seed == 16
    path = tmp_path / "g.g6"
    path.write_text(graph_from_name("K3").to_graph6())
    assert oracle_from_spec(f"file:{path}").graph == graph_from_name("K3")
    with pytest.raises(DomainError):
        oracle_from_spec("nope")
