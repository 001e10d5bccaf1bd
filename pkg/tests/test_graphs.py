import itertools
import random

import numpy as np
import pytest

from grouphier.errors import BadParamError, LabelMismatchError, TooLargeError, UnknownLabelError
from grouphier.families import Cyclic, Dicyclic, Dihedral, GenQuaternion, build_family, elem_mul
from grouphier.graphs import (
    adj_com,
    DecompositionSignature,
    HierarchyGraph,
    Kind,
    backtrack_isomorphism,
    build_graph,
    decomposition_signature,
    edge_difference,
    edge_set_equal,
    edge_subset,
    graphs_isomorphic,
    induced_subgraph,
    is_edge_preserving,
    join_of_cliques,
    universal_vertices,
)
from grouphier.theorems import oracle_truncations


def graph_from_edges(n, edges, labels=None):
    adj = np.zeros((n, n), dtype=bool)
    for a, b in edges:
        adj[a, b] = adj[b, a] = True
    return HierarchyGraph(None, labels or [str(i) for i in range(n)], adj)


# -- small examples --


def test_cyclic_six():
    view = build_family(Cyclic(6))
    pow_, epow, com = (build_graph(view, k) for k in Kind)
    # the two generators are not powers of the order-2 or order-3 elements,
    # and elements of orders 2 and 3 are not powers of each other
    assert pow_.n_edges == 13
    assert epow.n_edges == com.n_edges == 15
    assert edge_difference(epow, pow_) == [("c(1/2)", "c(1/3)"), ("c(1/2)", "c(2/3)")]


def test_identity_is_universal_everywhere():
    for spec in oracle_truncations(32):
        view = build_family(spec)
        e = view.label(view.identity)
        for kind in Kind:
            assert e in universal_vertices(build_graph(view, kind))


def test_dinf_window_identity_degree():
    g = build_graph(build_family("dinf:0..3"), Kind.COM)
    assert g.degrees()[g.index_of("r(0)")] == 7
    assert universal_vertices(g) == ["r(0)"]


def test_quaternion_universal_vertices():
    g = build_graph(build_family(GenQuaternion(3)), Kind.POW)
    assert universal_vertices(g) == ["c(0/1)", "c(1/2)"]


def test_dihedral_commuting_reflections():
    g = build_graph(build_family(Dihedral(4)), Kind.COM)
    assert g.has_edge("c(0/1)*s", "c(1/2)*s")
    assert not g.has_edge("c(0/1)*s", "c(1/4)*s")


def test_induced_subgraph():
    g = build_graph(build_family(Cyclic(6)), Kind.POW)
    sub = induced_subgraph(g, ["c(1/3)", "c(1/2)", "c(0/1)"])
    assert sub.labels == ("c(0/1)", "c(1/2)", "c(1/3)")
    assert sub.n_edges == 2
    with pytest.raises(UnknownLabelError):
        induced_subgraph(g, ["c(1/7)"])


def test_edges_sorted_and_upper():
    g = build_graph(build_family(Dicyclic(3)), Kind.COM)
    edges = g.edges()
    assert edges == sorted(edges)
    assert all(i < j for i, j in edges)
    assert len(edges) == g.n_edges


def test_adjacency_is_read_only():
    g = build_graph(build_family(Cyclic(4)), Kind.POW)
    with pytest.raises(ValueError):
        g.adj[0, 1] = False


def test_graph_validation():
    with pytest.raises(BadParamError):
        HierarchyGraph(None, ["a", "b"], np.array([[0, 1], [0, 0]], dtype=bool))
    with pytest.raises(BadParamError):
        HierarchyGraph(None, ["a", "a"], np.zeros((2, 2), dtype=bool))


def test_label_mismatch():
    a = build_graph(build_family(Cyclic(4)), Kind.POW)
    b = build_graph(build_family(Dihedral(2)), Kind.POW)
    with pytest.raises(LabelMismatchError):
        edge_subset(a, b)
    with pytest.raises(LabelMismatchError):
        edge_set_equal(a, b)


# -- hierarchy --


@pytest.mark.parametrize("spec", oracle_truncations(256), ids=str)
def test_hierarchy_inclusions(spec):
    view = build_family(spec)
    pow_, epow, com = (build_graph(view, k) for k in (Kind.POW, Kind.EPOW, Kind.COM))
    assert edge_subset(pow_, epow)
    assert edge_subset(epow, com)


def test_hierarchy_on_windows():
    for text in ("dinf:-3..4", "qinf:default"):
        view = build_family(text)
        pow_, epow, com = (build_graph(view, k) for k in (Kind.POW, Kind.EPOW, Kind.COM))
        assert edge_subset(pow_, epow) and edge_subset(epow, com)


@pytest.mark.parametrize("text", ["dinf:-4..5", "qinf:default", "qinf:0;1/2;1/3;0 1 0;1/2 0 1;1/6 -1 2"])
def test_commutation_rule_on_windows(text):
    view = build_family(text)
    for x, y in itertools.product(view.elements, repeat=2):
        assert adj_com(x, y) == (elem_mul(x, y) == elem_mul(y, x))


# -- signatures --


def test_signature_examples():
    assert decomposition_signature(build_graph(build_family(GenQuaternion(3)), Kind.POW)) == DecompositionSignature(
        2, (6, 2, 2, 2, 2)
    )
    assert str(decomposition_signature(build_graph(build_family(Dicyclic(3)), Kind.COM))) == "(2, {4, 2, 2, 2})"
    # a path on three vertices has one universal vertex and two singletons
    assert decomposition_signature(graph_from_edges(3, [(0, 1), (1, 2)])) == DecompositionSignature(1, (1, 1))
    # a path on four vertices is not a join of cliques
    assert decomposition_signature(graph_from_edges(4, [(0, 1), (1, 2), (2, 3)])) is None


def test_signature_is_order_insensitive():
    assert DecompositionSignature(2, (2, 4)) == DecompositionSignature(2, (4, 2))


def test_join_of_cliques_roundtrip():
    for u in range(3):
        for parts in [(), (1,), (3, 1), (2, 2, 2), (5, 1, 1)]:
            g = join_of_cliques(u, parts)
            if len(g) == 0:
                continue
            sig = decomposition_signature(g)
            # a single clique with u universal vertices is a complete graph
            if len(parts) == 1:
                assert sig == DecompositionSignature(u + parts[0], ())
            else:
                assert sig == DecompositionSignature(u, parts)


def test_k3_vs_p3():
    k3 = graph_from_edges(3, [(0, 1), (1, 2), (0, 2)])
    p3 = graph_from_edges(3, [(0, 1), (1, 2)])
    assert not graphs_isomorphic(k3, p3)
    assert backtrack_isomorphism(k3, p3) is None


def test_isomorphism_mapping_is_edge_preserving():
    a = join_of_cliques(2, (4, 2))
    b = join_of_cliques(2, (2, 4))
    res = graphs_isomorphic(a, b)
    assert res.isomorphic and res.method == "signature"
    assert is_edge_preserving(a, b, res.mapping) is None


def test_com_dihedral_matches_pow_genq():
    g1 = build_graph(build_family(Dihedral(8)), Kind.COM)
    g2 = build_graph(build_family(GenQuaternion(3)), Kind.POW)
    res = graphs_isomorphic(g1, g2)
    assert res.isomorphic
    assert is_edge_preserving(g1, g2, res.mapping) is None


def test_backtracking_fallback_on_unrecognized():
    c4 = graph_from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    relabelled = graph_from_edges(4, [(0, 2), (2, 1), (1, 3), (3, 0)])
    res = graphs_isomorphic(c4, relabelled)
    assert res.isomorphic and res.method == "backtrack"
    assert is_edge_preserving(c4, relabelled, res.mapping) is None
    p4 = graph_from_edges(4, [(0, 1), (1, 2), (2, 3)])
    star = graph_from_edges(4, [(0, 1), (0, 2), (0, 3)])
    assert not graphs_isomorphic(p4, star)


def test_backtracking_limit():
    big = graph_from_edges(17, [(i, i + 1) for i in range(16)])
    with pytest.raises(TooLargeError):
        backtrack_isomorphism(big, big)


def random_graph(n, p, rng):
    return graph_from_edges(n, [(a, b) for a, b in itertools.combinations(range(n), 2) if rng.random() < p])


def test_signature_sound_against_backtracking():
    rng = random.Random(11)
    graphs = [join_of_cliques(u, parts) for u in range(3) for parts in [(1, 1), (2, 1), (3,), (2, 2), (4, 1, 1)]]
    graphs += [random_graph(rng.randint(3, 8), rng.random(), rng) for _ in range(120)]
    for g1, g2 in itertools.combinations(graphs, 2):
        if len(g1) != len(g2):
            continue
        fast = graphs_isomorphic(g1, g2).isomorphic
        slow = backtrack_isomorphism(g1, g2, max_vertices=14) is not None
        assert fast == slow


def test_is_edge_preserving_reports_bad_pair():
    p3 = graph_from_edges(3, [(0, 1), (1, 2)])
    identity = {lab: lab for lab in p3.labels}
    assert is_edge_preserving(p3, p3, identity) is None
    swap = {"0": "1", "1": "0", "2": "2"}
    assert is_edge_preserving(p3, p3, swap) is not None
    with pytest.raises(BadParamError):
        is_edge_preserving(p3, p3, {"0": "0", "1": "0", "2": "2"})
