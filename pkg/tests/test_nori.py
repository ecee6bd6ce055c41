from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from supergeom.acceptance import end_algebra_oracle, random_diagram
from supergeom.errors import MalformedGraph, NotAPoset, ShapeMismatch
from supergeom.nori import (DiagramRep, EmbeddingPoset, FiniteCategory, NoriGraph, category_diagram,
                            check_graph, effective_pairs_diagram, end_algebra, is_closed_under_product)

seeds = st.integers(0, 10**6)


def test_check_graph_examples():
    assert check_graph(NoriGraph()).valid
    G = NoriGraph(vertices=["v"])
    G.add_degenerate("f", "v")
    assert check_graph(G).valid and G.edges()[0].degenerate
    bad = NoriGraph(["a", "b", "c"], ["v"], {"a": "v", "b": "v", "c": "v"}, {"a": "b", "b": "c", "c": "a"})
    verdict = check_graph(bad)
    assert not verdict.valid and verdict.violations


def test_category_one_object():
    G = category_diagram(FiniteCategory.from_json({"objects": ["X"]}))
    edges = G.edges()
    assert G.vertices == ["X"] and len(edges) == 1 and edges[0].degenerate


def test_category_one_arrow():
    C = FiniteCategory.from_json({"objects": ["X", "Y"], "morphisms": [["a", "X", "Y"]]})
    labels = {G_e.id for G_e in category_diagram(C).edges() if not G_e.degenerate}
    assert labels == {"a∘id_X", "id_Y∘a"}


def test_category_chain_has_two_step_factorisation():
    C = FiniteCategory.from_json({
        "objects": ["X", "Z", "Y"],
        "morphisms": [["f", "X", "Z"], ["g", "Z", "Y"], ["h", "X", "Y"]],
        "compose": [["g", "f", "h"]],
    })
    edges = {e.id: e for e in category_diagram(C).edges()}
    assert edges["g∘f"].source == "X" and edges["g∘f"].target == "Y"


def test_effective_pairs_examples():
    two = effective_pairs_diagram(EmbeddingPoset(["a", "b"], [("a", "b")]), 0)
    assert two.vertices == ["(b,a,0)"]
    assert not [e for e in two.edges() if e.id.startswith("d:")]
    three = effective_pairs_diagram(EmbeddingPoset(["a", "b", "c"], [("a", "b"), ("b", "c")]), 1)
    d_edges = [(e.source, e.target) for e in three.edges() if e.id.startswith("d:")]
    assert ("(b,a,0)", "(c,b,1)") in d_edges
    assert effective_pairs_diagram(EmbeddingPoset([], []), 2).vertices == []


def test_poset_cycle_rejected():
    with pytest.raises(NotAPoset):
        EmbeddingPoset(["a", "b"], [("a", "b"), ("b", "a")])


def test_end_algebra_examples():
    G = NoriGraph(vertices=["v"])
    assert end_algebra(G, DiagramRep({"v": (1, 1)}, {})).dimension == (2, 2)
    H = NoriGraph(vertices=["v", "w"])
    H.add_edge("e", "v", "w")
    one = [[Fraction(1)]]
    assert end_algebra(H, DiagramRep({"v": (1, 0), "w": (1, 0)}, {"e": one})).dimension == (1, 0)
    assert end_algebra(H, DiagramRep({"v": (1, 0), "w": (1, 0)}, {"e": [[Fraction(0)]]})).dimension == (2, 0)


def test_rep_shape_checked():
    H = NoriGraph(vertices=["v", "w"])
    H.add_edge("e", "v", "w")
    with pytest.raises(ShapeMismatch):
        end_algebra(H, DiagramRep({"v": (1, 0), "w": (2, 0)}, {"e": [[Fraction(1)]]}))
    broken = NoriGraph(["a"], ["v"], {"a": "v"}, {"a": "b"})
    with pytest.raises(MalformedGraph):
        end_algebra(broken, DiagramRep({"v": (1, 0)}, {}))


def test_graph_json_round_trip():
    G = effective_pairs_diagram(EmbeddingPoset(["a", "b", "c"], [("a", "b"), ("b", "c")]), 1)
    H = NoriGraph.from_json(G.to_json())
    assert H.edges() == G.edges()


@st.composite
def posets(draw):
    n = draw(st.integers(0, 4))
    els = [f"S{i}" for i in range(n)]
    rels = [(els[i], els[j]) for i in range(n) for j in range(i + 1, n) if draw(st.booleans())]
    return EmbeddingPoset(els, rels)


@given(posets(), st.integers(0, 2))
def test_effective_diagrams_are_valid_graphs(P, imax):
    assert check_graph(effective_pairs_diagram(P, imax)).valid


@given(seeds)
def test_end_algebra_matches_oracle_and_is_closed(seed):
    G, T = random_diagram(random.Random(seed))
    E = end_algebra(G, T)
    assert E.dimension == end_algebra_oracle(G, T)
    assert is_closed_under_product(G, T, E)


@given(seeds)
def test_adding_an_edge_never_enlarges_end_algebra(seed):
    rng = random.Random(seed)
    G, T = random_diagram(rng)
    before = end_algebra(G, T).dimension
    v = rng.choice(G.vertices)
    G.add_edge("extra", v, v)
    n, (p, _) = T.size(v), T.dims[v]
    T.matrices["extra"] = [[Fraction(rng.randint(-1, 1)) if (i < p) == (j < p) else Fraction(0)
                            for j in range(n)] for i in range(n)]
    after = end_algebra(G, T).dimension
    assert after[0] <= before[0] and after[1] <= before[1]
