import json

import pytest

from oracles import clique_graph_oracle, nx_isomorphic
from racg.errors import GraphError, PresentationError
from racg.extensions import PCFamily, semidirect_evaluator
from racg.graph import Graph
from racg.involution import (
    InvolutionGraph,
    bounded_involution_enumeration,
    hypothetical_edges,
    hypothetical_graph,
    involution_graph_from_json,
    involution_graph_racg,
    search_full_system,
    validate_full_system,
    word_names,
)
from racg.abelian import Presentation
from racg.words import RacgContext


def _json(fixtures, name):
    return json.loads((fixtures / f"{name}.json").read_text())


def test_word_names():
    assert word_names([("a",), ("a", "b")]) == ["a", "ab"]
    # "ab" + "c" collides with "a" + "bc"
    assert word_names([("ab", "c"), ("a", "bc")]) == ["ab c", "a bc"]


def test_racg_involution_graph_is_the_clique_graph(fixtures):
    g = Graph.from_dict(_json(fixtures, "fig1"))
    ig = involution_graph_racg(g)
    assert ig.provenance == "exact"
    verts, edges = clique_graph_oracle(g)
    assert {frozenset(w) for w in ig.labels.values()} == verts
    assert len(ig.graph.edges) == len(edges)
    assert InvolutionGraph.from_dict(ig.to_dict()).to_dict() == ig.to_dict()


def test_hypothetical_edges_rule():
    # a, b, ab in Z/2 x Z/2: every pair multiplies to the third class
    classes = [("a", (1, 0)), ("b", (0, 1)), ("ab", (1, 1))]
    assert hypothetical_edges(classes) == {frozenset(p) for p in (("a", "b"), ("a", "ab"), ("b", "ab"))}
    # without the product class there is no edge
    assert hypothetical_edges(classes[:2]) == set()
    with pytest.raises(GraphError):
        hypothetical_edges([("a", (1, 0)), ("b", (1, 0))])


def test_distinct_vectors_required():
    g = Graph(["a", "b"], [])
    with pytest.raises(GraphError):
        InvolutionGraph(g, {"a": ("a",), "b": ("b",)}, {"a": (1,), "b": (1,)})
    with pytest.raises(GraphError):
        InvolutionGraph(g, {"a": ("a",)}, {})
    with pytest.raises(GraphError):
        InvolutionGraph(g, {"a": ("a",), "b": ("b",)}, {}, provenance="guess")


def test_enumeration_noncommuting_reproduces_fig6(fixtures):
    fam = PCFamily.from_dict(_json(fixtures, "ex35"))
    enum = bounded_involution_enumeration(semidirect_evaluator(fam), radius=4)
    ig = enum.involution_graph()
    assert len(enum) == 11
    assert sorted(ig.graph.vertices) == sorted(["a", "b", "c", "x", "y", "ax", "ay", "bx", "by", "acx", "bcy"])
    fig6 = Graph.from_dict(_json(fixtures, "fig6"))
    assert ig.graph == fig6
    assert ig.provenance == "hypothetical"
    assert not ig.loops


def test_enumeration_star_extension_reproduces_fig3(fixtures):
    fam = PCFamily.from_dict(_json(fixtures, "ex31"))
    ev = semidirect_evaluator(fam)
    ig = bounded_involution_enumeration(ev, radius=4).involution_graph()
    fig3 = involution_graph_from_json((fixtures / "fig3.json").read_text())
    assert (len(ig.graph), len(ig.graph.edges)) == (15, 57)
    assert nx_isomorphic(ig.graph, fig3.graph)
    # the shortlex representatives are not a full system, but one exists among the members
    ok, failures = validate_full_system(ig, ev)
    assert not ok and failures
    found = search_full_system(ig, ev)
    assert found is not None
    fixed = InvolutionGraph(ig.graph, found, ig.ab_vectors, ig.provenance)
    assert validate_full_system(fixed, ev) == (True, [])


def test_stored_representatives_are_a_full_system(fixtures):
    data = _json(fixtures, "fig3")
    ig = involution_graph_from_json(json.dumps(data))
    ev = semidirect_evaluator(PCFamily.from_dict(data["evaluator"]))
    assert validate_full_system(ig, ev) == (True, [])
    assert all(ev.is_involution(w) for w in ig.labels.values())


def test_infinite_dihedral():
    ctx = RacgContext(Graph(["a", "b"], []))
    enum = bounded_involution_enumeration(ctx, radius=5)
    assert [w for w, _ in enum.classes] == [("a",), ("b",)]
    assert enum.involution_graph().graph.edges == frozenset()


def test_k2():
    ctx = RacgContext(Graph(["a", "b"], [("a", "b")]))
    ig = bounded_involution_enumeration(ctx, radius=3).involution_graph()
    assert sorted(ig.graph.vertices) == ["a", "ab", "b"]
    assert len(ig.graph.edges) == 3


def test_enumeration_needs_elementary_abelianization():
    class Cyclic3:
        generators = ("t",)

        def presentation(self):
            return Presentation(["t"], [["t", "t", "t"]])

    with pytest.raises(PresentationError):
        bounded_involution_enumeration(Cyclic3())


def test_hypothetical_graph_labels():
    ig = hypothetical_graph([("a", (1, 0)), ("b", (0, 1)), ("ab", (1, 1))], {"a": "a", "b": "b", "ab": "a b"})
    assert ig.labels["ab"] == ("a", "b")
    assert ig.provenance == "hypothetical"
