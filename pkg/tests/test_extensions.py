import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import nx_isomorphic
from racg.abelian import abelianize, relation_matrix
from racg.errors import GraphError, HypothesisViolation
from racg.extensions import (
    PartialConjugation,
    PCFamily,
    all_sils,
    apply_auto,
    compose_auto,
    decompose,
    extension_defining_graph,
    extension_presentation,
    has_sil,
    hypothesis_violation,
    pc_auto,
    pcs_commute,
    semidirect_evaluator,
    validate_pc,
)
from racg.graph import Graph
from racg.verify import _Extension
from test_acceptance import random_family


def _fam(fixtures, name):
    return PCFamily.loads((fixtures / f"{name}.json").read_text())


STAR = Graph(["a1", "a2", "a3", "a4"], [("a1", "a4"), ("a2", "a4"), ("a3", "a4")])


def test_validate_pc():
    assert validate_pc(STAR, PartialConjugation("x", "a1", ["a2"])) == (True, [])
    ok, notes = validate_pc(STAR, PartialConjugation("x", "a1", ["a4"]))
    assert not ok and "meets St(a1)" in notes[0]
    ok, notes = validate_pc(STAR, PartialConjugation("x", "a1", []))
    assert not ok
    path = Graph(["a", "b", "c", "d"], [("b", "c"), ("c", "d")])
    ok, notes = validate_pc(path, PartialConjugation("x", "a", ["b"]))
    assert not ok and "splits" in notes[0]
    with pytest.raises(GraphError):
        validate_pc(STAR, PartialConjugation("x", "q", ["a2"]))


def test_family_validation():
    with pytest.raises(GraphError):
        PCFamily(STAR, [PartialConjugation("a1", "a1", ["a2"])])
    with pytest.raises(GraphError):
        PCFamily(STAR, [PartialConjugation("x", "a1", ["a2"]), PartialConjugation("x", "a1", ["a3"])])
    with pytest.raises(GraphError):
        PCFamily.loads('{"graph": {"vertices": ["a"]}, "pcs": [{"name": "x"}]}')
    with pytest.raises(GraphError):
        PCFamily.loads("[")


def test_star_extension_presentation(fixtures):
    fam = _fam(fixtures, "ex31")
    p = extension_presentation(fam)
    assert p.generators == ("a1", "a2", "a3", "a4", "x")
    m = relation_matrix(p, drop_zero=True)
    assert m == [[2 if i == j else 0 for j in range(5)] for i in range(5)]
    assert abelianize(p).describe() == "Z/2 x Z/2 x Z/2 x Z/2 x Z/2"
    assert PCFamily.from_dict(json.loads(json.dumps(fam.to_dict()))).to_dict() == fam.to_dict()


def test_star_extension_defining_graph(fixtures):
    eg = extension_defining_graph(_fam(fixtures, "ex31"))
    assert (len(eg.graph), len(eg.graph.edges)) == (5, 7)
    assert eg.display_names() == {"a1": "xa1", "a2": "a2", "a3": "a3", "a4": "a4", "x": "x"}
    fig8 = Graph.from_dict(json.loads((fixtures / "fig8.json").read_text()))
    assert nx_isomorphic(eg.graph, fig8)


def test_noncommuting_extension_hypothesis_fails(fixtures):
    fam = _fam(fixtures, "ex35")
    x, y = fam.pcs
    assert not pcs_commute(fam.ctx, x, y)
    bad = hypothesis_violation(fam)
    assert isinstance(bad, HypothesisViolation) and bad.pair == ("x", "y")
    with pytest.raises(HypothesisViolation):
        extension_defining_graph(fam)
    ev = semidirect_evaluator(fam)
    assert not ev.is_involution("c x")
    assert ev.is_involution("a c x") and ev.is_involution("b c y")
    assert not ev.commutes("x", "y")


def test_overlapping_domains_violate():
    g = Graph(["a", "b", "c", "d"], [])
    fam = PCFamily(g, [PartialConjugation("x", "a", ["b", "c"]), PartialConjugation("y", "a", ["c"])])
    assert "overlapping" in str(hypothesis_violation(fam))


def test_automorphism_composition():
    fam = PCFamily(STAR, [PartialConjugation("x", "a1", ["a2"])])
    ctx = fam.ctx
    h = pc_auto(ctx, fam.pcs[0])
    assert apply_auto(ctx, h, ("a2",)) == ("a1", "a2", "a1")
    assert apply_auto(ctx, compose_auto(ctx, h, h), ("a2",)) == ("a2",)


@st.composite
def family_and_word(draw):
    seed = draw(st.integers(0, 10**6))
    fam = random_family(random.Random(seed), max_n=4)
    word = draw(st.lists(st.sampled_from(fam.generators), max_size=12))
    return fam, word


@settings(max_examples=80, deadline=None)
@given(family_and_word())
def test_semidirect_evaluator_matches_matrices(data):
    fam, word = data
    ev = semidirect_evaluator(fam)
    ref = _Extension(fam.graph.vertices, fam.graph.edge_list(), [p.to_dict() for p in fam.pcs])
    assert ev.is_identity(word) == ref.is_identity(word)
    assert ev.is_identity(word + word[::-1])


def test_two_letter_extension(fixtures):
    lam = extension_defining_graph(_fam(fixtures, "ex37"))
    assert (len(lam.graph), len(lam.graph.edges)) == (8, 14)
    assert lam.labels["a1"] == ("x", "a1") and lam.labels["a2"] == ("y", "a2")


def test_sils(fixtures):
    g37 = Graph.from_dict(json.loads((fixtures / "ex37_base.json").read_text()))
    first = has_sil(g37)
    assert (first.v, first.w, first.component) == ("a1", "a3", frozenset({"a4"}))
    triples = {(s.v, s.w, s.component) for s in all_sils(g37)}
    assert ("a3", "a4", frozenset({"a5"})) in triples
    assert has_sil(Graph(["a", "b", "c"], [("a", "b"), ("b", "c")])) is None
    assert first.to_dict() == {"v": "a1", "w": "a3", "component": ["a4"]}


def test_decompose_fig12(fixtures):
    lam = Graph.from_dict(json.loads((fixtures / "fig12.json").read_text()))
    found = {(d.acting, d.alphas, tuple(tuple(sorted(x)) for x in d.domains)) for d in decompose(lam)}
    assert ("b4", ("b5",), (("b1",),)) in found
    assert ("b2", ("b5",), (("b1",),)) in found
    for d in decompose(lam):
        assert extension_defining_graph(d.family).graph == lam
        assert d.to_dict()["acting"] == d.acting


def test_decompose_complete_graph_has_none():
    k3 = Graph(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
    assert decompose(k3) == []
