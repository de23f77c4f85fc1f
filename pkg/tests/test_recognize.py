import json
import random

import pytest
from hypothesis import given, settings

from oracles import nx_isomorphic
from racg import budget
from racg.abelian import Presentation
from racg.errors import GraphError
from racg.graph import Graph
from racg.recognize import (
    RecognitionInput,
    Verdict,
    algebraic_collapse,
    gate,
    load_input,
    parse_input,
    recognize,
)
from racg.involution import involution_graph_racg
from racg.verify import verify_certificate
from strategies import graphs


def _inp(fixtures, name):
    return load_input((fixtures / f"{name}.json").read_text())


def test_parse_input_kinds(fixtures):
    assert _inp(fixtures, "fig1").kind == "racg"
    assert _inp(fixtures, "ex31").kind == "extension"
    fig3 = _inp(fixtures, "fig3")
    assert fig3.kind == "involution-graph" and fig3.evaluator_desc is not None
    assert _inp(fixtures, "fig6").evaluator() is None
    with pytest.raises(GraphError):
        parse_input([1, 2])
    with pytest.raises(GraphError):
        load_input("{")
    with pytest.raises(GraphError):
        parse_input({"vertices": ["a"], "labels": {"a": "a"}, "evaluator": {"pcs": []}})


def test_gate():
    ok, model = gate(Presentation(["a", "b"], [["a", "a"], ["b", "b"]]))
    assert ok and model.rank == 2
    ok, model = gate(Presentation(["t"], [["t", "t", "t"]]))
    assert not ok and model.describe() == "Z/3"


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=6))
def test_every_racg_is_recognized(g):
    v = recognize(RecognitionInput("racg", graph=g))
    assert v.outcome is True and not v.conditional
    cert = v.certificate
    assert verify_certificate(cert)[0]
    assert nx_isomorphic(Graph.from_dict(cert["presentation_graph"]), g)


def test_star_extension_verdict(fixtures):
    v = recognize(_inp(fixtures, "ex31"))
    assert v.outcome is True and v.step == "candidate-map"
    d = v.to_dict()
    assert d["outcome"] == "True"
    assert json.loads(json.dumps(d)) == d
    assert "presentation graph: 5 vertices, 7 edges" in v.summary()


def test_star_extension_through_enumeration(fixtures):
    v = recognize(_inp(fixtures, "ex31"), enumerate_classes=True)
    assert v.outcome is True
    assert any("bounded enumeration" in a for a in v.assumptions)


def test_noncommuting_extension_is_conditional_false(fixtures):
    v = recognize(_inp(fixtures, "ex35"))
    assert v.outcome is False and v.conditional and v.step == "conditions"
    assert any("do not commute" in a for a in v.assumptions)


def test_two_letter_extension_true(fixtures):
    v = recognize(_inp(fixtures, "ex37"))
    assert v.outcome is True
    assert nx_isomorphic(
        Graph.from_dict(v.certificate["presentation_graph"]),
        Graph.from_dict(json.loads((fixtures / "fig11_left.json").read_text())),
    )


def test_fig3_with_stored_labels(fixtures):
    v = recognize(_inp(fixtures, "fig3"))
    assert v.outcome is True
    assert v.certificate["independently_verified"]


def test_clique_graph_without_evaluator_is_unknown():
    ig = involution_graph_racg(Graph(["a", "b"], [("a", "b")]))
    data = ig.to_dict()
    data["provenance"] = "user-supplied"
    v = recognize(parse_input(data))
    assert v.outcome is None and v.step == "full-system"


def test_bad_labels_are_not_a_full_system():
    # K2's clique graph, but the label of {a,b} is a non-commuting word
    data = {
        "vertices": ["a", "b", "ab"],
        "edges": [["a", "b"], ["a", "ab"], ["b", "ab"]],
        "labels": {"a": "a", "b": "b", "ab": "b c a c"},
        "provenance": "user-supplied",
        "evaluator": {"graph": {"vertices": ["a", "b", "c"], "edges": [["a", "b"]]}},
    }
    v = recognize(parse_input(data))
    assert v.outcome is None and v.step == "full-system"
    assert v.certificate["failures"]


def test_resource_limit(fixtures):
    with budget.deadline(0):
        v = recognize(_inp(fixtures, "ex35"), radius=6)
    assert v.outcome is None and v.step == "resource-limit"


def test_algebraic_collapse_picks_a_basis(fixtures):
    inp = _inp(fixtures, "fig1")
    ig = involution_graph_racg(inp.graph)
    collapsed, chosen = algebraic_collapse(ig)
    assert len(collapsed) == 4
    shuffled, _ = algebraic_collapse(ig, random.Random(3))
    assert nx_isomorphic(shuffled, collapsed)


def test_verdict_summary_for_false(fixtures):
    v = recognize(_inp(fixtures, "fig9"))
    text = v.summary()
    assert text.startswith("outcome: False")
    assert "Inclusion-Exclusion Condition: FAIL" in text
    assert Verdict(None, "x").outcome_name == "Unknown"
