"""Recognition of right-angled Coxeter groups.

The pipeline: abelianization gate, involution graph, loop check, the three
clique-graph conditions, full-system check, collapsing with independent
choices, and finally a candidate isomorphism checked in both directions.
"""

from __future__ import annotations

import itertools
import json
import random
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

from . import budget
from .abelian import AbelianModel, Presentation, abelianize, extend_gf2_basis, gf2_rank, gf2_solve
from .cliques import ConditionReport, check_conditions, collapse_with
from .errors import (
    CollapseError,
    ConditionFailure,
    GraphError,
    HypothesisViolation,
    InsufficientRank,
    PresentationError,
    RacgError,
    ResourceLimit,
)
from .extensions import (
    PCFamily,
    SemidirectEvaluator,
    extension_defining_graph,
    hypothesis_violation,
)
from .graph import Graph, all_clique_masks, induced_subgraph
from .involution import (
    InvolutionGraph,
    bounded_involution_enumeration,
    involution_graph_racg,
    search_full_system,
    validate_full_system,
    word_names,
)
from .verify import verify_certificate
from .words import RacgContext, as_word

DEFAULT_RETRIES = 8
DEFAULT_RADIUS = 4
DEFAULT_WORD_CAP = 64


# -- inputs -------------------------------------------------------------------


@dataclass
class RecognitionInput:
    kind: str  # "racg" | "extension" | "involution-graph"
    graph: Graph | None = None
    family: PCFamily | None = None
    involution_graph: InvolutionGraph | None = None
    evaluator_desc: dict | None = None  # group description for the independent verifier

    def evaluator(self):
        if self.kind == "racg":
            return RacgContext(self.graph)
        if self.kind == "extension":
            return SemidirectEvaluator(self.family)
        if self.evaluator_desc is None:
            return None
        return _evaluator_from_desc(self.evaluator_desc)


def _evaluator_from_desc(desc: Mapping):
    if desc.get("pcs"):
        return SemidirectEvaluator(PCFamily.from_dict(desc))
    return RacgContext(Graph.from_dict(desc["graph"]))


def _group_desc(evaluator) -> dict:
    if isinstance(evaluator, SemidirectEvaluator):
        return evaluator.family.to_dict()
    return {"graph": evaluator.graph.to_dict(), "pcs": []}


def parse_input(data: Mapping) -> RecognitionInput:
    """Tell the three input kinds apart by their keys."""
    if not isinstance(data, Mapping):
        raise GraphError("input must be a JSON object")
    if "pcs" in data:
        fam = PCFamily.from_dict(data)
        return RecognitionInput("extension", graph=fam.graph, family=fam)
    if "provenance" in data or "labels" in data:
        ig = InvolutionGraph.from_dict(data)
        desc = data.get("evaluator")
        if desc is not None:
            if not isinstance(desc, Mapping) or "graph" not in desc:
                raise GraphError("'evaluator' needs a 'graph' (and optional 'pcs')")
            desc = {"graph": desc["graph"], "pcs": list(desc.get("pcs", []))}
            _evaluator_from_desc(desc)  # validate early
        return RecognitionInput("involution-graph", involution_graph=ig, evaluator_desc=desc)
    g = Graph.from_dict(data)
    return RecognitionInput("racg", graph=g)


def load_input(text: str) -> RecognitionInput:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"invalid JSON: {exc}") from None
    return parse_input(data)


# -- verdicts -----------------------------------------------------------------


@dataclass
class Verdict:
    outcome: bool | None  # None means Unknown
    step: str
    certificate: dict = field(default_factory=dict)
    assumptions: list[str] = field(default_factory=list)
    conditional: bool = False

    @property
    def outcome_name(self) -> str:
        return {True: "True", False: "False", None: "Unknown"}[self.outcome]

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome_name,
            "step": self.step,
            "conditional": self.conditional,
            "assumptions": list(self.assumptions),
            "certificate": self.certificate,
        }

    def summary(self) -> str:
        lines = [f"outcome: {self.outcome_name} (decided at step: {self.step})"]
        if self.conditional:
            lines.append("conditional on the assumptions below")
        for a in self.assumptions:
            lines.append(f"  assumption: {a}")
        c = self.certificate
        if self.outcome is True:
            pg = c["presentation_graph"]
            lines.append(f"presentation graph: {len(pg['vertices'])} vertices, {len(pg['edges'])} edges")
            for b in pg["vertices"]:
                lines.append(f"  {b} -> {c['forward'][b]}")
            lines.append("backward map:")
            for s, w in c["backward"].items():
                lines.append(f"  {s} -> {w}")
        elif c.get("note"):
            lines.append(c["note"])
        if self.outcome is False and "conditions" in c:
            lines.append(ConditionReport.from_dict(c["conditions"]).summary())
        return "\n".join(lines)


# -- gate ---------------------------------------------------------------------


def gate(p: Presentation) -> tuple[bool, AbelianModel]:
    """Pass iff the abelianization is elementary abelian of exponent 2."""
    m = abelianize(p)
    return m.is_elementary_2, m


# -- exact involution graphs of theorem-eligible extensions ---------------------


def _free_reduce(word: Sequence[str]) -> tuple[str, ...]:
    out: list[str] = []
    for s in word:
        if out and out[-1] == s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def extension_involution_graph(fam: PCFamily, model: AbelianModel) -> InvolutionGraph:
    """Clique graph of the extension's defining graph, labelled by words in the extension."""
    ext = extension_defining_graph(fam)
    lam = ext.graph
    masks = all_clique_masks(lam)
    words = []
    for m in masks:
        w: list[str] = []
        for v in lam.sorted_names(m):
            w += ext.labels[v]
        words.append(_free_reduce(w))
    names = word_names(words)
    edges = [
        (names[i], names[j])
        for i in range(len(masks))
        for j in range(i + 1, len(masks))
        if lam.is_clique_mask(masks[i] | masks[j])
    ]
    vecs = {n: model.ab_image(w) for n, w in zip(names, words)}
    return InvolutionGraph(Graph(names, edges), dict(zip(names, words)), vecs, "exact")


# -- algebraic collapse ---------------------------------------------------------


def _label_key(ig: InvolutionGraph):
    return lambda v: (len(ig.labels[v]), v)


def algebraic_collapse(
    ig: InvolutionGraph,
    rng: random.Random | None = None,
    report: ConditionReport | None = None,
    order: str = "canonical",
) -> tuple[Graph, list[str]]:
    """Collapse, choosing class members whose abelian images stay independent.

    Members are tried shortest label first (``order="canonical"``), in a
    shuffled order when ``rng`` is given, or in a caller-fixed order via
    ``order="given"`` (members as listed, for testing bad choices).
    """
    key = _label_key(ig)

    def choose(members, need, chosen):
        if order == "given":
            cand = list(members)
        else:
            cand = sorted(members, key=key)
            if rng is not None:
                rng.shuffle(cand)
        picked = _extend(ig, sorted(chosen), cand, need)
        return [cand[i] for i in picked]

    chosen, _ = collapse_with(ig.graph, choose, report)
    return induced_subgraph(ig.graph, chosen), chosen


def _extend(ig, chosen, cand, need):
    return extend_gf2_basis([ig.ab_vectors[v] for v in chosen], [ig.ab_vectors[v] for v in cand], need)


# -- candidate map --------------------------------------------------------------


class MapFailure(RacgError):
    def __init__(self, message: str, detail: dict | None = None):
        self.detail = detail or {}
        super().__init__(message)


@dataclass
class CandidateIsomorphism:
    graph: Graph  # on fresh generators b1..bn
    forward: dict[str, tuple[str, ...]]  # b -> word in G
    backward: dict[str, tuple[str, ...]]  # G generator -> word in b's
    chosen: dict[str, str]  # b -> involution-graph vertex

    def certificate(self, group_desc: dict) -> dict:
        return {
            "group": group_desc,
            "presentation_graph": self.graph.to_dict(),
            "forward": {b: " ".join(w) for b, w in self.forward.items()},
            "backward": {s: " ".join(w) for s, w in self.backward.items()},
            "chosen_vertices": dict(self.chosen),
        }


def _fresh_names(n: int, avoid) -> list[str]:
    stem = "b"
    while any(f"{stem}{i}" in avoid for i in range(1, n + 1)):
        stem += "b"
    return [f"{stem}{i}" for i in range(1, n + 1)]


def _relator_letters(r) -> list[str]:
    return [g for g, _ in r]


def candidate_map(
    collapsed: Graph,
    ig: InvolutionGraph,
    ev,
    presentation: Presentation,
    model: AbelianModel,
    word_cap: int = DEFAULT_WORD_CAP,
) -> CandidateIsomorphism:
    """Build the map to ``G`` and its inverse, checking relators and composites."""
    chosen = list(collapsed.vertices)
    bs = _fresh_names(len(chosen), set(presentation.generators))
    rename = dict(zip(chosen, bs))
    graph = Graph(bs, [(rename[u], rename[v]) for u, v in collapsed.edge_list()])
    forward = {b: tuple(ig.labels[v]) for b, v in zip(bs, chosen)}
    ctx = RacgContext(graph)

    def capped(w, what):
        if len(w) > word_cap:
            raise ResourceLimit(f"{what} has length {len(w)} > cap {word_cap}")
        return w

    def phi(word) -> tuple[str, ...]:
        out: list[str] = []
        for b in word:
            out += forward[b]
        return tuple(out)

    # generators of W go to involutions, edges to commuting pairs
    for b in bs:
        w = capped(phi((b, b)), f"square of {b}")
        if not ev.is_identity(w):
            raise MapFailure(f"forward map breaks relator {b} {b}", {"map": "forward", "relator": [b, b]})
    for u, v in graph.edge_list():
        w = capped(phi((u, v, u, v)), f"commutator of {u},{v}")
        if not ev.is_identity(w):
            raise MapFailure(f"forward map breaks relator [{u},{v}]", {"map": "forward", "relator": [u, v, u, v]})

    vecs = [ig.ab_vectors[v] for v in chosen]
    backward = {}
    for s in presentation.generators:
        budget.check()
        target = model.ab_image((s,))
        combo = gf2_solve(vecs, target)
        if combo is None:
            raise MapFailure(f"{s} is not in the span of the chosen labels", {"map": "backward", "generator": s})
        word = _express(ev, s, [bs[i] for i in combo], bs, phi, word_cap)
        if word is None:
            raise MapFailure(f"no short word in the new generators maps to {s}", {"map": "backward", "generator": s})
        backward[s] = word

    for r in presentation.relators:
        budget.check()
        w = []
        for g in _relator_letters(r):
            w += backward[g]
        if ctx.normal_form(w):
            raise MapFailure(
                "backward map breaks relator " + " ".join(g for g in _relator_letters(r)),
                {"map": "backward", "relator": _relator_letters(r)},
            )
    for b in bs:
        w = []
        for g in forward[b]:
            w += backward[g]
        if ctx.normal_form(w) != (b,):
            raise MapFailure(f"backward(forward({b})) is not {b}", {"map": "composite", "generator": b})
    for s in presentation.generators:
        if not ev.equal(phi(backward[s]), (s,)):
            raise MapFailure(f"forward(backward({s})) is not {s}", {"map": "composite", "generator": s})
    return CandidateIsomorphism(graph, forward, backward, dict(zip(bs, chosen)))


def _express(ev, s, support, bs, phi, cap, max_perms: int = 720):
    for perm in itertools.islice(itertools.permutations(support), max_perms):
        if len(phi(perm)) <= cap and ev.equal(phi(perm), (s,)):
            return tuple(perm)
    # fall back to conjugates of a product by a single new generator
    for u in bs:
        for perm in itertools.islice(itertools.permutations(support), max_perms):
            w = (u,) + perm + (u,)
            if len(phi(w)) <= cap and ev.equal(phi(w), (s,)):
                return w
    return None


# -- the pipeline ---------------------------------------------------------------


def recognize(
    inp: RecognitionInput,
    radius: int = DEFAULT_RADIUS,
    retries: int = DEFAULT_RETRIES,
    seed: int = 0,
    word_cap: int = DEFAULT_WORD_CAP,
    enumerate_classes: bool = False,
    verify: bool = True,
) -> Verdict:
    """Decide whether the input group has a right-angled Coxeter presentation.

    ``enumerate_classes`` forces the bounded class search even for
    extension families that satisfy the pairwise-commuting hypotheses.
    """
    try:
        return _recognize(inp, radius, retries, seed, word_cap, enumerate_classes, verify)
    except ResourceLimit as exc:
        return Verdict(None, "resource-limit", {"note": str(exc)}, conditional=True)


def _recognize(inp, radius, retries, seed, word_cap, enumerate_classes, verify) -> Verdict:
    assumptions: list[str] = []
    ev = inp.evaluator()
    presentation = ev.presentation() if ev is not None else None
    model = None
    if presentation is not None:
        ok, model = gate(presentation)
        if not ok:
            return Verdict(
                False,
                "gate",
                {"note": f"abelianization is {model.describe()}", "factor_orders": list(model.factor_orders)},
            )

    # involution graph
    if inp.kind == "racg":
        ig = involution_graph_racg(RacgContext(inp.graph))
    elif inp.kind == "extension":
        bad = hypothesis_violation(inp.family)
        if bad is None and not enumerate_classes:
            ig = extension_involution_graph(inp.family, model)
        else:
            if bad is not None:
                assumptions.append(f"extension theorem does not apply: {bad}")
            ig = bounded_involution_enumeration(ev, radius).involution_graph()
    else:
        ig = inp.involution_graph
        if ev is not None and not ig.ab_vectors:
            vecs = {v: model.ab_image(ig.labels[v]) for v in ig.graph.vertices}
            ig = InvolutionGraph(ig.graph, ig.labels, vecs, ig.provenance, ig.assumptions, ig.loops)
        if ig.provenance == "user-supplied":
            assumptions.append("the involution graph is asserted by the input, not computed")
    assumptions += ig.assumptions
    heuristic = ig.provenance != "exact"
    ig_info = {"provenance": ig.provenance, "vertices": len(ig.graph), "edges": len(ig.graph.edges)}
    if ig.alternatives:
        ig_info["enumeration_radius"] = radius

    if ig.loops:
        return Verdict(False, "loops", {"involution_graph": ig_info, "loops": list(ig.loops)}, assumptions, heuristic)

    report = check_conditions(ig.graph)
    if not report.ok:
        return Verdict(
            False,
            "conditions",
            {"involution_graph": ig_info, "conditions": report.to_dict()},
            assumptions,
            heuristic,
        )

    if ev is None:
        assumptions.append("no evaluator supplied, so no candidate map can be checked")
        return Verdict(None, "full-system", {"note": "clique graph, but no group evaluator", "involution_graph": ig_info}, assumptions, True)

    ok, failures = validate_full_system(ig, ev)
    if not ok and ig.alternatives:
        found = search_full_system(ig, ev)
        if found is not None:
            ig = InvolutionGraph(ig.graph, found, ig.ab_vectors, ig.provenance, ig.assumptions, ig.loops)
            assumptions.append("labels replaced by a full system found among enumerated class members")
            ok, failures = validate_full_system(ig, ev)
    if not ok:
        return Verdict(
            None,
            "full-system",
            {"note": "the labels are not a full system of representatives", "failures": failures},
            assumptions,
            True,
        )

    if not ig.ab_vectors:
        return Verdict(None, "collapse", {"note": "no abelian images available"}, assumptions, True)
    ambient = model.rank if model is not None else len(next(iter(ig.ab_vectors.values())))
    attempts = []
    for attempt in range(retries + 1):
        rng = None if attempt == 0 else random.Random(seed * 1000 + attempt)
        try:
            collapsed, chosen = algebraic_collapse(ig, rng, report)
        except (InsufficientRank, CollapseError) as exc:
            attempts.append({"attempt": attempt, "step": "collapse", "note": str(exc)})
            continue
        rank = gf2_rank(ig.ab_vectors[v] for v in chosen)
        if rank != ambient or len(chosen) != ambient:
            attempts.append({"attempt": attempt, "step": "collapse", "note": f"chosen labels span rank {rank} of {ambient}"})
            continue
        try:
            iso = candidate_map(collapsed, ig, ev, presentation, model, word_cap)
        except MapFailure as exc:
            attempts.append({"attempt": attempt, "step": "candidate-map", "note": str(exc), **exc.detail})
            continue
        cert = iso.certificate(_group_desc(ev))
        if verify:
            vok, problems = verify_certificate(cert)
            if not vok:
                attempts.append({"attempt": attempt, "step": "verify", "note": "; ".join(problems)})
                continue
            cert["independently_verified"] = True
        cert["involution_graph"] = ig_info
        cert["labels"] = {b: "".join(w) for b, w in iso.forward.items()}
        if heuristic:
            assumptions.append("the isomorphism certificate does not depend on completeness of the class list")
        return Verdict(True, "candidate-map", cert, assumptions, False)
    if retries:
        assumptions.append(f"tried {len(attempts)} collapse choices (canonical plus seeded shuffles, seed {seed})")
    last = attempts[-1]["step"] if attempts else "collapse"
    return Verdict(None, last, {"note": "no tried full system gave an isomorphism", "attempts": attempts}, assumptions, True)
