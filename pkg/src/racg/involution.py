"""Involution graphs: exact for Coxeter groups, inferred or enumerated otherwise."""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Protocol

from . import budget
from .abelian import abelianize, to_bits
from .errors import GraphError, PresentationError, ResourceLimit
from .graph import Graph, all_clique_masks
from .words import RacgContext, as_word, inverse

PROVENANCES = ("exact", "hypothetical", "user-supplied")


class GroupEvaluator(Protocol):
    """Word problem interface shared by Coxeter contexts and semidirect products.

    Generators are involutions, so inverses of words are reversals.
    """

    generators: tuple[str, ...]

    def evaluate(self, word): ...
    def identity(self): ...
    def multiply(self, x, y): ...
    def equal(self, u, v) -> bool: ...
    def is_involution(self, word) -> bool: ...
    def commutes(self, u, v) -> bool: ...
    def presentation(self): ...


def word_names(words: Sequence[Sequence[str]]) -> list[str]:
    """Vertex names for label words: letters run together, spaced if that is ambiguous."""
    joined = ["".join(w) for w in words]
    if len(set(joined)) == len(joined):
        return joined
    return [" ".join(w) for w in words]


@dataclass
class InvolutionGraph:
    graph: Graph
    labels: dict[str, tuple[str, ...]]
    ab_vectors: dict[str, tuple[int, ...]]
    provenance: str = "exact"
    assumptions: list[str] = field(default_factory=list)
    loops: list[str] = field(default_factory=list)
    # other known words in each class, tried when the labels are not a full system
    alternatives: dict[str, list[tuple[str, ...]]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise GraphError(f"unknown provenance {self.provenance!r}")
        for v in self.graph.vertices:
            if v not in self.labels:
                raise GraphError(f"vertex {v!r} has no label")
        if self.ab_vectors:
            seen: dict[tuple, str] = {}
            for v in self.graph.vertices:
                if v not in self.ab_vectors:
                    raise GraphError(f"vertex {v!r} has no ab_vector")
                vec = tuple(self.ab_vectors[v])
                if vec in seen:
                    raise GraphError(f"classes {seen[vec]!r} and {v!r} share an ab_vector")
                seen[vec] = v

    def to_dict(self) -> dict:
        out = self.graph.to_dict()
        out["labels"] = {v: " ".join(self.labels[v]) for v in self.graph.vertices}
        out["ab_vectors"] = {v: list(self.ab_vectors[v]) for v in self.graph.vertices if v in self.ab_vectors}
        out["provenance"] = self.provenance
        if self.assumptions:
            out["assumptions"] = list(self.assumptions)
        if self.loops:
            out["loops"] = list(self.loops)
        return out

    @classmethod
    def from_dict(cls, d: Mapping) -> "InvolutionGraph":
        g = Graph.from_dict(d)
        raw = d.get("labels") or {v: v for v in g.vertices}
        labels = {v: as_word(w) for v, w in raw.items()}
        vecs = {v: tuple(int(x) for x in vec) for v, vec in (d.get("ab_vectors") or {}).items()}
        return cls(
            g,
            labels,
            vecs,
            d.get("provenance", "user-supplied"),
            list(d.get("assumptions", [])),
            list(d.get("loops", [])),
        )


def involution_graph_racg(ctx: RacgContext | Graph) -> InvolutionGraph:
    """The involution graph of a Coxeter group, which is exactly its clique graph."""
    if isinstance(ctx, Graph):
        ctx = RacgContext(ctx)
    g = ctx.graph
    masks = all_clique_masks(g)
    words = [g.sorted_names(m) for m in masks]
    names = word_names(words)
    edges = []
    for i in range(len(masks)):
        budget.check()
        for j in range(i + 1, len(masks)):
            if g.is_clique_mask(masks[i] | masks[j]):
                edges.append((names[i], names[j]))
    n = len(g)
    vecs = {name: tuple(m >> t & 1 for t in range(n)) for name, m in zip(names, masks)}
    return InvolutionGraph(Graph(names, edges), dict(zip(names, words)), vecs, "exact")


def hypothetical_edges(classes) -> set[frozenset[str]]:
    """Edges forced by the abelianization: ``{x, y}`` whenever another class sits at x+y.

    ``classes`` is a mapping or a sequence of ``(name, vector)`` pairs.
    """
    items = list(classes.items()) if isinstance(classes, Mapping) else list(classes)
    by_bits: dict[int, str] = {}
    names, bits = [], []
    for name, vec in items:
        b = to_bits(vec)
        if b in by_bits:
            raise GraphError(f"classes {by_bits[b]!r} and {name!r} share an ab_vector")
        by_bits[b] = name
        names.append(name)
        bits.append(b)
    edges = set()
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            z = by_bits.get(bits[i] ^ bits[j])
            if z is not None and z != names[i] and z != names[j]:
                edges.add(frozenset((names[i], names[j])))
    return edges


def hypothetical_graph(classes, labels: Mapping[str, Sequence[str]] | None = None) -> InvolutionGraph:
    items = list(classes.items()) if isinstance(classes, Mapping) else list(classes)
    names = [n for n, _ in items]
    g = Graph(names, [tuple(e) for e in hypothetical_edges(items)])
    lab = {n: as_word(labels[n]) if labels else as_word(n) for n in names}
    return InvolutionGraph(g, lab, {n: tuple(v) for n, v in items}, "hypothetical")


def validate_full_system(ig: InvolutionGraph, ev: GroupEvaluator) -> tuple[bool, list[dict]]:
    """Check labels are involutions and every edge has commuting labels."""
    failures = []
    for v in ig.graph.vertices:
        budget.check()
        if not ev.is_involution(ig.labels[v]):
            failures.append({"kind": "not-involution", "vertex": v, "label": " ".join(ig.labels[v])})
    for u, v in ig.graph.edge_list():
        budget.check()
        if not ev.commutes(ig.labels[u], ig.labels[v]):
            failures.append({
                "kind": "edge-not-commuting",
                "edge": [u, v],
                "labels": [" ".join(ig.labels[u]), " ".join(ig.labels[v])],
            })
    return not failures, failures


def search_full_system(ig: InvolutionGraph, ev: GroupEvaluator, max_nodes: int = 100_000) -> dict[str, tuple[str, ...]] | None:
    """Pick one word per class from ``ig.alternatives`` so that every edge commutes.

    Backtracking, most constrained class first.  Returns new labels or None.
    """
    g = ig.graph
    options = {}
    for v in g.vertices:
        opts = [tuple(ig.labels[v])] + [tuple(w) for w in ig.alternatives.get(v, []) if tuple(w) != tuple(ig.labels[v])]
        options[v] = [w for w in opts if ev.is_involution(w)]
        if not options[v]:
            return None
    order = sorted(g.vertices, key=lambda v: (-g.degree(v), len(options[v]), v))
    cache: dict = {}

    def ok(u, wu, v, wv):
        key = (wu, wv) if (u, wu) < (v, wv) else (wv, wu)
        if key not in cache:
            cache[key] = ev.commutes(wu, wv)
        return cache[key]

    pick: dict[str, tuple[str, ...]] = {}
    nodes = 0

    def go(i):
        nonlocal nodes
        if i == len(order):
            return True
        nodes += 1
        if nodes > max_nodes:
            raise ResourceLimit(f"full-system search exceeded {max_nodes} nodes")
        budget.check()
        v = order[i]
        for w in options[v]:
            if all(ok(v, w, u, pick[u]) for u in g.link(v) if u in pick):
                pick[v] = w
                if go(i + 1):
                    return True
                del pick[v]
        return False

    return dict(pick) if go(0) else None


# -- bounded enumeration ------------------------------------------------------


@dataclass
class InvolutionEnumeration:
    radius: int
    classes: list[tuple[tuple[str, ...], tuple[int, ...]]]
    members: list[list[tuple[str, ...]]]
    assumptions: list[str]
    loops: list[tuple[str, ...]]

    def __iter__(self):
        return iter(self.classes)

    def __len__(self):
        return len(self.classes)

    def involution_graph(self) -> InvolutionGraph:
        words = [w for w, _ in self.classes]
        names = word_names(words)
        items = [(n, vec) for n, (_, vec) in zip(names, self.classes)]
        ig = hypothetical_graph(items, dict(zip(names, words)))
        ig.assumptions = [f"class list from bounded enumeration at radius {self.radius}; completeness not guaranteed"]
        ig.assumptions += self.assumptions
        ig.loops = [names[words.index(w)] for w in self.loops]
        ig.alternatives = {n: list(m) for n, m in zip(names, self.members)}
        return ig


def _gf2_images(ev: GroupEvaluator):
    model = abelianize(ev.presentation())
    if not model.is_elementary_2:
        raise PresentationError(f"abelianization is {model.describe()}, not elementary abelian of exponent 2")
    return model


def bounded_involution_enumeration(ev: GroupEvaluator, radius: int = 4, max_elements: int = 200_000) -> InvolutionEnumeration:
    """List involution classes among elements of word length at most ``radius``.

    Two involutions share a class when a chain of single-letter
    conjugations links them inside the ball, or when their abelian images
    agree and a conjugator of length at most ``radius`` is found.  Classes
    with equal images but no conjugator found are merged anyway and the
    merge is recorded as an assumption.
    """
    if radius < 1:
        raise ValueError("radius must be at least 1")
    model = _gf2_images(ev)
    gens = list(ev.generators)
    gen_el = [ev.evaluate((s,)) for s in gens]
    ident = ev.identity()
    word_of = {ident: ()}
    layer = [ident]
    order = [ident]
    for _ in range(radius):
        nxt = []
        for e in layer:
            for s, ge in zip(gens, gen_el):
                f = ev.multiply(e, ge)
                if f not in word_of:
                    word_of[f] = word_of[e] + (s,)
                    nxt.append(f)
                    order.append(f)
                    if len(order) > max_elements:
                        raise ResourceLimit(f"ball of radius {radius} exceeds {max_elements} elements")
        layer = nxt
    invs = [e for e in order if e != ident and ev.multiply(e, e) == ident]
    inv_set = set(invs)

    parent = {e: e for e in invs}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            # keep the shortlex-earlier representative as root
            if (len(word_of[rb]), word_of[rb]) < (len(word_of[ra]), word_of[ra]):
                ra, rb = rb, ra
            parent[rb] = ra

    for e in invs:
        budget.check()
        for ge in gen_el:
            f = ev.multiply(ev.multiply(ge, e), ge)
            if f in inv_set:
                union(e, f)

    def vec(e):
        return model.ab_image(word_of[e])

    roots = sorted({find(e) for e in invs}, key=lambda r: (len(word_of[r]), word_of[r]))
    by_vec: dict[tuple, list] = {}
    for r in roots:
        by_vec.setdefault(vec(r), []).append(r)
    assumptions = []
    pending = []
    for v, rs in by_vec.items():
        lead = rs[0]
        for other in rs[1:]:
            budget.check()
            lw = word_of[lead]
            if any(ev.evaluate(word_of[g] + lw + inverse(word_of[g])) == other for g in order):
                union(lead, other)
            else:
                pending.append((lead, other))
    confirmed = {e: find(e) for e in invs}
    for lead, other in pending:
        union(lead, other)
        assumptions.append(
            f"merged {' '.join(word_of[other])} into {' '.join(word_of[lead])} by equal abelian image; "
            f"no conjugator of length <= {radius} found"
        )
    classes, members, loops = [], [], []
    groups: dict = {}
    for e in invs:
        groups.setdefault(find(e), []).append(e)
    for r in sorted(groups, key=lambda r: (len(word_of[r]), word_of[r])):
        w = word_of[r]
        classes.append((w, vec(r)))
        members.append(sorted((word_of[e] for e in groups[r]), key=lambda x: (len(x), x)))
        # a loop: the representative commutes with a distinct, confirmed conjugate
        for e in groups[r]:
            budget.check()
            if e != r and confirmed[e] == confirmed[r] and ev.multiply(r, e) == ev.multiply(e, r):
                loops.append(w)
                break
    return InvolutionEnumeration(radius, classes, members, assumptions, loops)


def involution_graph_from_json(text: str) -> InvolutionGraph:
    try:
        return InvolutionGraph.from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise GraphError(f"invalid JSON: {exc}") from None
