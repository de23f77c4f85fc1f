"""Partial conjugations and split extensions of right-angled Coxeter groups."""

from __future__ import annotations

import itertools
import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from . import budget
from .abelian import Presentation
from .errors import GraphError, HypothesisViolation
from .graph import Graph, connected_components, iter_bits, maximal_clique_masks, popcount
from .words import RacgContext, as_word


@dataclass(frozen=True)
class PartialConjugation:
    name: str
    acting: str
    domain: frozenset[str]

    def __init__(self, name: str, acting: str, domain: Iterable[str]):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "acting", acting)
        object.__setattr__(self, "domain", frozenset(domain))

    def image(self, v: str) -> tuple[str, ...]:
        """Image of generator ``v`` as a word."""
        if v in self.domain:
            return (self.acting, v, self.acting)
        return (v,)

    def to_dict(self) -> dict:
        return {"name": self.name, "acting": self.acting, "domain": sorted(self.domain)}


def validate_pc(ctx: RacgContext | Graph, pc: PartialConjugation) -> tuple[bool, list[str]]:
    """Is the domain a nonempty union of components of the graph minus the acting star?"""
    g = ctx.graph if isinstance(ctx, RacgContext) else ctx
    if pc.acting not in g:
        raise GraphError(f"acting letter {pc.acting!r} is not a vertex")
    for v in pc.domain:
        if v not in g:
            raise GraphError(f"domain vertex {v!r} is not a vertex")
    notes = []
    if not pc.domain:
        notes.append("domain is empty")
    a = g.index(pc.acting)
    outside = g.full_mask & ~g.star_mask(a)
    dom = g.mask(pc.domain)
    if dom & ~outside:
        notes.append(f"domain meets St({pc.acting}): {sorted(g.names(dom & ~outside))}")
    for comp in connected_components(g, outside):
        part = comp & dom
        if part and part != comp:
            notes.append(f"domain splits the component {sorted(g.names(comp))}")
    return not notes, notes


# -- automorphisms as image tables ------------------------------------------

Auto = tuple[tuple[str, ...], ...]  # images of ctx.generators, in order


def identity_auto(ctx: RacgContext) -> Auto:
    return tuple((v,) for v in ctx.generators)


def pc_auto(ctx: RacgContext, pc: PartialConjugation) -> Auto:
    return tuple(ctx.normal_form(pc.image(v)) for v in ctx.generators)


def apply_auto(ctx: RacgContext, h: Auto, w) -> tuple[str, ...]:
    idx = ctx._idx
    out: list[str] = []
    for s in as_word(w):
        out.extend(h[idx[s]])
    return ctx.normal_form(out)


def compose_auto(ctx: RacgContext, h1: Auto, h2: Auto) -> Auto:
    """``h1`` after ``h2``."""
    return tuple(apply_auto(ctx, h1, img) for img in h2)


def pcs_commute(ctx: RacgContext, x: PartialConjugation, y: PartialConjugation) -> bool:
    hx, hy = pc_auto(ctx, x), pc_auto(ctx, y)
    return compose_auto(ctx, hx, hy) == compose_auto(ctx, hy, hx)


# -- families ---------------------------------------------------------------


@dataclass(frozen=True)
class PCFamily:
    graph: Graph
    pcs: tuple[PartialConjugation, ...]
    ctx: RacgContext = field(init=False, repr=False, compare=False)

    def __init__(self, graph: Graph, pcs: Iterable[PartialConjugation] = ()):
        pcs = tuple(pcs)
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "pcs", pcs)
        object.__setattr__(self, "ctx", RacgContext(graph))
        names = [p.name for p in pcs]
        if len(set(names)) != len(names):
            raise GraphError("duplicate partial conjugation names")
        for p in pcs:
            if p.name in graph:
                raise GraphError(f"partial conjugation name {p.name!r} clashes with a vertex")
            ok, notes = validate_pc(self.ctx, p)
            if not ok:
                raise GraphError(f"invalid partial conjugation {p.name}: " + "; ".join(notes))

    @property
    def generators(self) -> tuple[str, ...]:
        return self.graph.vertices + tuple(p.name for p in self.pcs)

    def commuting_pairs(self) -> list[tuple[int, int]]:
        return [
            (i, j)
            for i, j in itertools.combinations(range(len(self.pcs)), 2)
            if pcs_commute(self.ctx, self.pcs[i], self.pcs[j])
        ]

    def to_dict(self) -> dict:
        return {"graph": self.graph.to_dict(), "pcs": [p.to_dict() for p in self.pcs]}

    @classmethod
    def from_dict(cls, d: Mapping) -> "PCFamily":
        if not isinstance(d, Mapping) or "graph" not in d:
            raise GraphError("extension JSON needs 'graph' and 'pcs'")
        g = Graph.from_dict(d["graph"])
        pcs = []
        for e in d.get("pcs", []):
            try:
                pcs.append(PartialConjugation(e["name"], e["acting"], e["domain"]))
            except (KeyError, TypeError):
                raise GraphError(f"malformed partial conjugation {e!r}") from None
        return cls(g, pcs)

    @classmethod
    def loads(cls, text: str) -> "PCFamily":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON: {exc}") from None


def commutator(u: str, v: str) -> list[str]:
    return [u, v, u + "^-1", v + "^-1"]


def extension_presentation(fam: PCFamily) -> Presentation:
    """Presentation of the semidirect product, relators grouped as listed below.

    squares of vertices, edges of the graph, squares of the pcs, commutators
    of commuting pcs, pcs fixing off-domain generators, and the conjugation
    relators on domains.
    """
    g = fam.graph
    rels: list[list[str]] = []
    rels += [[v, v] for v in g.vertices]
    rels += [commutator(u, v) for u, v in g.edge_list()]
    rels += [[p.name, p.name] for p in fam.pcs]
    for i, j in fam.commuting_pairs():
        x, y = fam.pcs[i].name, fam.pcs[j].name
        rels.append(commutator(x, y))
    for p in fam.pcs:
        for v in g.vertices:
            if v not in p.domain:
                rels.append(commutator(p.name, v))
    for p in fam.pcs:
        for v in g.vertices:
            if v in p.domain:
                # x v x^-1 = a v a^-1, written as a relator
                rels.append([p.name, v, p.name + "^-1", p.acting, v + "^-1", p.acting + "^-1"])
    return Presentation(fam.generators, rels)


def hypothesis_violation(fam: PCFamily) -> HypothesisViolation | None:
    for x, y in itertools.combinations(fam.pcs, 2):
        if x.acting == y.acting and x.domain & y.domain:
            return HypothesisViolation(
                f"{x.name} and {y.name} share acting letter {x.acting} and overlapping domains",
                (x.name, y.name),
            )
        if not pcs_commute(fam.ctx, x, y):
            return HypothesisViolation(f"{x.name} and {y.name} do not commute", (x.name, y.name))
    return None


@dataclass(frozen=True)
class ExtensionGraph:
    graph: Graph
    labels: dict[str, tuple[str, ...]]  # vertex -> word in the extension's generators

    def display_names(self) -> dict[str, str]:
        return {v: "".join(w) for v, w in self.labels.items()}


def extension_defining_graph(fam: PCFamily) -> ExtensionGraph:
    """Coxeter defining graph of the extension by pairwise commuting pcs.

    Acting letters are handled in canonical order.  Vertex names are kept:
    an acting letter keeps its name while its label becomes the product of
    its pcs followed by the letter, and each pc becomes a vertex named after
    itself.
    """
    bad = hypothesis_violation(fam)
    if bad is not None:
        raise bad
    verts = set(fam.graph.vertices)
    edges = {frozenset(e) for e in fam.graph.edges}
    labels: dict[str, tuple[str, ...]] = {v: (v,) for v in verts}
    by_letter: dict[str, list[PartialConjugation]] = {}
    for p in fam.pcs:
        by_letter.setdefault(p.acting, []).append(p)
    for a in sorted(by_letter):
        group = by_letter[a]
        cur = Graph(verts, edges)
        for p in group:
            # domains keep their names through earlier steps
            ok, notes = validate_pc(cur, p)
            if not ok:
                raise HypothesisViolation(f"{p.name} is not a partial conjugation after extension: " + "; ".join(notes))
        names = [p.name for p in group]
        for p in group:
            for v in verts:
                if v not in p.domain:
                    edges.add(frozenset((p.name, v)))
        for x, y in itertools.combinations(names, 2):
            edges.add(frozenset((x, y)))
        verts.update(names)
        for p in group:
            labels[p.name] = (p.name,)
            for v in p.domain:
                edges.add(frozenset((a, v)))
        labels[a] = tuple(names) + labels[a]
    g = Graph(verts, [tuple(e) for e in edges])
    return ExtensionGraph(g, labels)


# -- SILs -------------------------------------------------------------------


@dataclass(frozen=True)
class SilWitness:
    v: str
    w: str
    component: frozenset[str]

    def to_dict(self) -> dict:
        return {"v": self.v, "w": self.w, "component": sorted(self.component)}


def _sils(g: Graph):
    n = len(g)
    for i in range(n):
        for j in range(i + 1, n):
            if g.adj_mask(i) >> j & 1:
                continue
            budget.check()
            common = g.adj_mask(i) & g.adj_mask(j)
            for comp in connected_components(g, g.full_mask & ~common):
                if not comp >> i & 1 and not comp >> j & 1:
                    yield SilWitness(g.vertices[i], g.vertices[j], g.names(comp))


def has_sil(g: Graph) -> SilWitness | None:
    """First separating intersection of links, pairs and components in canonical order."""
    return next(_sils(g), None)


def all_sils(g: Graph) -> list[SilWitness]:
    return list(_sils(g))


# -- decompositions ---------------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    base: Graph
    acting: str
    alphas: tuple[str, ...]
    domains: tuple[frozenset[str], ...]

    @property
    def family(self) -> PCFamily:
        pcs = [PartialConjugation(a, self.acting, d) for a, d in zip(self.alphas, self.domains)]
        return PCFamily(self.base, pcs)

    def to_dict(self) -> dict:
        return {
            "acting": self.acting,
            "alphas": list(self.alphas),
            "domains": [sorted(d) for d in self.domains],
            "base": self.base.to_dict(),
        }


def _clique_number(g: Graph) -> int:
    return max(popcount(c) for c in maximal_clique_masks(g))


def decompose(lam: Graph) -> list[Decomposition]:
    """All single-acting-letter splittings of the graph's Coxeter group.

    Candidates come from the star-cover criterion; each one is kept only
    if rebuilding the extension graph gives back ``lam`` exactly.
    """
    out = []
    omega = _clique_number(lam)
    full = lam.full_mask
    for a in range(len(lam)):
        st_a = lam.star_mask(a)
        nbrs = list(iter_bits(lam.adj_mask(a)))
        for k in range(1, omega):
            for alphas in itertools.combinations(nbrs, k):
                budget.check()
                amask = sum(1 << b for b in alphas)
                if not lam.is_clique_mask(amask | 1 << a):
                    continue
                cover = st_a
                for b in alphas:
                    cover |= lam.star_mask(b)
                if cover != full:
                    continue
                doms = []
                for b in alphas:
                    d = st_a & ~lam.star_mask(b)
                    for c in alphas:
                        if c != b:
                            d &= lam.star_mask(c)
                    doms.append(d)
                if not all(doms):
                    continue
                dec = _build(lam, a, alphas, doms)
                if dec is not None:
                    out.append(dec)
    return out


def _build(lam: Graph, a: int, alphas: Sequence[int], doms: Sequence[int]) -> Decomposition | None:
    an = lam.vertices[a]
    alpha_names = tuple(lam.vertices[b] for b in alphas)
    drop = set(alpha_names)
    dom_all = set()
    for d in doms:
        dom_all |= lam.names(d)
    keep = [v for v in lam.vertices if v not in drop]
    edges = [tuple(e) for e in lam.edges if not (e & drop) and not (an in e and e & dom_all)]
    base = Graph(keep, edges)
    domains = tuple(lam.names(d) for d in doms)
    dec = Decomposition(base, an, alpha_names, domains)
    try:
        rebuilt = extension_defining_graph(dec.family)
    except (GraphError, HypothesisViolation):
        return None
    if rebuilt.graph != lam:
        return None
    return dec


# -- semidirect evaluator ---------------------------------------------------


class SemidirectEvaluator:
    """Word problem in the split extension by a pc family (commuting or not).

    Elements are pairs ``(w, h)``: a normal form in the base group and an
    automorphism stored as the images of all base generators.
    """

    def __init__(self, fam: PCFamily):
        self.family = fam
        self.ctx = fam.ctx
        self.generators = fam.generators
        self._id = identity_auto(self.ctx)
        self._gen = {}
        for v in fam.graph.vertices:
            self._gen[v] = ((v,), self._id)
        for p in fam.pcs:
            self._gen[p.name] = ((), pc_auto(self.ctx, p))
        self._compose_cache: dict = {}

    def identity(self):
        return ((), self._id)

    def generator(self, s: str):
        try:
            return self._gen[s]
        except KeyError:
            raise GraphError(f"unknown generator {s!r}") from None

    def multiply(self, x, y):
        budget.check()
        w1, h1 = x
        w2, h2 = y
        w = self.ctx.normal_form(w1 + apply_auto(self.ctx, h1, w2))
        if h2 == self._id:
            h = h1
        elif h1 == self._id:
            h = h2
        else:
            key = (h1, h2)
            h = self._compose_cache.get(key)
            if h is None:
                h = compose_auto(self.ctx, h1, h2)
                self._compose_cache[key] = h
        return (w, h)

    def evaluate(self, word):
        e = self.identity()
        for s in as_word(word):
            e = self.multiply(e, self.generator(s))
        return e

    def is_identity(self, word) -> bool:
        return self.evaluate(word) == self.identity()

    def equal(self, u, v) -> bool:
        return self.evaluate(u) == self.evaluate(v)

    def is_involution(self, word) -> bool:
        e = self.evaluate(word)
        return e != self.identity() and self.multiply(e, e) == self.identity()

    def commutes(self, u, v) -> bool:
        a, b = self.evaluate(u), self.evaluate(v)
        return self.multiply(a, b) == self.multiply(b, a)

    def presentation(self) -> Presentation:
        return extension_presentation(self.family)


def semidirect_evaluator(fam: PCFamily) -> SemidirectEvaluator:
    return SemidirectEvaluator(fam)
