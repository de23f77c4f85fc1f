"""Clique graphs, the star poset, clique-graph recognition and collapsing."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

from . import budget
from .errors import CollapseError, ConditionFailure, GraphError
from .graph import (
    Graph,
    format_set,
    induced_subgraph,
    intersection_closure,
    iter_bits,
    j_minimal_mask,
    maximal_clique_masks,
    popcount,
    all_clique_masks,
)


@dataclass(frozen=True)
class CliqueGraph:
    graph: Graph
    labels: dict[str, frozenset[str]]
    base: Graph

    def to_dict(self) -> dict:
        out = self.graph.to_dict()
        out["labels"] = {v: sorted(self.labels[v]) for v in self.graph.vertices}
        return out


def clique_name(members: Sequence[str] | frozenset[str]) -> str:
    return format_set(members)


def clique_graph(g: Graph) -> CliqueGraph:
    """One vertex per nonempty clique; adjacent when the union is a clique.

    Vertex names are the cliques written as ``{a,b}``.
    """
    masks = all_clique_masks(g)
    names = [clique_name(g.sorted_names(m)) for m in masks]
    edges = []
    for i in range(len(masks)):
        budget.check()
        mi = masks[i]
        for j in range(i + 1, len(masks)):
            if g.is_clique_mask(mi | masks[j]):
                edges.append((names[i], names[j]))
    labels = {n: g.names(m) for n, m in zip(names, masks)}
    return CliqueGraph(Graph(names, edges), labels, g)


# -- star poset -----------------------------------------------------------


@dataclass(frozen=True)
class StarPoset:
    """Star-equivalence classes with the containment order on stars.

    ``classes[i]`` lists members of class ``i``; ``above[i]`` is the mask of
    class indices ``j`` with ``[i] < [j]`` (strict).
    """

    graph: Graph
    class_masks: tuple[int, ...]
    star_masks: tuple[int, ...]
    above: tuple[int, ...]
    hasse: frozenset[tuple[int, int]]
    class_of: dict[str, int] = field(repr=False)

    @property
    def classes(self) -> list[frozenset[str]]:
        return [self.graph.names(m) for m in self.class_masks]

    def leq(self, i: int, j: int) -> bool:
        return i == j or bool(self.above[i] >> j & 1)

    def maximal(self) -> list[int]:
        return [i for i in range(len(self.class_masks)) if not self.above[i]]

    def minimal(self) -> list[int]:
        return [i for i in range(len(self.class_masks)) if not any(self.above[j] >> i & 1 for j in range(len(self.class_masks)))]

    def clique_above_mask(self, i: int) -> int:
        m = self.class_masks[i]
        for j in iter_bits(self.above[i]):
            m |= self.class_masks[j]
        return m

    def to_dict(self) -> dict:
        return {
            "classes": [sorted(c) for c in self.classes],
            "hasse": [[lo, hi] for lo, hi in sorted(self.hasse)],
        }


def star_poset(g: Graph) -> StarPoset:
    by_star: dict[int, int] = {}
    for i in range(len(g)):
        s = g.star_mask(i)
        by_star[s] = by_star.get(s, 0) | 1 << i
    items = sorted(by_star.items(), key=lambda kv: tuple(iter_bits(kv[1])))
    stars = tuple(s for s, _ in items)
    cmasks = tuple(m for _, m in items)
    n = len(items)
    above = []
    for i in range(n):
        a = 0
        for j in range(n):
            if i != j and stars[i] & ~stars[j] == 0:
                a |= 1 << j
        above.append(a)
    hasse = set()
    for i in range(n):
        for j in iter_bits(above[i]):
            # j covers i when nothing sits strictly between them
            if not any(above[m] >> j & 1 for m in iter_bits(above[i]) if m != j):
                hasse.add((i, j))
    class_of = {v: i for i, m in enumerate(cmasks) for v in g.sorted_names(m)}
    return StarPoset(g, cmasks, stars, tuple(above), frozenset(hasse), class_of)


def clique_above(p: StarPoset, v: str) -> frozenset[str]:
    """Union of all classes at or above the class of ``v``."""
    try:
        i = p.class_of[v]
    except KeyError:
        raise GraphError(f"unknown vertex {v!r}") from None
    return p.graph.names(p.clique_above_mask(i))


# -- the three conditions ---------------------------------------------------


def exponent(size: int) -> int | None:
    """``k`` with ``size == 2**k - 1``, or ``None`` when there is none."""
    s = size + 1
    if s & (s - 1):
        return None
    return s.bit_length() - 1


@dataclass
class ConditionReport:
    maximal_cliques: list[list[str]]
    intersections: list[dict]
    maximal_clique_ok: bool
    maximal_clique_failures: list[dict]
    minimal_vertex_ok: bool
    minimal_vertex_failures: list[dict]
    inclusion_exclusion_ok: bool | None
    inclusion_exclusion_failures: list[dict]

    @property
    def ok(self) -> bool:
        return self.maximal_clique_ok and self.minimal_vertex_ok and self.inclusion_exclusion_ok is True

    def first_failure(self) -> tuple[str, dict] | None:
        if self.maximal_clique_failures:
            return "maximal_clique", self.maximal_clique_failures[0]
        if self.minimal_vertex_failures:
            return "minimal_vertex", self.minimal_vertex_failures[0]
        if self.inclusion_exclusion_failures:
            return "inclusion_exclusion", self.inclusion_exclusion_failures[0]
        return None

    def summary(self) -> str:
        lines = []

        def flag(b):
            return "pass" if b else ("not evaluated" if b is None else "FAIL")

        lines.append(f"Maximal Clique Condition: {flag(self.maximal_clique_ok)}")
        for f in self.maximal_clique_failures:
            lines.append(f"  intersection {format_set(f['vertices'])} has size {f['size']}, not 2^k - 1")
        lines.append(f"Minimal Vertex Condition: {flag(self.minimal_vertex_ok)}")
        for f in self.minimal_vertex_failures:
            lines.append(f"  intersection {format_set(f['vertices'])} has no J-minimal vertex")
        lines.append(f"Inclusion-Exclusion Condition: {flag(self.inclusion_exclusion_ok)}")
        for f in self.inclusion_exclusion_failures:
            lines.append(f"  at {format_set(f['vertices'])}: LHS {f['lhs']} > k_J {f['rhs']}")
        lines.append("clique graph: " + ("yes" if self.ok else "no"))
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "clique_graph": self.ok,
            "maximal_cliques": self.maximal_cliques,
            "intersections": self.intersections,
            "maximal_clique_ok": self.maximal_clique_ok,
            "maximal_clique_failures": self.maximal_clique_failures,
            "minimal_vertex_ok": self.minimal_vertex_ok,
            "minimal_vertex_failures": self.minimal_vertex_failures,
            "inclusion_exclusion_ok": self.inclusion_exclusion_ok,
            "inclusion_exclusion_failures": self.inclusion_exclusion_failures,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ConditionReport":
        return cls(**{k: v for k, v in d.items() if k != "clique_graph"})


def _ie_lhs(g: Graph, x: int, j: frozenset[int], k_of: dict[int, int]) -> int:
    # signed count of subsets T of the complement, grouped by the intersection they cut out
    cliques = maximal_clique_masks(g)
    coeff = {x: 1}
    for t, c in enumerate(cliques):
        if t in j:
            continue
        budget.check()
        new = dict(coeff)
        for y, cy in coeff.items():
            z = y & c
            if z:
                new[z] = new.get(z, 0) - cy
        coeff = {y: cy for y, cy in new.items() if cy}
    total = sum(cy * k_of[y] for y, cy in coeff.items())
    return k_of[x] - total


def check_conditions(g: Graph) -> ConditionReport:
    """Evaluate the Maximal Clique, Minimal Vertex and Inclusion-Exclusion conditions.

    Every realizable intersection is examined once, under its largest index
    set; all failures are listed, not just the first.
    """
    cliques = maximal_clique_masks(g)
    closure = intersection_closure(g)
    k_of: dict[int, int] = {}
    inters, mc_fail, mv_fail = [], [], []
    for x, j in closure.items():
        size = popcount(x)
        k = exponent(size)
        entry = {"index_set": sorted(j), "vertices": list(g.sorted_names(x)), "size": size, "k": k}
        inters.append(entry)
        if k is None:
            mc_fail.append(entry)
        else:
            k_of[x] = k
        if not j_minimal_mask(g, x):
            mv_fail.append({"index_set": sorted(j), "vertices": list(g.sorted_names(x))})
    ie_ok: bool | None
    ie_fail = []
    if mc_fail:
        ie_ok = None
    else:
        for x, j in closure.items():
            lhs = _ie_lhs(g, x, j, k_of)
            if lhs > k_of[x]:
                ie_fail.append({"index_set": sorted(j), "vertices": list(g.sorted_names(x)), "lhs": lhs, "rhs": k_of[x]})
        ie_ok = not ie_fail
    return ConditionReport(
        maximal_cliques=[list(g.sorted_names(c)) for c in cliques],
        intersections=inters,
        maximal_clique_ok=not mc_fail,
        maximal_clique_failures=mc_fail,
        minimal_vertex_ok=not mv_fail,
        minimal_vertex_failures=mv_fail,
        inclusion_exclusion_ok=ie_ok,
        inclusion_exclusion_failures=ie_fail,
    )


# -- collapsing -----------------------------------------------------------

Chooser = Callable[[list[str], int, frozenset[str]], list[str]]


@dataclass
class CollapseStep:
    members: list[str]
    clique_above: list[str]
    k: int
    already: int
    chosen: list[str]


def traversal_order(p: StarPoset) -> list[int]:
    """Classes from the top down; ties go to the canonical class order."""
    n = len(p.class_masks)
    done = 0
    order = []
    while len(order) < n:
        for i in range(n):
            if not done >> i & 1 and p.above[i] & ~done == 0:
                order.append(i)
                done |= 1 << i
                break
    return order


def collapse_with(g: Graph, choose: Chooser, report: ConditionReport | None = None) -> tuple[list[str], list[CollapseStep]]:
    """Run the collapsing traversal, delegating in-class choices to ``choose``.

    ``choose(members, need, chosen)`` returns ``need`` members of the class.
    """
    report = report or check_conditions(g)
    if not report.ok:
        raise ConditionFailure(report)
    p = star_poset(g)
    chosen: set[str] = set()
    steps = []
    for i in traversal_order(p):
        s_mask = p.clique_above_mask(i)
        k = (popcount(s_mask) + 1).bit_length() - 1
        if (1 << k) - 1 != popcount(s_mask):
            raise CollapseError(f"clique above class {i} has size {popcount(s_mask)}")
        s_names = g.sorted_names(s_mask)
        already = sum(1 for v in s_names if v in chosen)
        members = list(g.sorted_names(p.class_masks[i]))
        need = k - already
        if not 0 <= need <= len(members):
            raise CollapseError(f"need {need} vertices from a class of size {len(members)}")
        picked = list(choose(members, need, frozenset(chosen))) if need else []
        if len(picked) != need or not set(picked) <= set(members):
            raise CollapseError("chooser returned an invalid selection")
        chosen.update(picked)
        steps.append(CollapseStep(members, list(s_names), k, already, picked))
    return sorted(chosen), steps


def collapse(g: Graph, reverse: bool = False) -> Graph:
    """Recover the graph whose clique graph is ``g``.

    Within a class, the first vertices in canonical order are kept (the last
    ones when ``reverse`` is set).
    """

    def take(members, need, _chosen):
        seq = members[::-1] if reverse else members
        return seq[:need]

    chosen, _ = collapse_with(g, take)
    return induced_subgraph(g, chosen)
