"""Finite simple graphs with string-named vertices.

Vertices are kept in lexicographic order and every vertex set is handled
internally as an integer bitmask over that order.  Public functions return
``frozenset`` vertex sets; anything listed (cliques, witnesses) comes out in
canonical order so that index sets stay stable between runs.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Iterator, Mapping, Sequence

from . import budget
from .errors import GraphError, SizeLimitExceeded

VertexSet = frozenset  # frozenset[str]
IndexSet = frozenset  # frozenset[int], 0-based positions in maximal_cliques(g)

DEFAULT_MAX_ISO_VERTICES = 16


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class Graph:
    """Immutable finite simple graph.

    >>> g = Graph(["b", "a", "c"], [("a", "b")])
    >>> g.vertices
    ('a', 'b', 'c')
    >>> sorted(g.link("a"))
    ['b']
    """

    __slots__ = ("vertices", "edges", "_index", "_adj", "_cache")

    def __init__(self, vertices: Iterable[str], edges: Iterable[Iterable[str]] = ()):
        verts = list(vertices)
        if not verts:
            raise GraphError("a graph needs at least one vertex")
        for v in verts:
            if not isinstance(v, str) or not v:
                raise GraphError(f"vertex names must be non-empty strings, got {v!r}")
        if len(set(verts)) != len(verts):
            raise GraphError("duplicate vertex names")
        self.vertices: tuple[str, ...] = tuple(sorted(verts))
        self._index = {v: i for i, v in enumerate(self.vertices)}
        adj = [0] * len(self.vertices)
        edge_set = set()
        for e in edges:
            pair = tuple(e)
            if len(pair) != 2:
                raise GraphError(f"edge {e!r} does not have two endpoints")
            u, v = pair
            if u == v:
                raise GraphError(f"loop at {u!r}")
            for x in pair:
                if x not in self._index:
                    raise GraphError(f"edge endpoint {x!r} is not a vertex")
            edge_set.add(frozenset(pair))
            i, j = self._index[u], self._index[v]
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        self.edges: frozenset[frozenset[str]] = frozenset(edge_set)
        self._adj = tuple(adj)
        self._cache: dict = {}

    # -- basic access -------------------------------------------------

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v: object) -> bool:
        return v in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def __repr__(self) -> str:
        return f"Graph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    def index(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def adjacent(self, u: str, v: str) -> bool:
        return bool(self._adj[self.index(u)] >> self.index(v) & 1)

    def adj_mask(self, i: int) -> int:
        return self._adj[i]

    @property
    def full_mask(self) -> int:
        return (1 << len(self.vertices)) - 1

    def mask(self, vs: Iterable[str]) -> int:
        m = 0
        for v in vs:
            m |= 1 << self.index(v)
        return m

    def names(self, mask: int) -> frozenset[str]:
        return frozenset(self.vertices[i] for i in iter_bits(mask))

    def sorted_names(self, mask: int) -> tuple[str, ...]:
        return tuple(self.vertices[i] for i in iter_bits(mask))

    def link(self, v: str) -> frozenset[str]:
        return self.names(self._adj[self.index(v)])

    def star(self, v: str) -> frozenset[str]:
        i = self.index(v)
        return self.names(self._adj[i] | 1 << i)

    def star_mask(self, i: int) -> int:
        return self._adj[i] | 1 << i

    def degree(self, v: str) -> int:
        return popcount(self._adj[self.index(v)])

    def edge_list(self) -> list[tuple[str, str]]:
        return sorted(tuple(sorted(e)) for e in self.edges)

    def is_clique_mask(self, mask: int) -> bool:
        if not mask:
            return False
        for i in iter_bits(mask):
            if mask & ~(self._adj[i] | 1 << i):
                return False
        return True

    # -- serialization ------------------------------------------------

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edge_list()]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "Graph":
        if not isinstance(data, Mapping) or "vertices" not in data:
            raise GraphError("graph JSON needs a 'vertices' list")
        edges = data.get("edges", [])
        seen = set()
        for e in edges:
            if not isinstance(e, (list, tuple)) or len(e) != 2:
                raise GraphError(f"malformed edge {e!r}")
            key = frozenset(e)
            if key in seen:
                raise GraphError(f"duplicate edge {list(e)!r}")
            seen.add(key)
        return cls(data["vertices"], edges)


# -- neighbourhoods and cliques ---------------------------------------


def neighborhood(g: Graph, v: str, closed: bool = False) -> frozenset[str]:
    """Link of ``v``, or its star when ``closed`` is set."""
    return g.star(v) if closed else g.link(v)


def is_clique(g: Graph, s: Iterable[str]) -> bool:
    return g.is_clique_mask(g.mask(s))


def _bron_kerbosch(g: Graph) -> list[int]:
    out: list[int] = []
    adj = [g.adj_mask(i) for i in range(len(g))]

    def expand(r: int, p: int, x: int) -> None:
        budget.check()
        if not p and not x:
            out.append(r)
            return
        px = p | x
        # pivot maximizing |P ∩ N(u)|
        pivot = max(iter_bits(px), key=lambda u: popcount(p & adj[u]))
        for v in iter_bits(p & ~adj[pivot]):
            bit = 1 << v
            expand(r | bit, p & adj[v], x & adj[v])
            p &= ~bit
            x |= bit

    expand(0, g.full_mask, 0)
    return out


def maximal_clique_masks(g: Graph) -> list[int]:
    """Maximal cliques as bitmasks, in canonical order."""
    cached = g._cache.get("max_cliques")
    if cached is None:
        cached = sorted(_bron_kerbosch(g), key=lambda m: tuple(iter_bits(m)))
        g._cache["max_cliques"] = cached
    return cached


def maximal_cliques(g: Graph) -> list[frozenset[str]]:
    """All inclusion-maximal cliques, sorted lexicographically by members.

    >>> g = Graph(["a1", "a2", "a3", "a4"],
    ...           [("a1", "a2"), ("a2", "a3"), ("a1", "a3"), ("a1", "a4")])
    >>> [sorted(c) for c in maximal_cliques(g)]
    [['a1', 'a2', 'a3'], ['a1', 'a4']]
    """
    return [g.names(m) for m in maximal_clique_masks(g)]


def all_clique_masks(g: Graph) -> list[int]:
    """Every nonempty clique of ``g``, ordered by (size, members)."""
    out: list[int] = []
    adj = [g.adj_mask(i) for i in range(len(g))]

    def grow(clique: int, cand: int) -> None:
        budget.check()
        for v in iter_bits(cand):
            c = clique | 1 << v
            out.append(c)
            # only extend with higher-indexed common neighbours
            grow(c, cand & adj[v] & ~((2 << v) - 1))

    grow(0, g.full_mask)
    out.sort(key=lambda m: (popcount(m), tuple(iter_bits(m))))
    return out


def _intersection_mask(g: Graph, indices: Iterable[int]) -> int:
    cliques = maximal_clique_masks(g)
    idx = list(indices)
    if not idx:
        raise GraphError("index set must be nonempty")
    m = g.full_mask
    for i in idx:
        if not 0 <= i < len(cliques):
            raise GraphError(f"maximal clique index {i} out of range")
        m &= cliques[i]
    return m


def clique_intersection(g: Graph, i: Iterable[int]) -> frozenset[str]:
    """Intersection of the maximal cliques with the given 0-based indices."""
    return g.names(_intersection_mask(g, i))


def containing_index_set(g: Graph, mask: int) -> frozenset[int]:
    """Largest index set whose intersection contains ``mask``."""
    return frozenset(i for i, c in enumerate(maximal_clique_masks(g)) if mask & ~c == 0)


def intersection_closure(g: Graph) -> dict[int, frozenset[int]]:
    """All distinct nonempty intersections of maximal cliques.

    Maps each intersection (as a mask) to its largest defining index set.
    Ordered by decreasing size, then members.
    """
    cached = g._cache.get("closure")
    if cached is not None:
        return cached
    cliques = maximal_clique_masks(g)
    seen = set(cliques)
    frontier = list(cliques)
    while frontier:
        budget.check()
        nxt = []
        for m in frontier:
            for c in cliques:
                x = m & c
                if x and x not in seen:
                    seen.add(x)
                    nxt.append(x)
        frontier = nxt
    order = sorted(seen, key=lambda m: (-popcount(m), tuple(iter_bits(m))))
    cached = {m: containing_index_set(g, m) for m in order}
    g._cache["closure"] = cached
    return cached


def vertex_index_set_mask(g: Graph, i: int) -> int:
    """Intersection of all maximal cliques containing vertex ``i``."""
    m = g.full_mask
    for c in maximal_clique_masks(g):
        if c >> i & 1:
            m &= c
    return m


def j_minimal_mask(g: Graph, x: int) -> int:
    """Members of intersection ``x`` lying in no strictly smaller intersection."""
    return sum(1 << v for v in iter_bits(x) if vertex_index_set_mask(g, v) == x)


def j_minimal_vertices(g: Graph, j: Iterable[int]) -> frozenset[str]:
    x = _intersection_mask(g, j)
    if not x:
        raise GraphError("the intersection for this index set is empty")
    return g.names(j_minimal_mask(g, x))


def induced_subgraph(g: Graph, s: Iterable[str]) -> Graph:
    keep = set(s)
    if not keep:
        raise GraphError("cannot induce on an empty vertex set")
    for v in keep:
        g.index(v)
    return Graph(keep, [tuple(e) for e in g.edges if e <= keep])


def connected_components(g: Graph, within: int | None = None) -> list[int]:
    """Components of the subgraph induced on ``within`` (default: all)."""
    remaining = g.full_mask if within is None else within
    comps = []
    while remaining:
        start = remaining & -remaining
        comp = start
        frontier = start
        while frontier:
            nb = 0
            for i in iter_bits(frontier):
                nb |= g.adj_mask(i)
            frontier = nb & remaining & ~comp
            comp |= frontier
        comps.append(comp)
        remaining &= ~comp
    comps.sort(key=lambda m: tuple(iter_bits(m)))
    return comps


# -- isomorphism ------------------------------------------------------


def _refined_colors(g: Graph, rounds: int = 3) -> list[int]:
    n = len(g)
    colors = [popcount(g.adj_mask(i)) for i in range(n)]
    for _ in range(rounds):
        sigs = [(colors[i], tuple(sorted(colors[j] for j in iter_bits(g.adj_mask(i))))) for i in range(n)]
        colors = [hash(s) for s in sigs]
    return colors


def is_isomorphic(
    g: Graph, h: Graph, max_vertices: int = DEFAULT_MAX_ISO_VERTICES
) -> dict[str, str] | None:
    """Return a vertex bijection g -> h preserving adjacency, or ``None``.

    Raises :class:`SizeLimitExceeded` above ``max_vertices``; that is a
    refusal to search, not a negative answer.
    """
    n = len(g)
    if n != len(h) or len(g.edges) != len(h.edges):
        return None
    if n > max_vertices:
        raise SizeLimitExceeded(f"isomorphism search capped at {max_vertices} vertices (got {n})")
    cg, ch = _refined_colors(g), _refined_colors(h)
    if sorted(cg) != sorted(ch):
        return None
    by_color: dict[int, list[int]] = {}
    for j, c in enumerate(ch):
        by_color.setdefault(c, []).append(j)
    class_size = {c: len(v) for c, v in by_color.items()}
    # rare colours first, then high degree, then canonical position
    order = sorted(range(n), key=lambda i: (class_size[cg[i]], -popcount(g.adj_mask(i)), i))
    assign: dict[int, int] = {}
    used = 0

    def search(pos: int) -> bool:
        nonlocal used
        if pos == n:
            return True
        budget.check()
        i = order[pos]
        gi_adj = g.adj_mask(i)
        for j in by_color[cg[i]]:
            if used >> j & 1:
                continue
            hj_adj = h.adj_mask(j)
            ok = True
            for a, b in assign.items():
                if (gi_adj >> a & 1) != (hj_adj >> b & 1):
                    ok = False
                    break
            if not ok:
                continue
            assign[i] = j
            used |= 1 << j
            if search(pos + 1):
                return True
            del assign[i]
            used &= ~(1 << j)
        return False

    if not search(0):
        return None
    return {g.vertices[i]: h.vertices[j] for i, j in assign.items()}


# -- I/O ----------------------------------------------------------------


def load_graph(text: str) -> Graph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"invalid JSON: {exc}") from None
    return Graph.from_dict(data)


def dumps(obj, **kw) -> str:
    return json.dumps(obj, indent=2, **kw) + "\n"


def _dot_id(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: Graph, labels: Mapping[str, str] | None = None, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    for v in g.vertices:
        if labels and v in labels:
            lines.append(f"  {_dot_id(v)} [label={_dot_id(labels[v])}];")
        else:
            lines.append(f"  {_dot_id(v)};")
    for u, v in g.edge_list():
        lines.append(f"  {_dot_id(u)} -- {_dot_id(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def sort_sets(sets: Iterable[Iterable[str]]) -> list[list[str]]:
    return sorted(sorted(s) for s in sets)


def format_set(s: Sequence[str] | frozenset[str]) -> str:
    return "{" + ",".join(sorted(s)) + "}"
