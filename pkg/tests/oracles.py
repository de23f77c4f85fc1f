"""Brute-force reference implementations used only by the tests.

They deliberately avoid the library's algorithms: cliques come from
networkx, components from networkx, minors from cofactor expansion.
"""

import itertools
from functools import reduce
from math import gcd

import networkx as nx

from racg.graph import Graph


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edge_list())
    return h


def from_nx(h, prefix="v") -> Graph:
    return Graph([f"{prefix}{v}" for v in h.nodes], [(f"{prefix}{u}", f"{prefix}{v}") for u, v in h.edges])


def atlas(max_n, connected=False):
    for h in nx.graph_atlas_g():
        n = h.number_of_nodes()
        if 1 <= n <= max_n and (not connected or nx.is_connected(h)):
            yield from_nx(h)


def nx_isomorphic(g: Graph, h: Graph) -> bool:
    return nx.is_isomorphic(to_nx(g), to_nx(h))


def clique_graph_oracle(g: Graph):
    """Vertex set (frozensets) and edge set of the clique graph, by definition."""
    h = to_nx(g)
    cliques = [frozenset(c) for c in nx.enumerate_all_cliques(h)]
    verts = set(cliques)
    edges = set()
    for a, b in itertools.combinations(cliques, 2):
        u = a | b
        if all(h.has_edge(x, y) for x, y in itertools.combinations(u, 2)):
            edges.add(frozenset((a, b)))
    return verts, edges


def sil_oracle(g: Graph):
    """All (v, w, component) triples meeting the definition."""
    h = to_nx(g)
    out = set()
    for v, w in itertools.combinations(sorted(h.nodes), 2):
        if h.has_edge(v, w):
            continue
        common = set(h[v]) & set(h[w])
        rest = h.subgraph(set(h.nodes) - common)
        for comp in nx.connected_components(rest):
            if v not in comp and w not in comp:
                out.add((v, w, frozenset(comp)))
    return out


def _det(m):
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * _det([r[:j] + r[j + 1:] for r in m[1:]]) for j in range(n) if m[0][j])


def determinant_divisors(m):
    """d_k = gcd of all k x k minors, until it vanishes."""
    rows, cols = len(m), len(m[0]) if m else 0
    out = []
    for k in range(1, min(rows, cols) + 1):
        minors = [
            _det([[m[r][c] for c in cs] for r in rs])
            for rs in itertools.combinations(range(rows), k)
            for cs in itertools.combinations(range(cols), k)
        ]
        d = reduce(gcd, (abs(x) for x in minors), 0)
        if d == 0:
            break
        out.append(d)
    return out


def invariant_factors_oracle(m):
    d = determinant_divisors(m)
    return [d[0]] + [d[i] // d[i - 1] for i in range(1, len(d))] if d else []
