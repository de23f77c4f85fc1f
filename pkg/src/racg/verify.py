"""Independent re-verification of positive recognition certificates.

Nothing here imports the construction code.  Group elements are evaluated
in the Tits representation, which is faithful for Coxeter groups; elements
of a split extension are carried as a matrix together with the matrices of
the automorphism's images of every generator.
"""

from __future__ import annotations

from collections.abc import Mapping


def _tits(vertices, edges):
    n = len(vertices)
    idx = {v: i for i, v in enumerate(vertices)}
    adj = [[False] * n for _ in range(n)]
    for u, v in edges:
        adj[idx[u]][idx[v]] = adj[idx[v]][idx[u]] = True
    mats = {}
    for s in vertices:
        i = idx[s]
        m = [[int(r == c) for c in range(n)] for r in range(n)]
        for t in range(n):
            b = 1 if t == i else (0 if adj[i][t] else -1)
            m[i][t] -= 2 * b
        mats[s] = m
    return mats


def _mul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n) if a[i][k]) for j in range(n)] for i in range(n)]


def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _letters(word):
    out = []
    for tok in word.split() if isinstance(word, str) else word:
        name = tok[:-3] if tok.endswith("^-1") else tok
        out.append(name)
    # every generator is an involution, so exponents can be dropped
    return out


class _Coxeter:
    def __init__(self, vertices, edges):
        self.vertices = list(vertices)
        self.mats = _tits(self.vertices, edges)
        self.n = len(self.vertices)

    def is_identity(self, word) -> bool:
        m = _eye(self.n)
        for s in _letters(word):
            m = _mul(m, self.mats[s])
        return m == _eye(self.n)


class _Extension:
    """Split extension of a Coxeter group by partial conjugations."""

    def __init__(self, vertices, edges, pcs):
        self.base = _Coxeter(vertices, edges)
        self.pcs = {p["name"]: (p["acting"], set(p["domain"])) for p in pcs}

    def is_identity(self, word) -> bool:
        base = self.base
        a = _eye(base.n)
        h = dict(base.mats)
        for s in _letters(word):
            if s in self.pcs:
                act, dom = self.pcs[s]
                ma = h[act]
                h = {t: (_mul(_mul(ma, h[t]), ma) if t in dom else h[t]) for t in h}
            else:
                a = _mul(a, h[s])
        return a == _eye(base.n) and all(h[t] == base.mats[t] for t in h)


def _racg_relators(vertices, edges):
    rels = [[v, v] for v in vertices]
    rels += [[u, v, u, v] for u, v in edges]
    return rels


def _group(desc: Mapping):
    g = desc["graph"]
    verts, edges = g["vertices"], [tuple(e) for e in g.get("edges", [])]
    pcs = desc.get("pcs") or []
    if not pcs:
        return _Coxeter(verts, edges), list(verts), _racg_relators(verts, edges)
    ev = _Extension(verts, edges, pcs)
    gens = list(verts) + [p["name"] for p in pcs]
    rels = _racg_relators(verts, edges)
    names = [p["name"] for p in pcs]
    rels += [[x, x] for x in names]
    for i, x in enumerate(names):
        for y in names[i + 1:]:
            if ev.is_identity([x, y, x, y]):
                rels.append([x, y, x, y])
    for p in pcs:
        for v in verts:
            if v in p["domain"]:
                rels.append([p["name"], v, p["name"], p["acting"], v, p["acting"]])
            else:
                rels.append([p["name"], v, p["name"], v])
    return ev, gens, rels


def _subst(word, table):
    out = []
    for s in _letters(word):
        out += _letters(table[s])
    return out


def verify_certificate(cert: Mapping, cap: int = 4096) -> tuple[bool, list[str]]:
    """Re-check that forward and backward maps are inverse isomorphisms.

    ``cert`` needs ``group`` (``graph`` plus optional ``pcs``),
    ``presentation_graph``, ``forward`` (fresh generator -> word in the
    group) and ``backward`` (group generator -> word in fresh generators).
    """
    problems = []
    grp, gens, rels = _group(cert["group"])
    pg = cert["presentation_graph"]
    fresh = _Coxeter(pg["vertices"], [tuple(e) for e in pg.get("edges", [])])
    fwd, bwd = cert["forward"], cert["backward"]
    if sorted(fwd) != sorted(pg["vertices"]):
        problems.append("forward map does not cover the presentation graph")
    if sorted(bwd) != sorted(gens):
        problems.append("backward map does not cover the group generators")
    if problems:
        return False, problems
    for r in _racg_relators(pg["vertices"], pg.get("edges", [])):
        w = _subst(r, fwd)
        if len(w) > cap or not grp.is_identity(w):
            problems.append(f"forward map breaks relator {' '.join(r)}")
    for r in rels:
        w = _subst(r, bwd)
        if len(w) > cap or not fresh.is_identity(w):
            problems.append(f"backward map breaks relator {' '.join(r)}")
    for s in gens:
        w = _subst(bwd[s], fwd) + [s]
        if not grp.is_identity(w):
            problems.append(f"forward(backward({s})) != {s}")
    for b in pg["vertices"]:
        w = _subst(fwd[b], bwd) + [b]
        if not fresh.is_identity(w):
            problems.append(f"backward(forward({b})) != {b}")
    return not problems, problems
