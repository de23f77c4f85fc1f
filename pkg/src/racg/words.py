"""Word problem in right-angled Coxeter groups.

Words are tuples of vertex names.  Every generator is an involution, so the
inverse of a word is its reversal.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

from .abelian import Presentation
from .errors import GraphError, NotAnInvolution, SupportNotClique
from .graph import Graph

RacgWord = tuple[str, ...]


def as_word(w) -> RacgWord:
    if isinstance(w, str):
        return tuple(w.split())
    return tuple(w)


def inverse(w: Sequence[str]) -> RacgWord:
    return tuple(reversed(w))


class RacgContext:
    """The right-angled Coxeter group defined by a graph.

    Also serves as a group evaluator: elements are normal-form words.
    """

    def __init__(self, graph: Graph):
        self.graph = graph
        self.generators = graph.vertices
        self._idx = {v: i for i, v in enumerate(graph.vertices)}
        self._adj = [graph.adj_mask(i) for i in range(len(graph))]

    def __repr__(self):
        return f"RacgContext({self.graph!r})"

    def _indices(self, w) -> list[int]:
        out = []
        for s in as_word(w):
            try:
                out.append(self._idx[s])
            except KeyError:
                raise GraphError(f"letter {s!r} is not a generator") from None
        return out

    def _reduce(self, idx: Iterable[int]) -> list[int]:
        stack: list[int] = []
        for s in idx:
            adj = self._adj[s]
            # look back through letters commuting with s for a copy to cancel
            for pos in range(len(stack) - 1, -1, -1):
                t = stack[pos]
                if t == s:
                    del stack[pos]
                    break
                if not adj >> t & 1:
                    stack.append(s)
                    break
            else:
                stack.append(s)
        return stack

    def _lex_least(self, red: list[int]) -> list[int]:
        rest = list(red)
        out = []
        full = (1 << len(self._adj)) - 1
        while rest:
            best = None
            blocked = 0
            for pos, s in enumerate(rest):
                # s can move to the front iff everything before it commutes with it
                if not blocked >> s & 1 and (best is None or s < rest[best]):
                    best = pos
                blocked |= ~self._adj[s] & full
            out.append(rest.pop(best))
        return out

    def normal_form_indices(self, idx: Iterable[int]) -> tuple[int, ...]:
        return tuple(self._lex_least(self._reduce(idx)))

    def normal_form(self, w) -> RacgWord:
        nf = self.normal_form_indices(self._indices(w))
        return tuple(self.generators[i] for i in nf)

    # -- evaluator interface -----------------------------------------

    def evaluate(self, w) -> RacgWord:
        return self.normal_form(w)

    def identity(self) -> RacgWord:
        return ()

    def multiply(self, a: RacgWord, b: RacgWord) -> RacgWord:
        return self.normal_form(tuple(a) + tuple(b))

    def is_identity(self, w) -> bool:
        return not self.normal_form(w)

    def equal(self, u, v) -> bool:
        return self.normal_form(as_word(u) + inverse(as_word(v))) == ()

    def is_involution(self, w) -> bool:
        return is_involution(self, w)

    def commutes(self, u, v) -> bool:
        return commutes(self, u, v)

    def length(self, w) -> int:
        return len(self._reduce(self._indices(w)))

    def presentation(self) -> Presentation:
        g = self.graph
        rels = [[v, v] for v in g.vertices]
        rels += [[u, v, u + "^-1", v + "^-1"] for u, v in g.edge_list()]
        return Presentation(g.vertices, rels)


def normal_form(ctx: RacgContext, w) -> RacgWord:
    """Shortlex-least word equal to ``w``.

    >>> from .graph import Graph
    >>> ctx = RacgContext(Graph(["a", "b"], [("a", "b")]))
    >>> normal_form(ctx, "b a b")
    ('a',)
    """
    return ctx.normal_form(w)


def is_involution(ctx: RacgContext, w) -> bool:
    w = as_word(w)
    return bool(ctx.normal_form(w)) and not ctx.normal_form(w + w)


def support_parity(w) -> frozenset[str]:
    odd: set[str] = set()
    for s in as_word(w):
        odd ^= {s}
    return frozenset(odd)


def involution_class_rep(ctx: RacgContext, w) -> frozenset[str]:
    """The commuting generator set whose product is conjugate to involution ``w``."""
    if not is_involution(ctx, w):
        raise NotAnInvolution(f"{' '.join(as_word(w)) or '(empty word)'} is not an involution")
    supp = support_parity(w)
    if not supp or not ctx.graph.is_clique_mask(ctx.graph.mask(supp)):
        raise SupportNotClique(f"parity support {sorted(supp)} is not a clique")
    return supp


def commutes(ctx: RacgContext, u, v) -> bool:
    u, v = as_word(u), as_word(v)
    return not ctx.normal_form(u + v + inverse(u) + inverse(v))
