"""Presentations, relation matrices, Smith normal form and GF(2) linear algebra."""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

from .errors import InsufficientRank, PresentationError

Letter = tuple[str, int]
Word = tuple[Letter, ...]
Matrix = list[list[int]]


def parse_letter(tok: str) -> Letter:
    if not isinstance(tok, str) or not tok:
        raise PresentationError(f"bad letter {tok!r}")
    if tok.endswith("^-1"):
        return tok[:-3], -1
    if tok.endswith("^1"):
        return tok[:-2], 1
    return tok, 1


def format_letter(l: Letter) -> str:
    return l[0] if l[1] == 1 else f"{l[0]}^-1"


def as_word(w) -> Word:
    """Accept a space separated string, a list of tokens, or a list of letters."""
    if isinstance(w, str):
        w = w.split()
    out = []
    for t in w:
        if isinstance(t, tuple):
            g, e = t
            if e not in (1, -1):
                raise PresentationError(f"exponent must be +-1, got {e}")
            out.append((g, e))
        else:
            out.append(parse_letter(t))
    return tuple(out)


def invert(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __init__(self, generators: Iterable[str], relators: Iterable = ()):
        gens = tuple(generators)
        if len(set(gens)) != len(gens):
            raise PresentationError("duplicate generator names")
        rels = tuple(as_word(r) for r in relators)
        known = set(gens)
        for r in rels:
            for g, _ in r:
                if g not in known:
                    raise PresentationError(f"relator uses undeclared generator {g!r}")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", rels)

    def to_dict(self) -> dict:
        return {
            "generators": list(self.generators),
            "relators": [[format_letter(l) for l in r] for r in self.relators],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Presentation":
        if not isinstance(d, Mapping) or "generators" not in d:
            raise PresentationError("presentation JSON needs 'generators'")
        return cls(d["generators"], d.get("relators", []))

    @classmethod
    def loads(cls, text: str) -> "Presentation":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise PresentationError(f"invalid JSON: {exc}") from None


def relation_matrix(p: Presentation, drop_zero: bool = False) -> Matrix:
    """Net exponent sums, one row per relator."""
    col = {g: j for j, g in enumerate(p.generators)}
    rows = []
    for r in p.relators:
        row = [0] * len(p.generators)
        for g, e in r:
            row[col[g]] += e
        if drop_zero and not any(row):
            continue
        rows.append(row)
    return rows


# -- Smith normal form --------------------------------------------------


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
    if not a:
        return []
    n = len(b[0]) if b else 0
    k = len(b) if inner is None else inner
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(n)] for i in range(len(a))]


def determinant(m: Matrix) -> int:
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SNFDecomposition:
    """``p @ s @ q == original``; ``q_inv`` is kept for coordinate changes."""

    p: Matrix
    s: Matrix
    q: Matrix
    q_inv: Matrix
    rows: int
    cols: int

    @property
    def diagonal(self) -> list[int]:
        return [self.s[i][i] for i in range(min(self.rows, self.cols))]

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d]

    def product(self) -> Matrix:
        return matmul(matmul(self.p, self.s, self.rows), self.q, self.cols)

    def to_dict(self) -> dict:
        return {"p": self.p, "s": self.s, "q": self.q, "invariant_factors": self.invariant_factors}


def smith_normal_form(m: Sequence[Sequence[int]], cols: int | None = None) -> SNFDecomposition:
    """Exact Smith normal form by row and column reduction.

    The pivot is the nonzero entry of least absolute value in the remaining
    block, ties broken row-major.  ``cols`` is needed only for 0-row input.
    """
    s = [list(map(int, row)) for row in m]
    k = len(s)
    n = len(s[0]) if s else (cols or 0)
    if any(len(row) != n for row in s):
        raise ValueError("matrix is not rectangular")
    p = identity(k)
    q = identity(n)
    qi = identity(n)

    # row op  S <- E S  pairs with  P <- P E^-1 ; column op  S <- S F  with  Q <- F^-1 Q
    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        for row in p:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):  # row_dst += c row_src
        if c:
            s[dst] = [x + c * y for x, y in zip(s[dst], s[src])]
            for row in p:
                row[src] -= c * row[dst]

    def neg_row(i):
        s[i] = [-x for x in s[i]]
        for row in p:
            row[i] = -row[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        q[i], q[j] = q[j], q[i]
        for row in qi:
            row[i], row[j] = row[j], row[i]

    def add_col(dst, src, c):  # col_dst += c col_src
        if c:
            for row in s:
                row[dst] += c * row[src]
            q[src] = [x - c * y for x, y in zip(q[src], q[dst])]
            for row in qi:
                row[dst] += c * row[src]

    for t in range(min(k, n)):
        while True:
            best = None
            for i in range(t, k):
                for j in range(t, n):
                    v = s[i][j]
                    if v and (best is None or abs(v) < abs(s[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            piv = s[t][t]
            dirty = False
            for i in range(t + 1, k):
                if s[i][t]:
                    add_row(i, t, -(s[i][t] // piv))
                    dirty |= s[i][t] != 0
            for j in range(t + 1, n):
                if s[t][j]:
                    add_col(j, t, -(s[t][j] // piv))
                    dirty |= s[t][j] != 0
            if dirty:
                continue
            bad = next((i for i in range(t + 1, k) for j in range(t + 1, n) if s[i][j] % piv), None)
            if bad is not None:
                add_row(t, bad, 1)
                continue
            break
        if t < k and t < n and s[t][t] < 0:
            neg_row(t)
    return SNFDecomposition(p, s, q, qi, k, n)


# -- abelianization -------------------------------------------------------


@dataclass(frozen=True)
class AbelianModel:
    presentation: Presentation
    snf: SNFDecomposition
    # per generator-coordinate: the cyclic order (0 = infinite); units dropped
    factor_orders: tuple[int, ...]
    _coords: tuple[int, ...]

    @property
    def is_elementary_2(self) -> bool:
        return all(o == 2 for o in self.factor_orders)

    @property
    def rank(self) -> int:
        return len(self.factor_orders)

    def describe(self) -> str:
        if not self.factor_orders:
            return "trivial"
        parts = ["Z" if o == 0 else f"Z/{o}" for o in self.factor_orders]
        return " x ".join(parts)

    def to_dict(self) -> dict:
        return {
            "generators": list(self.presentation.generators),
            "factor_orders": list(self.factor_orders),
            "elementary_abelian_2": self.is_elementary_2,
            "snf": self.snf.to_dict(),
        }

    def ab_image(self, w) -> tuple[int, ...]:
        """Coefficients of the image of ``w`` in the canonical cyclic decomposition.

        Uses the coordinates ``b @ Q^-1`` so that the relation lattice becomes
        the row space of ``S``.
        """
        col = {g: j for j, g in enumerate(self.presentation.generators)}
        b = [0] * len(col)
        for g, e in as_word(w):
            if g not in col:
                raise PresentationError(f"unknown generator {g!r}")
            b[col[g]] += e
        qi = self.snf.q_inv
        out = []
        for c, order in zip(self._coords, self.factor_orders):
            y = sum(b[r] * qi[r][c] for r in range(len(b)))
            out.append(y % order if order else y)
        return tuple(out)


def abelianize(p: Presentation) -> AbelianModel:
    rel = relation_matrix(p)
    snf = smith_normal_form(rel, cols=len(p.generators))
    diag = snf.diagonal + [0] * (len(p.generators) - len(snf.diagonal))
    coords, orders = [], []
    for c, d in enumerate(diag):
        if d != 1:
            coords.append(c)
            orders.append(d)
    return AbelianModel(p, snf, tuple(orders), tuple(coords))


def ab_image(m: AbelianModel, w) -> tuple[int, ...]:
    return m.ab_image(w)


# -- GF(2) ------------------------------------------------------------------


def to_bits(v: Sequence[int]) -> int:
    out = 0
    for i, x in enumerate(v):
        if x % 2:
            out |= 1 << i
    return out


def from_bits(b: int, n: int) -> tuple[int, ...]:
    return tuple(b >> i & 1 for i in range(n))


class XorBasis:
    """Incremental GF(2) row echelon basis over int bitmasks.

    Each stored row remembers which inserted vectors it combines, so
    membership queries can also return an expression.
    """

    def __init__(self):
        self.rows: dict[int, tuple[int, int]] = {}  # pivot bit -> (vector, combo)
        self.count = 0

    def reduce(self, v: int) -> tuple[int, int]:
        combo = 0
        while v:
            top = v.bit_length() - 1
            if top not in self.rows:
                break
            rv, rc = self.rows[top]
            v ^= rv
            combo ^= rc
        return v, combo

    def add(self, v: int) -> bool:
        r, combo = self.reduce(v)
        tag = 1 << self.count
        self.count += 1
        if not r:
            return False
        self.rows[r.bit_length() - 1] = (r, combo ^ tag)
        return True

    def express(self, v: int) -> int | None:
        """Mask of inserted-vector positions summing to ``v``, or None."""
        r, combo = self.reduce(v)
        return None if r else combo


def is_independent(vectors: Iterable[Sequence[int]]) -> bool:
    b = XorBasis()
    return all(b.add(to_bits(v)) for v in vectors)


def gf2_rank(vectors: Iterable[Sequence[int]]) -> int:
    b = XorBasis()
    return sum(b.add(to_bits(v)) for v in vectors)


def extend_gf2_basis(
    independent: Sequence[Sequence[int]],
    candidates: Sequence[Sequence[int]],
    target_count: int,
) -> list[int]:
    """Greedily pick ``target_count`` candidate indices keeping everything independent.

    Greedy in candidate order gives the lexicographically first choice
    (independent sets form a matroid).
    """
    b = XorBasis()
    for v in independent:
        if not b.add(to_bits(v)):
            raise InsufficientRank("the 'independent' vectors are linearly dependent")
    picked = []
    for i, v in enumerate(candidates):
        if len(picked) == target_count:
            break
        if b.add(to_bits(v)):
            picked.append(i)
    if len(picked) < target_count:
        raise InsufficientRank(f"only {len(picked)} of {target_count} independent candidates available")
    return picked


def gf2_solve(basis: Sequence[Sequence[int]], target: Sequence[int]) -> list[int] | None:
    """Indices of ``basis`` vectors summing to ``target`` over GF(2)."""
    b = XorBasis()
    for v in basis:
        b.add(to_bits(v))
    combo = b.express(to_bits(target))
    if combo is None:
        return None
    return [i for i in range(len(basis)) if combo >> i & 1]
