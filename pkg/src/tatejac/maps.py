"""Polynomial and Tate maps, Jacobians, determinants and affine normalization."""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from typing import NamedTuple, Sequence

from .adic import Domain
from .errors import DomainMismatchError, NotAUnitError, PreconditionError
from .series import TateSeries, _min_cap, compose_many, series_derive

DEFAULT_DET_BOUND = 8


class PolyMap:
    """An n-tuple of series in n variables over one domain."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[TateSeries]):
        comps = tuple(components)
        if not comps:
            raise ValueError("a map needs at least one component")
        n = len(comps)
        dom = comps[0].domain
        for c in comps:
            if not isinstance(c, TateSeries):
                raise TypeError("map components must be TateSeries")
            if c.n != n:
                raise DomainMismatchError(f"component in {c.n} variables for a map of dimension {n}")
            if c.domain != dom:
                raise DomainMismatchError("map components must share a domain")
        # truncated components share one cap; polynomial components carry none
        caps = {c.cap for c in comps if c.cap is not None}
        if len(caps) > 1:
            cap = min(caps)
            comps = tuple(c.truncate(cap) if c.cap is not None else c for c in comps)
        object.__setattr__(self, "components", comps)

    def __setattr__(self, name, value):
        raise AttributeError("PolyMap is immutable")

    @classmethod
    def identity(cls, n: int, domain: Domain, cap: int | None = None) -> PolyMap:
        return cls([TateSeries.variable(i, n, domain, cap) for i in range(n)])

    @classmethod
    def linear(cls, matrix, domain: Domain, cap: int | None = None) -> PolyMap:
        """The map X -> A X for a square matrix of scalars."""
        n = len(matrix)
        comps = []
        for i in range(n):
            terms = {}
            for j in range(n):
                terms[tuple(1 if k == j else 0 for k in range(n))] = matrix[i][j]
            comps.append(TateSeries(n, terms, cap, domain))
        return cls(comps)

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def domain(self) -> Domain:
        return self.components[0].domain

    @property
    def cap(self) -> int | None:
        return _min_cap(*(c.cap for c in self.components))

    @property
    def is_polynomial(self) -> bool:
        return self.cap is None

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i) -> TateSeries:
        return self.components[i]

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return f"PolyMap({', '.join(str(c) for c in self.components)})"

    def truncate(self, cap: int | None) -> PolyMap:
        return PolyMap([c.truncate(cap) for c in self.components])

    def change_domain(self, domain: Domain) -> PolyMap:
        return PolyMap([c.change_domain(domain) for c in self.components])

    def constant_terms(self) -> tuple:
        return tuple(c.constant_term for c in self.components)

    def linear_part(self) -> tuple[tuple, ...]:
        """Matrix whose (i, j) entry is the coefficient of X_j in component i."""
        n = self.n
        units = [tuple(1 if k == j else 0 for k in range(n)) for j in range(n)]
        return tuple(tuple(c.coefficient(u) for u in units) for c in self.components)

    def __sub__(self, other: PolyMap) -> PolyMap:
        return PolyMap([a - b for a, b in zip(self.components, other.components)])

    def __add__(self, other: PolyMap) -> PolyMap:
        return PolyMap([a + b for a, b in zip(self.components, other.components)])

    def __call__(self, other):
        if isinstance(other, PolyMap):
            return map_compose(self, other)
        raise TypeError("apply a PolyMap to another PolyMap; use series_eval for points")


class SeriesMatrix:
    """Square matrix of series sharing domain and variable count."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("SeriesMatrix must be square and nonempty")
        dom = rows[0][0].domain
        if any(e.domain != dom for r in rows for e in r):
            raise DomainMismatchError("matrix entries must share a domain")
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("SeriesMatrix is immutable")

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __matmul__(self, other: SeriesMatrix) -> SeriesMatrix:
        n = self.size
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = self.rows[i][0] * other.rows[0][j]
                for k in range(1, n):
                    acc = acc + self.rows[i][k] * other.rows[k][j]
                row.append(acc)
            out.append(row)
        return SeriesMatrix(out)

    def substitute(self, G: PolyMap) -> SeriesMatrix:
        """Entrywise composition with ``G`` (the matrix evaluated along G)."""
        flat = [e for r in self.rows for e in r]
        images = compose_many(flat, G.components)
        n = self.size
        return SeriesMatrix([images[i * n : (i + 1) * n] for i in range(n)])

    def __repr__(self):
        return "SeriesMatrix(" + "; ".join(", ".join(str(e) for e in r) for r in self.rows) + ")"


def jacobian(F: PolyMap) -> SeriesMatrix:
    return SeriesMatrix([[series_derive(f, j) for j in range(F.n)] for f in F.components])


def _laplace(rows, mul, add, sub):
    """Division-free determinant by first-row expansion, memoized on column sets."""
    n = len(rows)

    @lru_cache(maxsize=None)
    def minor(r: int, cols: frozenset):
        if r == n:
            return None
        acc = None
        sign_pos = True
        for j in sorted(cols):
            sub_det = minor(r + 1, cols - {j})
            term = rows[r][j] if sub_det is None else mul(rows[r][j], sub_det)
            if acc is None:
                acc = term if sign_pos else sub(None, term)
            else:
                acc = add(acc, term) if sign_pos else sub(acc, term)
            sign_pos = not sign_pos
        return acc

    return minor(0, frozenset(range(n)))


def det(M: SeriesMatrix, bound: int = DEFAULT_DET_BOUND) -> TateSeries:
    """Determinant by cofactor expansion; no division, so sound over Z/m^N."""
    if M.size > bound:
        raise PreconditionError(
            f"determinant of size {M.size} exceeds the bound {bound}; this is a desk-scale tool"
        )
    return _laplace(
        M.rows,
        lambda a, b: a * b,
        lambda a, b: a + b,
        lambda a, b: -b if a is None else a - b,
    )


def det_leibniz(M: SeriesMatrix) -> TateSeries:
    """Permutation-sum determinant (n! terms); used as a test oracle."""
    n = M.size
    total = None
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = M.rows[0][perm[0]]
        for i in range(1, n):
            term = term * M.rows[i][perm[i]]
        if inversions % 2:
            term = -term
        total = term if total is None else total + term
    return total


def scalar_det(A, domain: Domain):
    return _laplace(
        tuple(tuple(r) for r in A),
        domain.mul,
        domain.add,
        lambda a, b: domain.neg(b) if a is None else domain.sub(a, b),
    )


def scalar_inverse(A, domain: Domain):
    """Inverse of a scalar matrix with unit determinant via the adjugate."""
    n = len(A)
    d = scalar_det(A, domain)
    if not domain.is_unit(d):
        raise NotAUnitError(f"linear part not invertible over {domain}: det = {d}")
    dinv = domain.inverse(d)
    if n == 1:
        return ((dinv,),)
    inv = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[A[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            cof = scalar_det(minor, domain)
            if (i + j) % 2:
                cof = domain.neg(cof)
            inv[j][i] = domain.mul(cof, dinv)
    return tuple(tuple(r) for r in inv)


def map_compose(F: PolyMap, G: PolyMap) -> PolyMap:
    """(F o G)(X) = F(G(X))."""
    if F.n != G.n:
        raise DomainMismatchError(f"dimensions differ: {F.n} vs {G.n}")
    return PolyMap(compose_many(F.components, G.components))


def is_identity(F: PolyMap) -> bool:
    n = F.n
    for i, f in enumerate(F.components):
        unit = tuple(1 if k == i else 0 for k in range(n))
        if set(f.terms) != {unit} or f.terms[unit] != 1:
            return False
    return True


class Normalization(NamedTuple):
    normalized: PolyMap
    #: F(0)
    shift: tuple
    #: degree-one coefficient matrix L of F
    linear: tuple
    linear_inverse: tuple


def normalize(F: PolyMap) -> Normalization:
    """Return F' = L^{-1}(F - F(0)), which has zero constant term and identity linear part."""
    dom = F.domain
    shift = F.constant_terms()
    L = F.linear_part()
    Linv = scalar_inverse(L, dom)
    moved = [f - s for f, s in zip(F.components, shift)]
    out = []
    for i in range(F.n):
        acc = None
        for j in range(F.n):
            if Linv[i][j] == 0:
                continue
            term = moved[j].scale(Linv[i][j])
            acc = term if acc is None else acc + term
        out.append(acc if acc is not None else TateSeries.zero(F.n, dom, moved[i].cap))
    return Normalization(PolyMap(out), shift, L, Linv)


def denormalize(norm: Normalization) -> PolyMap:
    """Rebuild F = F(0) + L F'."""
    Fp = norm.normalized
    dom = Fp.domain
    out = []
    for i in range(Fp.n):
        acc = TateSeries.constant(norm.shift[i], Fp.n, dom)
        for j in range(Fp.n):
            if norm.linear[i][j] != 0:
                acc = acc + Fp[j].scale(norm.linear[i][j])
        out.append(acc)
    return PolyMap(out)


def affine_map(matrix, shift, domain: Domain) -> PolyMap:
    """The map X -> matrix (X + shift)."""
    n = len(matrix)
    X = PolyMap.identity(n, domain)
    moved = [X[j] + shift[j] for j in range(n)]
    out = []
    for i in range(n):
        acc = TateSeries.zero(n, domain)
        for j in range(n):
            if matrix[i][j] != 0:
                acc = acc + moved[j].scale(matrix[i][j])
        out.append(acc)
    return PolyMap(out)


def inverse_from_normalized(G_normalized: PolyMap, norm: Normalization) -> PolyMap:
    """Inverse of F from an inverse G' of F': G = G' o L^{-1}(X - F(0)).

    With a nonzero shift this needs ``G_normalized`` to be a polynomial.
    """
    dom = G_normalized.domain
    inner = affine_map(norm.linear_inverse, tuple(dom.neg(s) for s in norm.shift), dom)
    return map_compose(G_normalized, inner)
