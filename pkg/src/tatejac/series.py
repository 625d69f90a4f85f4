"""Sparse multivariate power series truncated by total degree.

A :class:`TateSeries` is the finite image of an element of (R, I)<X_1..X_n>:
a map from exponent tuples to nonzero canonical coefficients together with a
degree cap ``D``.  Terms of total degree ``>= D`` are *unknown*, not zero.
``cap=None`` marks a polynomial whose every term is stored; such a series
behaves as if its cap were infinite.

Composition follows ``(f o G)(X) = f(G(X))``.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import NamedTuple, Sequence

from .adic import TOP, AdicElement, Domain, Kind
from .errors import CompositionError, DomainMismatchError, NotAUnitError, PreconditionError

Exponent = tuple[int, ...]


def _min_cap(*caps):
    known = [c for c in caps if c is not None]
    return min(known) if known else None


def grlex_key(exp: Exponent):
    """Graded lexicographic order with x1 > x2 > ... (ascending degree first)."""
    return (sum(exp), tuple(-e for e in exp))


class TateSeries:
    """Immutable truncated series.  Construct through the classmethods."""

    __slots__ = ("n", "terms", "cap", "domain")

    def __init__(self, n: int, terms: dict, cap: int | None, domain: Domain, *, _trusted=False):
        if n < 1:
            raise ValueError("need at least one variable")
        if cap is not None and cap < 0:
            raise ValueError("degree cap must be nonnegative")
        if not _trusted:
            clean = {}
            for exp, c in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != n or min(exp) < 0:
                    raise ValueError(f"bad exponent {exp} for {n} variables")
                if cap is not None and sum(exp) >= cap:
                    continue
                c = domain.coerce(c)
                if c != 0:
                    clean[exp] = domain.add(clean.get(exp, 0), c) if exp in clean else c
            terms = {e: c for e, c in clean.items() if c != 0}
        self.n = n
        self.terms = terms
        self.cap = cap
        self.domain = domain

    def __setattr__(self, name, value):
        if hasattr(self, "domain"):
            raise AttributeError("TateSeries is immutable")
        object.__setattr__(self, name, value)

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, n: int, domain: Domain, cap: int | None = None) -> TateSeries:
        return cls(n, {}, cap, domain, _trusted=True)

    @classmethod
    def constant(cls, c, n: int, domain: Domain, cap: int | None = None) -> TateSeries:
        return cls(n, {(0,) * n: c}, cap, domain)

    @classmethod
    def one(cls, n: int, domain: Domain, cap: int | None = None) -> TateSeries:
        return cls.constant(1, n, domain, cap)

    @classmethod
    def variable(cls, i: int, n: int, domain: Domain, cap: int | None = None) -> TateSeries:
        """The coordinate X_{i+1} (``i`` is zero-based)."""
        exp = tuple(1 if k == i else 0 for k in range(n))
        return cls(n, {exp: 1}, cap, domain)

    @classmethod
    def from_terms(cls, terms, n: int, domain: Domain, cap: int | None = None) -> TateSeries:
        """``terms`` is a mapping or iterable of ``(exponent, coefficient)``."""
        if isinstance(terms, dict):
            terms = terms.items()
        acc: dict = {}
        for exp, c in terms:
            exp = tuple(exp)
            if isinstance(c, str):
                c = Fraction(c)
            acc[exp] = acc.get(exp, 0) + c
        return cls(n, acc, cap, domain)

    # inspection ---------------------------------------------------------
    @property
    def is_polynomial(self) -> bool:
        return self.cap is None

    @property
    def effective_cap(self) -> float:
        return float("inf") if self.cap is None else self.cap

    def coefficient(self, exp: Exponent):
        return self.terms.get(tuple(exp), self.domain.zero())

    @property
    def constant_term(self):
        return self.coefficient((0,) * self.n)

    def degree(self) -> int:
        """Largest stored total degree, -1 for the zero series."""
        return max((sum(e) for e in self.terms), default=-1)

    def order(self) -> int | None:
        """Smallest stored total degree, ``None`` for the zero series."""
        return min((sum(e) for e in self.terms), default=None)

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]))

    def min_valuation(self, skip_constant=False):
        v = TOP
        for exp, c in self.terms.items():
            if skip_constant and not any(exp):
                continue
            v = min(v, self.domain.valuation(c))
        return v

    # structure ----------------------------------------------------------
    def truncate(self, cap: int | None) -> TateSeries:
        """Lower the cap.  Raising the cap of a truncated series is refused."""
        if cap is None:
            if self.cap is not None:
                raise PreconditionError("cannot promote a truncated series to a polynomial")
            return self
        if self.cap is not None and cap > self.cap:
            raise PreconditionError(
                f"series known only below degree {self.cap}, cannot raise cap to {cap}"
            )
        if cap == self.cap:
            return self
        terms = {e: c for e, c in self.terms.items() if sum(e) < cap}
        return TateSeries(self.n, terms, cap, self.domain, _trusted=True)

    def change_domain(self, domain: Domain) -> TateSeries:
        """Apply the canonical ring map of coefficients (e.g. Z -> Z/m^N)."""
        terms = {}
        for e, c in self.terms.items():
            c = domain.reduce_from(self.domain, c)
            if c != 0:
                terms[e] = c
        return TateSeries(self.n, terms, self.cap, domain, _trusted=True)

    def map_coefficients(self, fn) -> TateSeries:
        terms = {}
        for e, c in self.terms.items():
            c = self.domain.norm(fn(c))
            if c != 0:
                terms[e] = c
        return TateSeries(self.n, terms, self.cap, self.domain, _trusted=True)

    def _compatible(self, other: TateSeries):
        if not isinstance(other, TateSeries):
            raise TypeError(f"expected TateSeries, got {type(other).__name__}")
        if other.n != self.n:
            raise DomainMismatchError(f"variable counts differ: {self.n} vs {other.n}")
        if other.domain != self.domain:
            raise DomainMismatchError(f"incompatible domains {self.domain} and {other.domain}")

    def _lift(self, other) -> TateSeries:
        if isinstance(other, TateSeries):
            self._compatible(other)
            return other
        if isinstance(other, AdicElement):
            if other.domain != self.domain:
                raise DomainMismatchError(f"incompatible domains {self.domain} and {other.domain}")
            other = other.value
        return TateSeries.constant(other, self.n, self.domain)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other) -> TateSeries:
        other = self._lift(other)
        cap = _min_cap(self.cap, other.cap)
        dom = self.domain
        terms = dict(self.terms)
        for e, c in other.terms.items():
            if e in terms:
                s = dom.add(terms[e], c)
                if s:
                    terms[e] = s
                else:
                    del terms[e]
            else:
                terms[e] = c
        if cap is not None:
            terms = {e: c for e, c in terms.items() if sum(e) < cap}
        return TateSeries(self.n, terms, cap, dom, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> TateSeries:
        return self.map_coefficients(lambda c: -c)

    def __sub__(self, other) -> TateSeries:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> TateSeries:
        return self._lift(other) - self

    def scale(self, c) -> TateSeries:
        if isinstance(c, AdicElement):
            c = c.value
        c = self.domain.coerce(c)
        return self.map_coefficients(lambda a: a * c)

    def __mul__(self, other) -> TateSeries:
        if not isinstance(other, TateSeries):
            return self.scale(other)
        self._compatible(other)
        return _mul(self, other)

    def __rmul__(self, other) -> TateSeries:
        return self.scale(other)

    def __pow__(self, k: int) -> TateSeries:
        if k < 0:
            raise ValueError("negative powers: use tate_invert_unit")
        result = TateSeries.one(self.n, self.domain, self.cap)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, TateSeries):
            return NotImplemented
        return (
            self.n == other.n
            and self.cap == other.cap
            and self.domain == other.domain
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, self.cap, self.domain, frozenset(self.terms.items())))

    def congruent(self, other: TateSeries) -> bool:
        """Equality at the common truncation (caps may differ)."""
        cap = _min_cap(self.cap, other.cap)
        return self.truncate(cap).terms == other.truncate(cap).terms

    def __repr__(self):
        tail = "" if self.cap is None else f" + O(deg {self.cap})"
        return f"TateSeries({format_series(self)}{tail} over {self.domain})"

    def __str__(self):
        return format_series(self)

    def __call__(self, *args):
        """Compose with series or evaluate at scalars."""
        if args and all(isinstance(a, TateSeries) for a in args):
            return series_compose(self, args)
        return series_eval(self, args).value


def format_series(f: TateSeries) -> str:
    if f.is_zero():
        return "0"
    names = ["x"] if f.n == 1 else [f"x{i + 1}" for i in range(f.n)]
    parts = []
    for exp, c in f.sorted_terms():
        mono = "*".join(
            name if e == 1 else f"{name}^{e}" for name, e in zip(names, exp) if e
        )
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    out = " + ".join(parts)
    return out.replace("+ -", "- ")


# --------------------------------------------------------------------------
# multiplication


def _pack_base(a: TateSeries, b: TateSeries, cap):
    if cap is not None:
        return max(cap, 1)
    ma = max((max(e) for e in a.terms), default=0)
    mb = max((max(e) for e in b.terms), default=0)
    return ma + mb + 1


def _graded(terms: dict, base: int, n: int):
    groups = defaultdict(list)
    for exp, c in terms.items():
        key = 0
        for e in exp:
            key = key * base + e
        groups[sum(exp)].append((key, c))
    return groups


def _unpack(key: int, base: int, n: int) -> Exponent:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        key, out[i] = divmod(key, base)
    return tuple(out)


def _mul(f: TateSeries, g: TateSeries) -> TateSeries:
    cap = _min_cap(f.cap, g.cap)
    dom = f.domain
    n = f.n
    if not f.terms or not g.terms:
        return TateSeries.zero(n, dom, cap)
    base = _pack_base(f, g, cap)
    ga = _graded(f.terms, base, n)
    gb = _graded(g.terms, base, n)
    acc = defaultdict(int)
    for da, la in ga.items():
        for db, lb in gb.items():
            if cap is not None and da + db >= cap:
                continue
            for ka, ca in la:
                for kb, cb in lb:
                    acc[ka + kb] += ca * cb
    norm = dom.norm
    terms = {}
    for key, c in acc.items():
        c = norm(c)
        if c:
            terms[key if n == 1 else _unpack(key, base, n)] = c
    if n == 1:
        terms = {(k,): c for k, c in terms.items()}
    return TateSeries(n, terms, cap, dom, _trusted=True)


def series_add(f: TateSeries, g: TateSeries) -> TateSeries:
    return f + g


def series_mul(f: TateSeries, g: TateSeries) -> TateSeries:
    if not isinstance(g, TateSeries):
        raise TypeError("series_mul expects two series")
    return f * g


# --------------------------------------------------------------------------
# differentiation


def series_derive(f: TateSeries, j: int) -> TateSeries:
    """Formal partial derivative in X_{j+1} (zero-based ``j``); the cap drops by one."""
    if not 0 <= j < f.n:
        raise IndexError(f"variable index {j} out of range for {f.n} variables")
    dom = f.domain
    terms = {}
    for exp, c in f.terms.items():
        e = exp[j]
        if e == 0:
            continue
        c = dom.norm(c * e)
        if c:
            terms[exp[:j] + (e - 1,) + exp[j + 1 :]] = c
    cap = None if f.cap is None else max(f.cap - 1, 0)
    return TateSeries(f.n, terms, cap, dom, _trusted=True)


# --------------------------------------------------------------------------
# composition


def _check_substitution(f: TateSeries, G: Sequence[TateSeries]):
    G = tuple(G)
    if len(G) != f.n:
        raise DomainMismatchError(f"outer series has {f.n} variables, got {len(G)} substitutions")
    if not G:
        raise ValueError("empty substitution")
    m = G[0].n
    for g in G:
        if g.n != m:
            raise DomainMismatchError("substituted series must share a variable count")
        if g.domain != f.domain:
            raise DomainMismatchError(f"incompatible domains {f.domain} and {g.domain}")
    if not f.is_polynomial and any(g.constant_term != 0 for g in G):
        raise CompositionError(
            "composition requires vanishing constant terms "
            "(only a fully stored polynomial may be substituted into with constants)"
        )
    return G, m


def _result_cap(f, G):
    return _min_cap(f.cap, *(g.cap for g in G))


def compose_horner(f: TateSeries, G: Sequence[TateSeries]) -> TateSeries:
    """Nested Horner evaluation, one variable at a time."""
    G, m = _check_substitution(f, G)
    cap = _result_cap(f, G)
    dom = f.domain
    const_free = all(g.constant_term == 0 for g in G)
    terms = f.terms
    if cap is not None and const_free:
        terms = {e: c for e, c in terms.items() if sum(e) < cap}
    Gc = [g if cap is None else g.truncate(cap) for g in G]

    def horner(sub: dict, v: int) -> TateSeries:
        if v == f.n:
            (c,) = sub.values()
            return TateSeries(m, {(0,) * m: c}, cap, dom)
        groups = defaultdict(dict)
        for exp, c in sub.items():
            groups[exp[v]][exp] = c
        acc = None
        for e in range(max(groups), -1, -1):
            if acc is not None:
                acc = acc * Gc[v]
            if e in groups:
                inner = horner(groups[e], v + 1)
                acc = inner if acc is None else acc + inner
        return acc

    if not terms:
        return TateSeries.zero(m, dom, cap)
    return _with_cap(horner(terms, 0), cap)


def compose_monomial(f: TateSeries, G: Sequence[TateSeries]) -> TateSeries:
    """Term-by-term substitution.

    Each monomial image ``G^a`` is built from a cached ``G^(a - e_k)`` with a
    single multiplication, so every stored term of ``f`` costs one product.
    """
    return compose_many([f], G)[0]


def compose_many(fs: Sequence[TateSeries], G: Sequence[TateSeries]) -> list[TateSeries]:
    """Substitute the same tuple ``G`` into several series, sharing monomial images."""
    checked = [_check_substitution(f, G) for f in fs]
    if not checked:
        return []
    G, m = checked[0]
    dom = fs[0].domain
    const_free = all(g.constant_term == 0 for g in G)
    caps = [_result_cap(f, G) for f in fs]
    work_cap = None if any(c is None for c in caps) else max(caps)
    Gc = [g if work_cap is None else g.truncate(work_cap) for g in G]
    n = len(G)
    cache = {(0,) * n: TateSeries.one(m, dom, work_cap)}

    def image(a):
        p = cache.get(a)
        if p is None:
            k = max(i for i, e in enumerate(a) if e)
            prev = a[:k] + (a[k] - 1,) + a[k + 1 :]
            p = cache[a] = image(prev) * Gc[k]
        return p

    out = []
    for f, cap in zip(fs, caps):
        acc = defaultdict(int)
        for exp, c in f.sorted_terms():
            if cap is not None and const_free and sum(exp) >= cap:
                continue
            for e2, c2 in image(exp).terms.items():
                acc[e2] += c * c2
        out.append(TateSeries(m, acc, cap, dom))
    return out


def _with_cap(s: TateSeries, cap):
    if s.cap == cap:
        return s
    if cap is None:
        return TateSeries(s.n, s.terms, None, s.domain, _trusted=True)
    return s.truncate(cap)


def series_compose(f: TateSeries, G: Sequence[TateSeries], strategy: str = "monomial") -> TateSeries:
    """Substitute ``G[i]`` for X_{i+1} in ``f``.

    Every ``G[i]`` must have zero constant term unless ``f`` is a polynomial.
    The result is truncated at the smallest cap among the inputs.
    """
    if strategy == "horner":
        return compose_horner(f, G)
    if strategy == "monomial":
        return compose_monomial(f, G)
    raise ValueError(f"unknown composition strategy {strategy!r}")


# --------------------------------------------------------------------------
# evaluation


class Evaluation(NamedTuple):
    value: AdicElement
    #: min valuation of stored coefficients in the top degree band; TOP if exact
    tail_precision: float | int


def series_eval(f: TateSeries, point: Sequence, window: int | None = None) -> Evaluation:
    """Sum the stored terms at ``point``.

    For a truncated series the report carries the smallest coefficient
    valuation in the degree band ``[D - w, D)`` (``w`` defaults to
    ``max(1, D // 4)``); this is a heuristic for how many I-adic digits of
    the value are trustworthy, not a certificate.
    """
    dom = f.domain
    pt = []
    for a in point:
        if isinstance(a, AdicElement):
            if a.domain != dom:
                raise DomainMismatchError(f"point lives in {a.domain}, series in {dom}")
            a = a.value
        pt.append(dom.coerce(a))
    if len(pt) != f.n:
        raise ValueError(f"expected a point with {f.n} coordinates, got {len(pt)}")
    if not f.is_polynomial and dom.kind is Kind.RATIONAL:
        raise PreconditionError(
            "cannot evaluate a truncated series over Q: the tail is unknown and no I-adic decay applies"
        )
    M = dom.modulus
    total = 0
    for exp, c in f.terms.items():
        t = c
        for a, e in zip(pt, exp):
            if e:
                t = t * (pow(a, e, M) if M else a**e)
        total += t
    value = AdicElement(dom.norm(total), dom)
    if f.is_polynomial:
        return Evaluation(value, TOP)
    D = f.cap
    w = max(1, D // 4) if window is None else window
    tail = TOP
    for exp, c in f.terms.items():
        if sum(exp) >= D - w:
            tail = min(tail, dom.valuation(c))
    return Evaluation(value, tail)


# --------------------------------------------------------------------------
# units


class UnitCheck(NamedTuple):
    is_unit: bool
    #: first offending exponent in grlex order, or ``None``
    monomial: Exponent | None
    reason: str

    def __bool__(self):
        return self.is_unit


def tate_is_unit(f: TateSeries) -> UnitCheck:
    """Unit criterion: f(0) is a unit of R and all other coefficients lie in sqrt(I)."""
    dom = f.domain
    c0 = f.constant_term
    if not dom.is_unit(c0):
        return UnitCheck(False, (0,) * f.n, f"constant term {c0} is not a unit in {dom}")
    for exp, c in f.sorted_terms():
        if any(exp) and not dom.in_radical(c):
            return UnitCheck(False, exp, f"coefficient {c} of {_mono(exp)} is not in the radical of I")
    return UnitCheck(True, None, "constant term is a unit and higher coefficients lie in the radical")


def _mono(exp: Exponent) -> str:
    if len(exp) == 1:
        return f"x^{exp[0]}"
    return "*".join(f"x{i + 1}^{e}" for i, e in enumerate(exp) if e) or "1"


def tate_invert_unit(f: TateSeries, cap: int | None = None) -> TateSeries:
    """Inverse of a Tate unit via ``b * sum_i (-u)^i`` where ``b f = 1 + u``.

    A polynomial input needs an explicit ``cap`` unless it is constant.
    """
    check = tate_is_unit(f)
    if not check:
        raise NotAUnitError(f"not a unit of the Tate algebra: {check.reason}", check)
    dom = f.domain
    if cap is None:
        cap = f.cap
    elif f.cap is not None and cap > f.cap:
        raise PreconditionError(f"series known only below degree {f.cap}")
    b = dom.inverse(f.constant_term)
    if cap is None:
        if f.degree() > 0:
            raise PreconditionError("a degree cap is needed to invert a nonconstant polynomial")
        return TateSeries.constant(b, f.n, dom)
    f = f.truncate(cap)
    u = f.scale(b) - 1
    one = TateSeries.one(f.n, dom, cap)
    # Horner form of sum_{i<D} (-u)^i
    s = one
    for _ in range(max(cap - 1, 0)):
        s = one - u * s
    return s.scale(b)
