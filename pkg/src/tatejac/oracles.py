"""Independent oracles and test-instance generators.

Nothing here reuses the iteration in :mod:`tatejac.inversion`: Lagrange
reversion works on plain lists of Fractions, bijectivity is plain
enumeration, and tame maps come with inverses assembled from closed forms.
"""

from __future__ import annotations

import math
import os
import random
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .adic import Domain, Kind
from .errors import BudgetError, PreconditionError
from .maps import PolyMap, map_compose
from .series import TateSeries

DEFAULT_BUDGET = 10**7
BUDGET_ENV = "TATEJAC_ENUM_BUDGET"


def enumeration_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


def catalan(k: int) -> int:
    return math.comb(2 * k, k) // (k + 1)


# --------------------------------------------------------------------------
# Lagrange reversion


def _series_inverse(a: list[Fraction], D: int) -> list[Fraction]:
    b = [Fraction(1) / a[0]]
    for k in range(1, D):
        s = sum(a[j] * b[k - j] for j in range(1, min(k, len(a) - 1) + 1))
        b.append(-s / a[0])
    return b


def _series_mul(a: list[Fraction], b: list[Fraction], D: int) -> list[Fraction]:
    out = [Fraction(0)] * D
    for i, x in enumerate(a[:D]):
        if x:
            for j, y in enumerate(b[: D - i]):
                out[i + j] += x * y
    return out


def lagrange_oracle(f: TateSeries, D: int) -> TateSeries:
    """Compositional inverse of a univariate f through degree D - 1.

    Uses [x^k] g = (1/k) [x^(k-1)] (x / f(x))^k over Q.  Over exact Z each
    coefficient must come out integral.
    """
    dom = f.domain
    if f.n != 1:
        raise PreconditionError("Lagrange oracle is univariate")
    if dom.kind is Kind.TRUNCATED:
        raise PreconditionError("Lagrange oracle works over Q or exact Z (it divides by k)")
    if f.cap is not None and f.cap < D:
        raise PreconditionError(f"series known only below degree {f.cap}")
    coeffs = [Fraction(f.coefficient((k,))) for k in range(D + 1)]
    if coeffs[0] != 0:
        raise PreconditionError("need f(0) = 0")
    if coeffs[1] == 0 or (dom.kind is Kind.EXACT and abs(coeffs[1]) != 1):
        raise PreconditionError("need f'(0) to be a unit")
    a = coeffs[1:]  # f(x) / x
    b = _series_inverse(a, D)  # x / f(x)
    power = [Fraction(1)] + [Fraction(0)] * (D - 1)
    terms = {}
    for k in range(1, D):
        power = _series_mul(power, b, D)
        c = power[k - 1] / k
        if dom.kind is Kind.EXACT and c.denominator != 1:
            raise PreconditionError(f"coefficient of x^{k} is {c}, not an integer")
        if c:
            terms[(k,)] = c
    return TateSeries(1, terms, D, dom)


# --------------------------------------------------------------------------
# exhaustive bijectivity


def _residue(c, m: int) -> int:
    c = Fraction(c)
    if math.gcd(c.denominator, m) != 1:
        raise PreconditionError(f"coefficient {c} does not reduce modulo {m}")
    return c.numerator * pow(c.denominator, -1, m) % m


def bijectivity_oracle(F: PolyMap, m: int, budget: int | None = None) -> bool:
    """Is F a bijection of (Z/m)^n?  Decided by evaluating every point."""
    if budget is None:
        budget = enumeration_budget()
    n = F.n
    if m < 1:
        raise ValueError("modulus must be positive")
    if m**n > budget:
        raise BudgetError(f"{m}^{n} points exceed the enumeration budget {budget}")
    if not F.is_polynomial:
        raise PreconditionError("bijectivity is only defined for fully stored polynomial maps")
    if m * m >= 2**62:
        raise PreconditionError("modulus too large for vectorized enumeration")
    grid = np.indices((m,) * n, dtype=np.int64).reshape(n, -1)
    total = grid.shape[1]
    max_exp = max((max(e) for f in F for e in f.terms), default=0)
    powers = []
    for i in range(n):
        pw = [np.ones(total, dtype=np.int64) % m]
        for _ in range(max_exp):
            pw.append(pw[-1] * grid[i] % m)
        powers.append(pw)
    code = np.zeros(total, dtype=np.int64)
    for i, f in enumerate(F.components):
        val = np.zeros(total, dtype=np.int64)
        for exp, c in f.terms.items():
            c = _residue(c, m)
            if not c:
                continue
            term = np.full(total, c, dtype=np.int64)
            for j, e in enumerate(exp):
                if e:
                    term = term * powers[j][e] % m
            val = (val + term) % m
        code = code * m + val
    return np.unique(code).size == total


# --------------------------------------------------------------------------
# tame automorphisms


class TamePair(NamedTuple):
    F: PolyMap
    G: PolyMap
    #: human-readable list of the generators, innermost first
    steps: list[str]


def _random_unit(rng: random.Random, domain: Domain):
    if domain.kind is Kind.EXACT:
        return rng.choice((1, -1))
    if domain.kind is Kind.RATIONAL:
        return Fraction(rng.choice((1, -1)) * rng.randint(1, 4), rng.randint(1, 3))
    while True:
        u = rng.randint(1, 4 * domain.m)
        if math.gcd(u, domain.m) == 1:
            return domain.coerce(u)


def _random_poly_in(rng, n: int, skip: int, degree: int, domain: Domain) -> TateSeries:
    """Random polynomial without constant term avoiding variable ``skip``."""
    others = [k for k in range(n) if k != skip]
    terms = {}
    for _ in range(rng.randint(1, 3)):
        d = rng.randint(1, degree)
        exp = [0] * n
        for _ in range(d):
            exp[rng.choice(others)] += 1
        c = rng.randint(-3, 3) or 1
        if domain.kind is Kind.RATIONAL and rng.random() < 0.3:
            c = Fraction(c, rng.randint(1, 3))
        terms[tuple(exp)] = terms.get(tuple(exp), 0) + c
    return TateSeries(n, terms, None, domain)


def generate_tame(
    seed,
    n: int,
    degree: int,
    length: int,
    domain: Domain,
    cap: int | None = None,
) -> TamePair:
    """Random composition of elementary and linear automorphisms with its inverse.

    Elementary generators are X_i -> X_i + q(other variables) with q(0) = 0;
    linear ones are a coordinate permutation followed by unit scalings.
    Both F and G have F(0) = G(0) = 0 and det JF is a unit constant.
    """
    rng = random.Random(seed)
    ident = PolyMap.identity(n, domain)
    F, G = ident, ident
    steps = []
    for _ in range(length):
        if n > 1 and rng.random() < 0.7:
            i = rng.randrange(n)
            q = _random_poly_in(rng, n, i, degree, domain)
            fwd = PolyMap([X + q if k == i else X for k, X in enumerate(ident)])
            bwd = PolyMap([X - q if k == i else X for k, X in enumerate(ident)])
            steps.append(f"x{i + 1} += {q}")
        else:
            perm = list(range(n))
            rng.shuffle(perm)
            units = [_random_unit(rng, domain) for _ in range(n)]
            # component k of fwd is units[k] * X_{perm[k]}
            fwd_mat = [[units[k] if j == perm[k] else 0 for j in range(n)] for k in range(n)]
            bwd_mat = [[0] * n for _ in range(n)]
            for k in range(n):
                bwd_mat[perm[k]][k] = domain.inverse(domain.coerce(units[k]))
            fwd = PolyMap.linear(fwd_mat, domain)
            bwd = PolyMap.linear(bwd_mat, domain)
            steps.append(f"linear perm={perm} units={[str(u) for u in units]}")
        F = map_compose(fwd, F)
        G = map_compose(G, bwd)
    if cap is not None:
        F, G = F.truncate(cap), G.truncate(cap)
    return TamePair(F, G, steps)


def perturb(F: PolyMap, seed, scale: int, degree: int, min_degree: int = 2) -> PolyMap:
    """Add ``scale``-divisible terms of degree ``min_degree..degree`` to each component."""
    rng = random.Random(seed)
    n, dom = F.n, F.domain
    out = []
    for f in F.components:
        terms = {}
        for _ in range(rng.randint(1, 3)):
            d = rng.randint(min_degree, degree)
            exp = [0] * n
            for _ in range(d):
                exp[rng.randrange(n)] += 1
            terms[tuple(exp)] = scale * (rng.randint(-3, 3) or 1)
        out.append(f + TateSeries(n, terms, None, dom))
    return PolyMap(out)
