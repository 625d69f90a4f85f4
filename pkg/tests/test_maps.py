from fractions import Fraction

import pytest

from conftest import random_series
from tatejac.adic import Domain
from tatejac.errors import CompositionError, NotAUnitError, PreconditionError
from tatejac.inversion import formal_inverse
from tatejac.maps import (
    PolyMap,
    SeriesMatrix,
    denormalize,
    det,
    det_leibniz,
    is_identity,
    jacobian,
    map_compose,
    normalize,
)
from tatejac.oracles import generate_tame
from tatejac.series import TateSeries, series_compose

Q = Domain.rational()


def xs(n, dom, cap=None):
    return [TateSeries.variable(i, n, dom, cap) for i in range(n)]


def const(c, n, dom, cap=None):
    return TateSeries.constant(c, n, dom, cap)


def random_map(rng, n, dom, cap, max_deg=3, const_terms=False):
    return PolyMap(
        [random_series(rng, n, dom, max_deg=max_deg, cap=cap, terms=4, const=const_terms) for _ in range(n)]
    )


def test_jacobian_elementary_map():
    x1, x2 = xs(2, Q)
    J = jacobian(PolyMap([x1 + x2 * x2, x2]))
    one, zero = const(1, 2, Q), TateSeries.zero(2, Q)
    assert J == SeriesMatrix([[one, 2 * x2], [zero, one]])
    assert det(J) == one


def test_jacobian_identity_and_power_map():
    dom = Domain.exact(3)
    J = jacobian(PolyMap.identity(3, dom))
    for i in range(3):
        for j in range(3):
            assert J[i, j] == const(1 if i == j else 0, 3, dom)
    (x,) = xs(1, dom)
    assert jacobian(PolyMap([x - x**3]))[0, 0] == 1 - 3 * x * x


def test_det_matches_leibniz(rng):
    for dom in (Domain.truncated(6, 2), Domain.exact(5), Q):
        for n in range(1, 5):
            for _ in range(3):
                rows = [[random_series(rng, 2, dom, max_deg=2, cap=5, terms=3) for _ in range(n)] for _ in range(n)]
                M = SeriesMatrix(rows)
                assert det(M) == det_leibniz(M)


def test_det_two_by_two_is_ad_minus_bc(rng):
    dom = Domain.truncated(12, 2)
    a, b, c, d = (random_series(rng, 2, dom, cap=6) for _ in range(4))
    assert det(SeriesMatrix([[a, b], [c, d]])) == a * d - b * c


def test_det_size_bound():
    J = jacobian(PolyMap.identity(9, Q))
    with pytest.raises(PreconditionError, match="desk-scale"):
        det(J)
    assert det(J, bound=9) == const(1, 9, Q)


def test_det_multiplicative(rng):
    for dom in (Domain.truncated(5, 3), Q):
        for n in (1, 2, 3):
            A = SeriesMatrix([[random_series(rng, 2, dom, max_deg=2, cap=5) for _ in range(n)] for _ in range(n)])
            B = SeriesMatrix([[random_series(rng, 2, dom, max_deg=2, cap=5) for _ in range(n)] for _ in range(n)])
            assert det(A @ B) == det(A) * det(B)


def test_compose_examples():
    x1, x2 = xs(2, Q)
    F = PolyMap([x1 + x2 * x2, x2])
    G = PolyMap([x1 - x2 * x2, x2])
    assert map_compose(F, PolyMap.identity(2, Q)) == F
    assert map_compose(F, G) == PolyMap.identity(2, Q)
    assert F(G) == map_compose(F, G)


def test_compose_rejects_constants_in_truncated_outer():
    x1, x2 = xs(2, Q, cap=5)
    F = PolyMap([x1 * x2, x2])
    with pytest.raises(CompositionError):
        map_compose(F, PolyMap([x1 + 1, x2]))


def test_chain_rule(rng):
    for dom in (Domain.truncated(7, 2), Domain.exact(2), Q):
        for n in (1, 2, 3):
            cap = 6
            F = random_map(rng, n, dom, cap, max_deg=4, const_terms=True)
            G = random_map(rng, n, dom, cap, max_deg=4)
            lhs = jacobian(map_compose(F, G))
            rhs = jacobian(F).substitute(G) @ jacobian(G)
            # derivatives lose one degree, so compare at the common truncation
            for i in range(n):
                for j in range(n):
                    assert lhs[i, j].congruent(rhs[i, j])


def test_is_identity_examples():
    assert is_identity(PolyMap.identity(3, Q))
    x1, x2 = xs(2, Q)
    assert not is_identity(PolyMap([x1 + x2 * x2, x2]))
    (x,) = xs(1, Domain.truncated(5, 2))
    assert is_identity(PolyMap([x + 25 * x**3]))
    assert not is_identity(PolyMap([x + 5 * x**3]))


def test_normalize_univariate():
    (x,) = xs(1, Q)
    norm = normalize(PolyMap([3 + 2 * x + x * x]))
    assert norm.normalized == PolyMap([x + Fraction(1, 2) * x * x])
    assert norm.shift == (3,)
    assert norm.linear == ((2,),)


def test_normalize_fixed_point():
    dom = Domain.exact(5)
    x1, x2 = xs(2, dom)
    F = PolyMap([x1 + 5 * x2 * x2, x2 - x1**3])
    norm = normalize(F)
    assert norm.normalized == F
    assert norm.shift == (0, 0)
    assert norm.linear == ((1, 0), (0, 1))


def test_normalize_swap():
    x1, x2 = xs(2, Q)
    norm = normalize(PolyMap([x2, x1]))
    assert is_identity(norm.normalized)
    assert norm.linear == ((0, 1), (1, 0))


def test_normalize_rejects_non_unit_linear_part():
    (x,) = xs(1, Domain.exact(5))
    with pytest.raises(NotAUnitError, match="linear part not invertible"):
        normalize(PolyMap([2 * x + x * x]))
    (y,) = xs(1, Domain.truncated(5, 3))
    with pytest.raises(NotAUnitError):
        normalize(PolyMap([5 * y]))


def test_normalize_denormalize_roundtrip(rng):
    for dom in (Domain.truncated(7, 3), Q):
        for n in (1, 2, 3):
            for seed in range(5):
                pair = generate_tame(seed, n, 2, 3, dom)
                F = PolyMap([f + rng.randint(-5, 5) for f in pair.F])
                norm = normalize(F)
                assert denormalize(norm) == F


def test_det_of_inverse_pair(rng):
    for dom in (Domain.truncated(5, 3), Domain.exact(3), Q):
        for n in (1, 2, 3):
            pair = generate_tame(rng.random(), n, 2, 4, dom)
            D = 8
            F, G = pair.F.truncate(D), pair.G.truncate(D)
            dF = det(jacobian(F))
            dG_F = series_compose(det(jacobian(G)), F.components)
            assert (dF * dG_F).congruent(TateSeries.one(n, dom))


def test_det_of_formal_inverse_pair(rng):
    dom = Domain.truncated(3, 4)
    for _ in range(5):
        n = rng.randint(1, 3)
        X = PolyMap.identity(n, dom, 7)
        H = random_map(rng, n, dom, 7, max_deg=3)
        H = PolyMap([TateSeries(n, {e: c for e, c in h.terms.items() if sum(e) >= 2}, 7, dom) for h in H])
        F = X + H
        G = formal_inverse(F, 7)
        prod = det(jacobian(F)) * series_compose(det(jacobian(G)), F.components)
        assert prod.congruent(TateSeries.one(n, dom))
