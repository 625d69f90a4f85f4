import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_normalized
from tatejac.adic import TOP, Domain
from tatejac.errors import NotAUnitError, PreconditionError
from tatejac.experiments import char_p_map
from tatejac.inversion import (
    adic_lift_inverse,
    decay_profile,
    formal_inverse,
    invert_map,
    map_valuation,
    transfer_check,
)
from tatejac.maps import PolyMap, is_identity, map_compose
from tatejac.oracles import bijectivity_oracle, catalan, generate_tame, lagrange_oracle
from tatejac.series import TateSeries

Q = Domain.rational()


def univariate(coeffs, dom, cap=None):
    return TateSeries(1, {(k,): c for k, c in coeffs.items()}, cap, dom)


def x_of(dom, cap=None):
    return TateSeries.variable(0, 1, dom, cap)


def identity_mod(F, D):
    return PolyMap.identity(F.n, F.domain, D)


# -- formal inverse ------------------------------------------------------------


def test_catalan_reversion():
    x = x_of(Q)
    G = formal_inverse(PolyMap([x - x * x]), 7)
    assert G[0] == univariate({k: catalan(k - 1) for k in range(1, 7)}, Q, 7)
    assert [catalan(k) for k in range(6)] == [1, 1, 2, 5, 14, 42]


def test_identity_is_fixed():
    for dom in (Domain.truncated(5, 2), Domain.exact(2), Q):
        G = formal_inverse(PolyMap.identity(3, dom), 6)
        assert G == PolyMap.identity(3, dom, 6)


def test_elementary_map_inverse_is_stable():
    x1, x2 = (TateSeries.variable(i, 2, Q) for i in range(2))
    F = PolyMap([x1 + x2 * x2, x2])
    for D in (3, 5, 9):
        assert formal_inverse(F, D) == PolyMap([x1 - x2 * x2, x2]).truncate(D)


def test_requires_normalized_input():
    x = x_of(Q)
    with pytest.raises(PreconditionError, match="normalize"):
        formal_inverse(PolyMap([1 + x]), 5)
    with pytest.raises(PreconditionError, match="normalize"):
        formal_inverse(PolyMap([2 * x + x * x]), 5)


def test_cap_below_degree_rejected():
    x = x_of(Q, cap=4)
    with pytest.raises(PreconditionError):
        formal_inverse(PolyMap([x + x * x]), 6)


def test_extra_steps_change_nothing(rng):
    for dom in (Domain.truncated(6, 3), Domain.exact(3), Q):
        for _ in range(6):
            n = rng.randint(1, 3)
            F = random_normalized(rng, n, dom)
            assert formal_inverse(F, 8) == formal_inverse(F, 8, extra_steps=3)


def test_two_sided_inverse(rng):
    for dom in (Domain.truncated(5, 3), Domain.exact(2), Q):
        for _ in range(8):
            n = rng.randint(1, 3)
            D = rng.randint(3, 9)
            F = random_normalized(rng, n, dom).truncate(D)
            G = formal_inverse(F, D)
            assert map_compose(F, G) == identity_mod(F, D)
            assert map_compose(G, F) == identity_mod(F, D)


def test_invert_map_with_linear_part():
    x1, x2 = (TateSeries.variable(i, 2, Q) for i in range(2))
    F = PolyMap([2 * x2 + x1 * x1, 3 * x1])
    G = invert_map(F, 7)
    assert map_compose(F, G) == PolyMap.identity(2, Q, 7)
    with pytest.raises(PreconditionError):
        invert_map(PolyMap([x1 + 1, x2]), 4)


def test_truncated_equals_reduced_exact(rng):
    for m, N in ((2, 3), (5, 2), (12, 2), (30, 1)):
        exact, trunc = Domain.exact(m), Domain.truncated(m, N)
        for _ in range(4):
            n = rng.randint(1, 3)
            F = random_normalized(rng, n, exact)
            Gz = formal_inverse(F, 8)
            Gt = formal_inverse(F.change_domain(trunc), 8)
            assert Gz.change_domain(trunc) == Gt


def test_rational_inverse_of_integer_map_is_integral(rng):
    exact = Domain.exact(7)
    for _ in range(10):
        n = rng.randint(1, 3)
        F = random_normalized(rng, n, exact)
        Gq = formal_inverse(F.change_domain(Q), 8)
        assert all(c.denominator == 1 for g in Gq for c in g.terms.values())
        assert Gq.change_domain(exact) == formal_inverse(F, 8)


# -- adic lifting ----------------------------------------------------------------


def test_lift_x_plus_5x2():
    dom = Domain.truncated(5, 4)
    x = x_of(dom)
    F = PolyMap([x + 5 * x * x])
    res = adic_lift_inverse(F, PolyMap([x]), degree=16)
    expected = {k: catalan(k - 1) * (-5) ** (k - 1) for k in range(1, 16)}
    assert res.inverse[0] == univariate(expected, dom, 16)
    assert res.inverse[0] == univariate({1: 1, 2: 620, 3: 50}, dom, 16)
    assert [s.error_valuation for s in res.ledger] == [1, 2, TOP]
    assert res.steps == 2


def test_lift_matches_lagrange_over_exact():
    dom = Domain.exact(5)
    x = x_of(dom)
    lag = lagrange_oracle(x + 5 * x * x, 16)
    res = adic_lift_inverse(PolyMap([x + 5 * x * x]), PolyMap([x]), precision=6, degree=16)
    M = 5**6
    for k in range(16):
        assert (res.inverse[0].coefficient((k,)) - lag.coefficient((k,))) % M == 0


def test_lift_exact_start_needs_no_steps():
    dom = Domain.truncated(3, 5)
    pair = generate_tame(7, 2, 2, 3, dom)
    res = adic_lift_inverse(pair.F, pair.G, degree=10)
    assert res.steps == 0
    assert res.inverse == pair.G.truncate(10)
    ident = PolyMap.identity(2, dom)
    assert adic_lift_inverse(ident, ident, degree=5).inverse == PolyMap.identity(2, dom, 5)


def test_lift_rejects_wrong_start():
    dom = Domain.truncated(5, 4)
    x = x_of(dom)
    with pytest.raises(PreconditionError, match="not an inverse modulo I"):
        adic_lift_inverse(PolyMap([x + 5 * x * x]), PolyMap([x + x * x]), degree=8)


def test_lift_rejects_non_unit_jacobian():
    dom = Domain.truncated(5, 4)
    x = x_of(dom)
    with pytest.raises(NotAUnitError) as info:
        adic_lift_inverse(PolyMap([x + x * x]), PolyMap([x]), degree=8)
    assert info.value.certificate.monomial == (1,)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_newton_contract_on_perturbed_tame_maps(p):
    from tatejac.oracles import perturb

    dom = Domain.truncated(p, 6)
    for seed in range(4):
        n = 1 + seed % 3
        pair = generate_tame(100 * p + seed, n, 2, 2, dom)
        F = perturb(pair.F, seed, p, 3)
        res = adic_lift_inverse(F, pair.G, degree=8)
        for step in res.ledger:
            assert step.error_valuation >= min(2**step.step, 6)
        assert map_valuation(map_compose(res.inverse, F.truncate(8)) - PolyMap.identity(n, dom, 8)) == TOP


# -- transfer check ----------------------------------------------------------------


def test_transfer_lifts_x_plus_5x2():
    dom = Domain.exact(5)
    x = x_of(dom)
    F = PolyMap([x + 5 * x * x])
    rep = transfer_check(F, degree=12, precision=5)
    assert rep.invertible_mod_I and rep.obstruction == "none"
    E = map_compose(rep.lifted, F.truncate(12)) - PolyMap.identity(1, dom, 12)
    assert map_valuation(E) >= 5


def test_transfer_detects_char_2_obstruction():
    F = char_p_map(2, 1)
    rep = transfer_check(F, degree=16)
    assert not rep.invertible_mod_I
    assert rep.lifted is None
    assert "bijection" in rep.obstruction


def test_transfer_degree_obstruction_without_enumeration():
    F = char_p_map(3, 1)
    rep = transfer_check(F, degree=16, enumeration_budget=1)
    assert not rep.invertible_mod_I and not rep.heuristic
    assert "degrees multiply" in rep.obstruction


def test_transfer_identity():
    dom = Domain.truncated(3, 4)
    rep = transfer_check(PolyMap.identity(2, dom), degree=6)
    assert rep.invertible_mod_I
    assert is_identity(rep.lifted)


def test_transfer_tame_with_perturbation():
    from tatejac.oracles import perturb

    dom = Domain.truncated(3, 4)
    pair = generate_tame(11, 2, 2, 3, dom)
    F = perturb(pair.F, 1, 3, 3)
    rep = transfer_check(F, degree=10)
    assert rep.invertible_mod_I
    E = map_compose(rep.lifted, F.truncate(10)) - PolyMap.identity(2, dom, 10)
    assert map_valuation(E) == TOP


# -- decay profile ----------------------------------------------------------------


def test_profile_x_plus_5x2():
    dom = Domain.exact(5)
    x = x_of(dom)
    G = formal_inverse(PolyMap([x + 5 * x * x]), 20)
    prof = decay_profile(G)
    assert len(prof.entries) == 20
    assert prof.entries[0] == TOP
    for k in range(1, 20):
        assert prof.entries[k] >= k - 1


def test_profile_identity():
    prof = decay_profile(PolyMap.identity(2, Domain.exact(3), 5))
    assert prof.entries == [TOP, 0, TOP, TOP, TOP]
    assert prof.running_max == [TOP, 0, 0, 0, 0]


def test_profile_catalan_parity():
    F = char_p_map(2, 1)
    prof = decay_profile(formal_inverse(F, 64))
    assert prof.degrees_with_valuation(0) == [1, 2, 4, 8, 16, 32]
    # Kummer: C_{k-1} is odd iff k is a power of two
    odd = [k for k in range(1, 64) if catalan(k - 1) % 2]
    assert odd == [1, 2, 4, 8, 16, 32]
    assert prof.tail_min[1] == 0


def test_profile_summaries_are_monotone(rng):
    dom = Domain.exact(3)
    F = random_normalized(rng, 2, dom)
    prof = decay_profile(formal_inverse(F, 10))
    finite = [v for v in prof.running_max if v != TOP]
    assert finite == sorted(finite)
    assert all(a <= b for a, b in zip(prof.tail_min, prof.tail_min[1:]))


# -- positive characteristic -------------------------------------------------------


@pytest.mark.parametrize("c", [2, 3, 5])
def test_char_p_map_has_no_inverse(c):
    from tatejac.maps import det, jacobian
    from tatejac.series import tate_is_unit

    F = char_p_map(c, 1)
    assert tate_is_unit(det(jacobian(F)))
    # not a bijection of Z/c, so no polynomial G with F o G = X mod c
    residue = F.change_domain(Domain.truncated(c, 1))
    assert not bijectivity_oracle(residue, c)
    # the formal inverse mod c is x + x^c + x^(c^2) + ..., never a polynomial
    G = formal_inverse(residue, 30)
    powers = [c**k for k in range(5) if c**k < 30]
    assert sorted(e[0] for e in G[0].terms) == powers


@pytest.mark.parametrize("c", [2, 3])
def test_char_p_exhaustive_search_finds_no_inverse(c):
    import itertools

    dom = Domain.truncated(c, 1)
    x = x_of(dom)
    F = PolyMap([x - x**c])
    found = []
    for coeffs in itertools.product(range(c), repeat=4):
        G = PolyMap([univariate(dict(zip(range(1, 5), coeffs)), dom)])
        if is_identity(map_compose(F, G)):
            found.append(coeffs)
    assert found == []


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.integers(1, 3), st.integers(0, 10**6))
def test_formal_inverse_over_truncated_is_two_sided(m, N, seed):
    import random

    rng = random.Random(seed)
    dom = Domain.truncated(m, N)
    F = random_normalized(rng, rng.randint(1, 2), dom)
    G = formal_inverse(F, 6)
    assert map_compose(F.truncate(6), G) == identity_mod(F, 6)
    assert map_compose(G, F.truncate(6)) == identity_mod(F, 6)
