import itertools
import random

import pytest

from tatejac.adic import Domain
from tatejac.series import TateSeries

ACCEPTANCE_LINES = []


def random_series(rng, n, domain, max_deg=3, cap=None, terms=4, const=True, coef=(-30, 30)):
    exps = [e for e in itertools.product(range(max_deg + 1), repeat=n) if sum(e) <= max_deg]
    if not const:
        exps = [e for e in exps if any(e)]
    picked = rng.sample(exps, min(terms, len(exps)))
    return TateSeries(n, {e: rng.randint(*coef) for e in picked}, cap, domain)


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture(params=[Domain.truncated(5, 3), Domain.exact(3), Domain.rational()], ids=str)
def any_domain(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_normalized(rng, n, domain, cap=None, max_deg=3, terms=3, coef=(-9, 9)):
    """Random X + H with H of order >= 2, as a PolyMap."""
    from tatejac.maps import PolyMap

    exps = [e for e in itertools.product(range(max_deg + 1), repeat=n) if 2 <= sum(e) <= max_deg]
    comps = []
    for i in range(n):
        picked = rng.sample(exps, min(terms, len(exps)))
        h = {e: rng.randint(*coef) for e in picked}
        comps.append(TateSeries.variable(i, n, domain, cap) + TateSeries(n, h, cap, domain))
    return PolyMap(comps)
