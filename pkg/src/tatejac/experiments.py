"""Experiment drivers producing JSON-serializable reports."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from .adic import TOP, Domain, Kind, is_prime
from .errors import BudgetError, NotAUnitError, PreconditionError
from .inversion import decay_profile, formal_inverse
from .io import dump_json, map_to_json, series_to_json
from .maps import PolyMap, det, jacobian, normalize
from .oracles import bijectivity_oracle, lagrange_oracle
from .series import TateSeries, series_eval, tate_is_unit


@dataclass
class ExperimentReport:
    kind: str
    domain: dict
    inputs: dict
    outcome: dict = field(default_factory=dict)
    #: claim -> oracle or congruence that established it
    oracles: dict = field(default_factory=dict)
    caveats: list = field(default_factory=list)

    def to_json(self) -> str:
        return dump_json(asdict(self))


def _fmt_val(v):
    return "TOP" if v == TOP else v


def unimodular_witness(
    F: PolyMap,
    D: int,
    point=None,
    window: int | None = None,
) -> ExperimentReport:
    """Evaluate the inverse of F at the all-ones vector and check F(b) = target.

    F is translated and normalized first, so with shift s = F(0) and linear
    part L the inverse G' of the normalized map is evaluated at
    L^{-1}(target - s).  Works over ``truncated_adic`` with prime modulus.
    """
    dom = F.domain
    if dom.kind is not Kind.TRUNCATED:
        raise PreconditionError("the witness runs over Z/p^N")
    p = dom.m
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if not F.is_polynomial:
        raise PreconditionError("the witness needs a fully stored polynomial map")
    n = F.n
    jdet = det(jacobian(F))
    check = tate_is_unit(jdet)
    if not check:
        raise NotAUnitError(f"det JF is not a unit: {check.reason}", check)
    target = tuple(dom.coerce(1) for _ in range(n)) if point is None else tuple(dom.coerce(a) for a in point)

    norm = normalize(F)
    shifted = [dom.sub(t, s) for t, s in zip(target, norm.shift)]
    inner_point = tuple(
        dom.norm(sum(norm.linear_inverse[i][j] * shifted[j] for j in range(n))) for i in range(n)
    )
    G = formal_inverse(norm.normalized, D)
    evals = [series_eval(g, inner_point, window) for g in G.components]
    b = tuple(e.value.value for e in evals)
    tail = min((e.tail_precision for e in evals), default=TOP)
    Fb = tuple(series_eval(f, b).value.value for f in F.components)
    hits = Fb == target
    unimodular = any(dom.is_unit(v) for v in Fb)
    achieved = dom.N if tail == TOP else min(tail, dom.N)

    report = ExperimentReport(
        kind="unimodular_witness",
        domain=dom.to_json(),
        inputs={"map": map_to_json(F), "D": D, "target": list(target)},
        outcome={
            "det_JF": series_to_json(jdet),
            "evaluation_point": list(inner_point),
            "b": list(b),
            "F_of_b": list(Fb),
            "F_of_b_equals_target": hits,
            "unimodular": unimodular,
            "tail_precision": _fmt_val(tail),
            "achieved_precision": achieved,
        },
        oracles={
            "F_of_b": f"direct evaluation of the stored polynomial F at b modulo {p}^{dom.N}",
            "det_JF": "cofactor-expansion determinant of the Jacobian",
            "b": "evaluation of the degree-truncated formal inverse of the normalized map",
        },
    )
    if tail != TOP:
        report.caveats.append(
            f"inverse has coefficients of valuation {tail} in its top degrees; "
            f"b is trustworthy only modulo {p}^{achieved} (heuristic)"
        )
    if jdet.degree() > 0:
        report.caveats.append(
            f"det JF = {jdet} is a Tate unit but not a constant; "
            "the map lies outside the constant-determinant setting"
        )
    if not hits and tail == TOP:
        report.caveats.append("F(b) misses the target although no tail terms were stored")
    return report


def char_p_map(c: int, n: int) -> PolyMap:
    dom = Domain.exact(c)
    xs = [TateSeries.variable(i, n, dom) for i in range(n)]
    return PolyMap([x - x**c for x in xs])


def char_p_report(c: int, n: int, D: int, enumeration_budget: int | None = None) -> ExperimentReport:
    """Diagnostics for F = (X_i - X_i^c) over (Z, (c))."""
    if c < 2:
        raise PreconditionError("characteristic must be at least 2")
    F = char_p_map(c, n)
    dom = F.domain
    jdet = det(jacobian(F))
    check = tate_is_unit(jdet)
    G = formal_inverse(F, D)
    profile = decay_profile(G)
    zero_degrees = profile.degrees_with_valuation(0)

    oracles = {
        "det_JF": "cofactor expansion of the Jacobian",
        "tate_unit": "unit criterion: constant term in R^x, other coefficients in rad(I)",
        "inverse": "contraction iteration G <- X - H(G)",
    }
    outcome = {
        "det_JF": series_to_json(jdet),
        "tate_unit": bool(check),
        "tate_unit_reason": check.reason,
        "inverse": map_to_json(G),
        "decay_profile": profile.to_json(),
        "valuation_zero_degrees": zero_degrees,
    }
    lag = lagrange_oracle(TateSeries.variable(0, 1, dom) - TateSeries.variable(0, 1, dom) ** c, D)
    agree = True
    for i, g in enumerate(G.components):
        for k in range(D):
            exp = tuple(k if j == i else 0 for j in range(n))
            if g.coefficient(exp) != lag.coefficient((k,)):
                agree = False
        if any(sum(1 for e in exp if e) > 1 or exp[i] == 0 for exp in g.terms):
            agree = False
    outcome["lagrange_agreement"] = agree
    oracles["lagrange_agreement"] = (
        "each component compared with the univariate Lagrange reversion of x - x^c "
        "(F acts coordinatewise)"
    )
    try:
        bij = bijectivity_oracle(F.change_domain(dom.residue_domain()), c, budget=enumeration_budget)
        outcome["bijective_mod_c"] = bij
        oracles["bijective_mod_c"] = f"exhaustive enumeration of (Z/{c})^{n}"
    except BudgetError as exc:
        outcome["bijective_mod_c"] = None
        oracles["bijective_mod_c"] = f"skipped: {exc}"

    high = [d for d in zero_degrees if d >= 2]
    if high:
        conclusion = (
            f"coefficients of valuation 0 persist up to degree {max(high)}: no I-adic decay "
            f"through degree {D} - consistent with the inverse lying outside the Tate algebra"
        )
    else:
        conclusion = f"no valuation-0 coefficients beyond degree 1 through degree {D}"
    outcome["conclusion"] = conclusion
    return ExperimentReport(
        kind="char_p",
        domain=dom.to_json(),
        inputs={"c": c, "n": n, "D": D, "map": map_to_json(F)},
        outcome=outcome,
        oracles=oracles,
        caveats=[
            "finite truncation: membership in the Tate algebra cannot be certified from degree < D data"
        ],
    )
