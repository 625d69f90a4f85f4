"""Formal inversion of maps and I-adic lifting of inverses.

``formal_inverse`` computes the unique inverse in R[[X]]^n of a map of the
form X + (higher order terms).  ``adic_lift_inverse`` turns an inverse
modulo I into one modulo I^N; ``transfer_check`` chains the two starting
from the reduction of a map modulo I.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .adic import TOP, Domain, Kind
from .errors import NotAUnitError, PreconditionError
from .maps import (
    PolyMap,
    det,
    is_identity,
    jacobian,
    map_compose,
    normalize,
)
from .series import TateSeries, compose_many, tate_is_unit

logger = logging.getLogger(__name__)


def _check_normalized(F: PolyMap):
    dom = F.domain
    for i, f in enumerate(F.components):
        if f.constant_term != 0:
            raise PreconditionError(
                f"component {i + 1} has nonzero constant term; run normalize() first"
            )
    L = F.linear_part()
    for i in range(F.n):
        for j in range(F.n):
            if L[i][j] != (dom.one() if i == j else 0):
                raise PreconditionError("linear part is not the identity; run normalize() first")


def formal_inverse(F: PolyMap, D: int, extra_steps: int = 0) -> PolyMap:
    """Inverse of ``F = X + H`` modulo total degree ``D``.

    Iterates G <- X - H(G) from G = X.  Step k fixes the coefficients of
    degree k + 2, so each step runs at cap k + 3 and the last one at ``D``.
    ``extra_steps`` appends full-cap iterations; they must not change the
    result.
    """
    if D < 1:
        raise ValueError("degree cap must be positive")
    _check_normalized(F)
    if F.cap is not None and F.cap < D:
        raise PreconditionError(f"map is known only below degree {F.cap}; cannot invert to degree {D}")
    n, dom = F.n, F.domain
    X = PolyMap.identity(n, dom, D)
    H = (F.truncate(D) - X).components
    G = PolyMap.identity(n, dom, min(2, D))
    cap = min(2, D)
    steps = 0
    while cap < D or steps < extra_steps:
        if cap < D:
            cap += 1
        else:
            steps += 1
        Hc = [h.truncate(cap) for h in H]
        # H has order >= 2, so terms of G at degree >= cap - 1 cannot reach
        # degree < cap in H(G); re-capping G at ``cap`` is therefore sound.
        Gc = [TateSeries(g.n, g.terms, cap, dom, _trusted=True) for g in G.components]
        HG = compose_many(Hc, Gc)
        G = PolyMap([TateSeries.variable(i, n, dom, cap) - hg for i, hg in enumerate(HG)])
    return G if G.cap == D else G.truncate(D)


def invert_map(F: PolyMap, D: int) -> PolyMap:
    """Formal inverse of any map with F(0) = 0 and invertible linear part."""
    if any(c != 0 for c in F.constant_terms()):
        raise PreconditionError("map must satisfy F(0) = 0; translate first")
    norm = normalize(F)
    Gp = formal_inverse(norm.normalized, D)
    if is_identity_matrix(norm.linear, F.domain):
        return Gp
    return map_compose(Gp, PolyMap.linear(norm.linear_inverse, F.domain, D))


def is_identity_matrix(A, domain: Domain) -> bool:
    n = len(A)
    return all(A[i][j] == (domain.one() if i == j else 0) for i in range(n) for j in range(n))


def map_valuation(F: PolyMap):
    """Smallest coefficient valuation over all components (TOP if F = 0)."""
    return min((f.min_valuation() for f in F.components), default=TOP)


@dataclass
class LiftStep:
    step: int
    #: smallest valuation among the coefficients of G_k o F - X
    error_valuation: float | int
    required: int


@dataclass
class LiftResult:
    inverse: PolyMap
    ledger: list[LiftStep] = field(default_factory=list)
    precision: int = 0
    degree: int = 0

    @property
    def steps(self) -> int:
        """Number of corrective updates applied."""
        return max(len(self.ledger) - 1, 0)


def adic_lift_inverse(
    F: PolyMap,
    G0: PolyMap,
    precision: int | None = None,
    degree: int | None = None,
    max_steps: int = 64,
) -> LiftResult:
    """Lift an inverse of F modulo I to one modulo (I^precision, degree).

    Runs G <- G - E(G) with E = G o F - X.  If E has valuation v then the
    next error has valuation at least 2v; this is asserted at every step.
    """
    dom = F.domain
    if not dom.is_adic:
        raise PreconditionError("I-adic lifting needs an adic domain")
    if G0.domain != dom or G0.n != F.n:
        raise PreconditionError("F and G0 must share domain and dimension")
    if precision is None:
        if dom.kind is not Kind.TRUNCATED:
            raise PreconditionError("target precision is required over exact domains")
        precision = dom.N
    if dom.kind is Kind.TRUNCATED and precision > dom.N:
        raise PreconditionError(f"target precision {precision} exceeds domain precision {dom.N}")
    if degree is None:
        degree = F.cap if F.cap is not None else G0.cap
        if degree is None:
            raise PreconditionError("both maps are polynomials; pass a degree cap")
    if any(c != 0 for c in F.constant_terms()) or any(c != 0 for c in G0.constant_terms()):
        raise PreconditionError("lifting requires F(0) = 0 and G0(0) = 0")
    F = F.truncate(degree)
    G = G0.truncate(degree)
    jdet = det(jacobian(F))
    check = tate_is_unit(jdet)
    if not check:
        raise NotAUnitError(f"Jacobian determinant is not a Tate unit: {check.reason}", check)

    X = PolyMap.identity(F.n, dom, degree)
    ledger = []
    for k in range(max_steps + 1):
        E = map_compose(G, F) - X
        v = map_valuation(E)
        required = min(2**k, precision)
        ledger.append(LiftStep(k, v, required))
        logger.debug("lift step %d: error valuation %s", k, v)
        if k == 0 and v < 1:
            raise PreconditionError("G0 is not an inverse modulo I")
        if v < required:
            raise AssertionError(
                f"precision did not double: step {k} has valuation {v} < {required}"
            )
        if v >= precision:
            break
        G = G - PolyMap(compose_many(E.components, G.components))
    else:
        raise AssertionError("lifting did not reach the target precision")
    return LiftResult(G, ledger, precision, degree)


@dataclass
class TransferReport:
    invertible_mod_I: bool
    lifted: PolyMap | None
    obstruction: str
    #: inverse of the reduction modulo I, when one was found
    residue_inverse: PolyMap | None = None
    #: True when the verdict rests on a stabilization heuristic
    heuristic: bool = False
    evidence: list[str] = field(default_factory=list)


def reduce_mod_I(F: PolyMap) -> PolyMap:
    return F.change_domain(F.domain.residue_domain())


def _lift_residue(G: PolyMap, dom: Domain, cap) -> PolyMap:
    comps = [TateSeries(g.n, dict(g.terms), cap, dom) for g in G.components]
    return PolyMap(comps)


def transfer_check(
    F: PolyMap,
    degree: int = 16,
    precision: int | None = None,
    window: int | None = None,
    enumeration_budget: int | None = None,
) -> TransferReport:
    """Decide (heuristically) whether F mod I has a polynomial inverse, then lift it.

    A polynomial inverse of the reduction is detected when the truncated
    formal inverse modulo I has no terms in the top ``window`` degrees
    (default ``degree // 2``).  A failed exhaustive bijectivity test on
    (Z/m)^n certifies that no inverse exists.
    """
    from .oracles import bijectivity_oracle  # oracles build on this module

    dom = F.domain
    if not dom.is_adic:
        raise PreconditionError("transfer_check needs an adic domain")
    if any(c != 0 for c in F.constant_terms()):
        raise PreconditionError("transfer_check requires F(0) = 0")
    window = max(1, degree // 2) if window is None else window
    Fbar = reduce_mod_I(F)
    rdom = Fbar.domain
    evidence = []

    if F.is_polynomial:
        try:
            bij = bijectivity_oracle(Fbar, dom.m, budget=enumeration_budget)
        except Exception as exc:  # budget or evaluation limits: skip the oracle
            evidence.append(f"bijectivity oracle skipped: {exc}")
        else:
            evidence.append(f"bijectivity of F mod I on (Z/{dom.m})^{F.n}: {bij}")
            if not bij:
                return TransferReport(
                    False,
                    None,
                    f"F mod I is not a bijection of (Z/{dom.m})^{F.n}, so it has no polynomial inverse",
                    evidence=evidence,
                )

    try:
        norm = normalize(Fbar)
    except NotAUnitError:
        return TransferReport(
            False, None, "linear part of F mod I is not invertible (det JF(0) not a unit mod I)",
            evidence=evidence,
        )
    Gp = formal_inverse(norm.normalized, degree)
    top = [
        e for g in Gp.components for e in g.terms if sum(e) >= degree - window
    ]
    if top:
        reason = (
            f"formal inverse of F mod I still has nonzero terms in degrees "
            f"[{degree - window}, {degree}); no polynomial inverse of degree < {degree - window} found"
        )
        heuristic = True
        if Fbar.n == 1 and Fbar.is_polynomial and _is_field(dom.m) and Fbar[0].degree() >= 2:
            reason += (
                f"; over the field Z/{dom.m} degrees multiply under composition, "
                f"so a map of degree {Fbar[0].degree()} >= 2 has no polynomial inverse"
            )
            heuristic = False
        return TransferReport(False, None, reason, heuristic=heuristic, evidence=evidence)

    evidence.append(
        f"formal inverse mod I stabilized: no terms in degrees [{degree - window}, {degree})"
    )
    Gbar = Gp.truncate(max(degree - window, 1))
    Gbar = PolyMap([TateSeries(g.n, dict(g.terms), None, rdom) for g in Gbar.components])
    if not is_identity_matrix(norm.linear, rdom):
        Gbar = map_compose(Gbar, PolyMap.linear(norm.linear_inverse, rdom))
    if not is_identity(map_compose(Gbar, Fbar)):
        return TransferReport(
            False, None, "stabilized candidate does not invert F mod I", heuristic=True,
            evidence=evidence,
        )
    G0 = _lift_residue(Gbar, dom, None)
    lift = adic_lift_inverse(F, G0, precision=precision, degree=degree)
    return TransferReport(
        True,
        lift.inverse,
        "none",
        residue_inverse=Gbar,
        heuristic=True,
        evidence=evidence + [f"lift reached valuation {lift.ledger[-1].error_valuation} in {lift.steps} steps"],
    )


def _is_field(m: int) -> bool:
    from .adic import is_prime

    return is_prime(m)


@dataclass
class DecayProfile:
    #: min valuation of the stored coefficients of each total degree
    entries: list
    #: running maximum of the finite entries so far (TOP before the first one)
    running_max: list
    #: min of ``entries`` over degrees >= d
    tail_min: list

    def degrees_with_valuation(self, v) -> list[int]:
        return [d for d, e in enumerate(self.entries) if e == v]

    def to_json(self):
        enc = lambda v: "TOP" if v == TOP else v  # noqa: E731
        return {
            "entries": [enc(v) for v in self.entries],
            "running_max": [enc(v) for v in self.running_max],
            "tail_min": [enc(v) for v in self.tail_min],
        }


def decay_profile(G: PolyMap) -> DecayProfile:
    dom = G.domain
    if not dom.is_adic:
        raise PreconditionError("decay profile needs an adic domain")
    D = G.cap if G.cap is not None else max(g.degree() for g in G.components) + 1
    D = max(D, 1)
    entries = [TOP] * D
    for g in G.components:
        for exp, c in g.terms.items():
            d = sum(exp)
            entries[d] = min(entries[d], dom.valuation(c))
    running, cur = [], None
    for v in entries:
        if v != TOP:
            cur = v if cur is None else max(cur, v)
        running.append(TOP if cur is None else cur)
    tail, cur = [TOP] * D, TOP
    for d in range(D - 1, -1, -1):
        cur = min(cur, entries[d])
        tail[d] = cur
    return DecayProfile(entries, running, tail)
