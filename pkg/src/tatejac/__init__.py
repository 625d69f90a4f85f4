"""Exact computation in Tate algebras over ideal-adic rings.

Inversion of polynomial and Tate maps with unit Jacobian determinant,
I-adic lifting of inverses, and the accompanying experiment drivers.
"""

from .adic import TOP, AdicElement, Domain, Kind, ideal_valuation, in_radical, invert_unit, is_unit, ring_arith
from .errors import (
    BudgetError,
    CompositionError,
    DomainMismatchError,
    NotAUnitError,
    PreconditionError,
    TateError,
)
from .experiments import ExperimentReport, char_p_report, unimodular_witness
from .inversion import (
    DecayProfile,
    LiftResult,
    TransferReport,
    adic_lift_inverse,
    decay_profile,
    formal_inverse,
    invert_map,
    transfer_check,
)
from .maps import PolyMap, SeriesMatrix, det, is_identity, jacobian, map_compose, normalize
from .oracles import bijectivity_oracle, generate_tame, lagrange_oracle
from .series import (
    TateSeries,
    series_add,
    series_compose,
    series_derive,
    series_eval,
    series_mul,
    tate_invert_unit,
    tate_is_unit,
)

__version__ = "0.1.0"
