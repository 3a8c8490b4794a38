"""Exact symbolic verification of mod-l cohomology computations.

The package verifies, in exact arithmetic and for every prime it is pointed
at: unitary generator-matrix identities over cyclotomic integers, Milnor
primitive expansions and modular (Dickson-Mui) invariant identities,
degreewise invariant subspaces under finite matrix-group actions, and
low-degree Leray-Serre spectral-sequence pages.
"""

from .ffla import FieldMatrix, FieldScalar, is_prime, nullspace, rref, subspace_intersection
from .galg import (
    AlgebraContext,
    AlgebraMap,
    Element,
    GeneratorSpec,
    TruncationOverflowError,
    elementary_abelian_context,
    linear_substitution,
    multiply,
    multiply_truncating,
)
from .cyclo import (
    CycInt,
    CycMatrix,
    GeneratorSet,
    lemma22_holds,
    root_power_sum,
    triangular,
    verify_g1_relations,
    verify_l2_generators,
    verify_su_generators,
    verify_weyl_conjugation,
)
from .milnor import (
    Derivation,
    dickson_mui_check,
    milnor_q,
    verify_q_expansion_odd,
    verify_q_expansion_two,
)
from .invariants import (
    ActionMatrix,
    WeylPresentation,
    induced_action,
    invariant_subspace,
    weyl_generators,
)
from .specseq import (
    DifferentialSpec,
    Scenario,
    SSPage,
    initial_page,
    run_scenario,
    scenario_bg1,
    scenario_bg1_two,
    scenario_bpu,
    turn_page,
)
from .report import CheckReport

__version__ = "0.1.0"
