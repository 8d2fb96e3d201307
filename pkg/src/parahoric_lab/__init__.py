"""Exact computations with parahoric loop groups, residues and local monodromy.

Exact arithmetic runs over Q(i) with ``gmpy2`` rationals; matrix Laurent
series carry an explicit truncation order.  Floating point appears only in
phases, monodromy matrices and the ODE integrator.
"""

from types import ModuleType as _Module

from .errors import DomainError, NumericError, ParahoricError, SchemaError
from .exact import ExactMatrix, GaussianRational, gaussian, rational
from .laurent import LaurentMatrix, laurent_inverse, laurent_multiply, log_derivative
from .monodromy import NumericConnection, compare_conjugacy, integrate_monodromy
from .nahc import (
    BettiLocalDatum,
    DeRhamLocalDatum,
    DolbeaultLocalDatum,
    derham_to_betti_constant,
    dolbeault_to_betti,
    dolbeault_to_derham,
    table_row,
)
from .normal_forms import NormalForm, is_constant_equivalent, normalize, shearing_cocharacters
from .parahoric import (
    ParahoricContext,
    adjoint_action,
    algebra_membership,
    gauge_action,
    group_membership,
    iwahori_factorize,
    tameness_check,
)
from .properties import property_run
from .residue import (
    jordan_decompose,
    nilpotent_exp,
    phase_exp,
    sl2_completion,
    torus_scaling,
)
from .roots import (
    GL,
    SL,
    CharacterDescriptor,
    GroupDescriptor,
    ParabolicDescriptor,
    Root,
    Weight,
    ad_eigendecomposition,
    ceiling_level,
    is_antidominant,
    parabolic_from_weight,
    root_pairing,
)
from .stability import (
    DegreeLedger,
    ReductionDatum,
    is_admissible_reduction,
    is_degree_zero,
    mu_invariant,
    parahoric_degree,
    stability_verdict,
    weight_character_pairing,
)

__version__ = "0.1.0"

__all__ = [n for n, v in list(globals().items()) if not n.startswith("_") and not isinstance(v, _Module)]
