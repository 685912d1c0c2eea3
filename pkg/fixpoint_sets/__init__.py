"""
Fixed point sets for the conjugation action of Sym(qn) on its class of
fixed-point-free products of q-cycles

The package works at desk scale: permutation groups are enumerated,
modules are dense matrices over GF(p), and every size-dependent step is
guarded by a cap from config.Caps.
"""

from .config import DEFAULT_CAPS, Caps, caps_from_config, load_config
from .errors import (ActionNotClosed, BudgetExhausted, CapExceeded, DecompositionInconclusive,
                     FpsError, InvalidSet, NotPGroup, ParseError, TheoremViolation)
from .perm_core import IDENTITY, Permutation, parse_permutation
from .group_engine import GroupHandle, symmetric_group, sylow_sym
from .modlin import ModuleRep, decompose, np_count, perm_module
from .setalg import (PermSet, SqSet, canonical_form, delta, equivalent, factor_multiplicities,
                     irreducible_factors, parse_set, star, star_power)
from .fps_engine import (FpsReport, OracleResult, broue_oracle, check_coprime_structure, check_reduction, closure,
                         is_closed, is_exact, is_fixed_point_set, kappa, kappa_trajectory, orbit_factorization)
from .classify import ClassificationReport, all_fps, verify_against_oracle

__version__ = "0.1.0"

__all__ = [
    "Caps", "DEFAULT_CAPS", "load_config", "caps_from_config",
    "FpsError", "ParseError", "InvalidSet", "CapExceeded", "ActionNotClosed", "NotPGroup",
    "DecompositionInconclusive", "TheoremViolation", "BudgetExhausted",
    "Permutation", "IDENTITY", "parse_permutation",
    "GroupHandle", "symmetric_group", "sylow_sym",
    "ModuleRep", "perm_module", "decompose", "np_count",
    "PermSet", "SqSet", "parse_set", "star", "star_power", "delta", "canonical_form",
    "equivalent", "irreducible_factors", "factor_multiplicities",
    "FpsReport", "OracleResult", "closure", "is_closed", "is_exact", "is_fixed_point_set",
    "kappa", "kappa_trajectory", "orbit_factorization", "broue_oracle", "check_reduction",
    "check_coprime_structure",
    "ClassificationReport", "all_fps", "verify_against_oracle",
]
