"""Exact power operations on finitely presented Z_p-modules at height 1."""

from .completion import (
    TruncatedSeries,
    stabilization_tower,
    taylor_expand,
    truncated_analytic_cokernel,
)
from .modules import (
    ExactnessError,
    IllDefinedMapError,
    ModuleExpressionError,
    ModuleMap,
    NormalForm,
    PresentedModule,
    PrimeContext,
    direct_sum,
    identity_map,
    is_iso_map,
    map_cokernel,
    nakayama_surjectivity,
    normal_form,
    parse_module,
    quotient_map,
    residue_map,
    scalar_map,
    tensor,
    tensor_maps,
)
from .nilpotency import (
    ResidueMatrix,
    is_nilpotent_mod_p,
    telescope_residue_rank,
    verify_telescope_equivalence,
)
from .power_ops import (
    WeightPiece,
    Tn_via_coequalizer,
    compute_Tn,
    compute_Tn_map,
    stabilization_scan,
    sym_n_and_compare,
    verify_binomial,
)
from .theta import ThetaPolynomial, adams, theta_apply, weight_monomials

__version__ = "0.1.0"
