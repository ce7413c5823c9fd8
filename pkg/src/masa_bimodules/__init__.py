"""Finite-dimensional support calculus for bimodules over the diagonal masa."""

from .blocks import (
    ClassificationVerdict,
    IdealMask,
    cstar_support,
    envelope_report,
    module_iso_decide,
    module_iso_unitary,
    subset_module_invariants,
    trivial_intersection,
)
from .groups import (
    CosetPartition,
    FiniteGroup,
    GroupError,
    Subgroup,
    build_group,
    generate_subgroup,
    index,
    left_cosets,
    small_group_isomorphic,
)
from .reflexivity import (
    DecompositionCertificate,
    PhiMap,
    bimodule_support,
    csl_summands,
    delta_decomposition,
    full_decomposition,
    map_phi,
    ref_hull,
    x_space,
)
from .support import (
    BlockStructure,
    ModuleReport,
    NotUnitalError,
    RelationError,
    SupportRelation,
    adjoint_support,
    compose,
    e_star,
    module_properties,
    star_closure,
)

__version__ = "0.1.0"
