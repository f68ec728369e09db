"""Exact symbolic classification and verification of self-similar structure
on zero-dimensional compact spaces (ordinal intervals and the Cantor space)."""

from .config import Caps, DEFAULT_CAPS
from .errors import (
    CapExceededError,
    DomainError,
    NotSuccessorError,
    OrdinalParseError,
    UltrafractalError,
    UnaddressablePathError,
)
from .ifs import (
    GluedIfs,
    IfsSystem,
    PointSet,
    banach_orbit,
    build_ifs_general,
    build_ifs_unital,
    fixed_point,
    hausdorff_distance,
    hutchinson_step,
    verify_partition,
    verify_system_lipschitz,
    word_diameters,
)
from .morphisms import (
    HeightMorphism,
    build_shift_endomorphism,
    build_surjective_morphism,
    compose,
    lipschitz_check,
    table_morphism,
    verify_morphism_axioms,
)
from .ordinals import (
    INFINITY,
    MINUS_ONE,
    OMEGA,
    ONE,
    ZERO,
    ExtHeight,
    Kind,
    classify_kind,
    compare,
    format_ordinal,
    fundamental_sequence,
    height_minus_one,
    nat,
    omega_power,
    ord_add,
    parse_ordinal,
)
from .spaces import (
    CANTOR,
    EMPTY,
    ScatteredHeight,
    Space,
    Verdict,
    classify_fractal,
    derived_set,
    interval,
    is_unital,
    parse_space,
    scattered_height,
    unital_decomposition,
)
from .trees import (
    Branch,
    CENTRAL_BRANCH,
    HeightTree,
    NormedHeightTree,
    TableNorm,
    TreeView,
    canonical_tree,
    canonical_ultrametric,
    custom_tree,
    meet,
    tree_with_exceptions,
    verify_height_tree_axioms,
    verify_norm_axioms,
    verify_ultrametric_axioms,
)

__version__ = "0.1.0"
