"""Exact arithmetic for Drinfeld modules over F_q(T): heights, canonical
heights with certified error, supersingular censuses, the constructive
small-solution machinery, and the explicit constants of the height lower
bounds."""

from .fqarith import (
    APoly,
    FiniteField,
    RationalFn,
    ResidueField,
    count_irreducibles,
    enumerate_irreducibles,
    is_irreducible,
    parse_apoly,
    render_apoly,
)
from .ore import DrinfeldModule, OrePoly, ore_reduce_mod
from .heights import (
    AlgebraicPoint,
    HeightInterval,
    canonical_height,
    gamma_bound,
    image_charpoly,
    inseparable_split,
    module_height,
    northcott_enumerate,
    point_height,
    projective_height,
    supersingular_integrality_floor,
    torsion_status,
)
from .supersingular import (
    density_report,
    good_reduction,
    is_supersingular,
    scan_degree,
)
from .lab import (
    build_aux_polynomial,
    build_aux_system,
    divided_derivative,
    multiplicity_at,
    row_height_bound,
    siegel_solve,
    supersingular_vanishing_check,
)
from .bounds import (
    LogQValue,
    lower_bound,
    northcott_bound,
    parameter_select,
    theorem1_constants,
    theorem2_constants,
)

__version__ = "0.1.0"

__all__ = [
    "APoly", "FiniteField", "RationalFn", "ResidueField",
    "count_irreducibles", "enumerate_irreducibles", "is_irreducible",
    "parse_apoly", "render_apoly",
    "DrinfeldModule", "OrePoly", "ore_reduce_mod",
    "AlgebraicPoint", "HeightInterval", "canonical_height", "gamma_bound",
    "image_charpoly", "inseparable_split", "module_height",
    "northcott_enumerate", "point_height", "projective_height",
    "supersingular_integrality_floor", "torsion_status",
    "density_report", "good_reduction", "is_supersingular", "scan_degree",
    "build_aux_polynomial", "build_aux_system", "divided_derivative",
    "multiplicity_at", "row_height_bound", "siegel_solve",
    "supersingular_vanishing_check",
    "LogQValue", "lower_bound", "northcott_bound", "parameter_select",
    "theorem1_constants", "theorem2_constants",
    "__version__",
]
