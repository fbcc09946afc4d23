"""Inf-convolution envelopes of extended-real-valued functions on finite grids."""

from .analysis import (
    CheckReport,
    CoercivityMinorant,
    affine_minorant,
    argmin_set,
    check_coercive_minorant,
    check_coercivity_bound,
    check_infimum_preservation,
    check_lipschitz,
    check_midpoint_convex,
    check_minimizer_preservation,
    check_monotone_in_n,
    infimum,
    minimizing_sequence,
)
from .envelope import (
    EnvelopeResult,
    Kernel,
    envelope_sequence,
    inf_conv_bruteforce,
    moreau_yosida,
    pasch_hausdorff,
    prox_point,
    proximal_map,
)
from .extension import (
    SampleSet,
    mcshane_extend,
    validate_lipschitz,
    verify_minimizer_location,
)
from .grid import (
    Grid,
    GridFunction,
    NormKind,
    PointSet,
    distance_to_set,
    indicator,
    linear_minus_on_ball,
)

__all__ = [
    "CheckReport",
    "CoercivityMinorant",
    "EnvelopeResult",
    "Grid",
    "GridFunction",
    "Kernel",
    "NormKind",
    "PointSet",
    "SampleSet",
    "affine_minorant",
    "argmin_set",
    "check_coercive_minorant",
    "check_coercivity_bound",
    "check_infimum_preservation",
    "check_lipschitz",
    "check_midpoint_convex",
    "check_minimizer_preservation",
    "check_monotone_in_n",
    "distance_to_set",
    "envelope_sequence",
    "indicator",
    "inf_conv_bruteforce",
    "infimum",
    "linear_minus_on_ball",
    "mcshane_extend",
    "minimizing_sequence",
    "moreau_yosida",
    "pasch_hausdorff",
    "prox_point",
    "proximal_map",
    "validate_lipschitz",
    "verify_minimizer_location",
]

__version__ = "0.1.0"
