"""Walls, chambers and elementary transformations for rank-2 parabolic bundles on P^1."""

from .eltrans import AdmissibleGroup, EvenSubset, admissible_group, compose, flip, is_admissible
from .exactcore import RatMatrix, UniPoly, eval_poly, nullspace, poly_gcd
from .parabolic import (
    LineSubbundleWitness,
    ParabolicBundle,
    StabilityReport,
    TransformResult,
    elementary_transform,
    is_isomorphic,
    line_slope,
    max_line_slope,
    slope,
    stability_type,
    transform_line,
)
from .survey import SurveyReport, survey
from .weightpoly import (
    SubsetIndex,
    Wall,
    WallSignature,
    WeightVector,
    h_value,
    is_in_delta,
    is_in_pi,
    same_chamber,
    signature,
    wall_list,
    weyl_generators_check,
)

__version__ = "0.1.0"
