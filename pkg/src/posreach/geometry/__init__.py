from .cloud import PointCloud, concatenate, one_sided_hausdorff
from .counterexamples import (
    CounterexampleMetadata,
    annuli_growth_constant,
    annuli_radius_sequence,
    annuli_step,
    build_counterexample_cloud,
    pair_triangles_acute,
    tori_geometry,
    tori_growth_constant,
    tori_radius_sequence,
    tori_step,
)
from .shapes import (
    Annulus,
    AnnuliCounterexample,
    Circle,
    ShapeSpec,
    ToriCounterexample,
    Torus,
    sample_shape,
)
from .simplices import circumcenter, is_strictly_acute, is_strictly_self_centred

__all__ = [
    "Annulus",
    "AnnuliCounterexample",
    "Circle",
    "CounterexampleMetadata",
    "PointCloud",
    "ShapeSpec",
    "ToriCounterexample",
    "Torus",
    "annuli_growth_constant",
    "annuli_radius_sequence",
    "annuli_step",
    "build_counterexample_cloud",
    "circumcenter",
    "pair_triangles_acute",
    "concatenate",
    "is_strictly_acute",
    "is_strictly_self_centred",
    "one_sided_hausdorff",
    "sample_shape",
    "tori_geometry",
    "tori_growth_constant",
    "tori_radius_sequence",
    "tori_step",
]
