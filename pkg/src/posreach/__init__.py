"""Homotopy reconstruction bounds for sets of positive reach, with executable
checks of the bounds' optimality through Čech persistence."""
from .bounds import (
    FeasibilityRegion,
    ReachParams,
    check_manifold_condition,
    check_set_condition,
    feasibility_region,
    manifold_alpha_interval,
    manifold_radius_interval,
    radius_interval,
    retract_condition,
    set_radius_interval,
)
from .complex import Filtration, cech_filtration, min_enclosing_ball, rips_filtration
from .estimators import BettiVectorizer, CechPersistence, check_point_cloud
from .exceptions import (
    DegenerateSimplexError,
    DensityError,
    InapplicableError,
    InfeasibleError,
    PosreachError,
    ResourceError,
)
from .geometry import (
    Annulus,
    AnnuliCounterexample,
    Circle,
    CounterexampleMetadata,
    PointCloud,
    ToriCounterexample,
    Torus,
    annuli_radius_sequence,
    build_counterexample_cloud,
    circumcenter,
    sample_shape,
    tori_radius_sequence,
)
from .homology import Barcode, BettiProfile, betti_at, persistence
from .verify import (
    VerificationReport,
    verify_annuli_counterexample,
    verify_reconstruction,
    verify_tori_counterexample,
)

__version__ = "0.1.0"
