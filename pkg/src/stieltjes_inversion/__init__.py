"""Double Laplace / Stieltjes transforms of exponential sums and their boundary-value inversion."""
from .errors import (
    BranchAmbiguityError,
    ConvergenceError,
    EvaluationAtPoleError,
    IllConditionedPolesError,
    InvalidInputError,
    PoleOutsideHalfPlaneError,
    StieltjesError,
    ToleranceNotMetError,
)
from .polynomial import (
    PoleResidue,
    Polynomial,
    compute_residues,
    find_roots,
    poly_derivative,
    poly_eval,
)
from .quadrature import QuadResult, integrate_decaying, integrate_pv, integrate_ray
from .signal import (
    ExponentialSum,
    RationalSpec,
    SectorInfo,
    Strictness,
    admissible_sector,
    build_model,
    eval_signal,
    plus_extension,
)
from .special import BranchSide, e1, e1_boundary, e1_scaled, ei
from .transforms import (
    BoundaryValue,
    EvalMode,
    boundary_value,
    double_fourier,
    double_laplace,
    fourier_half,
    invert,
    laplace,
    mixed_transform_R,
)
from .verify import (
    TransformGrid,
    VerificationReport,
    generate_models,
    verify_realpart_identity,
    verify_residue_normalization,
    verify_theorem1,
    verify_theorem2,
)

__version__ = "0.1.0"
