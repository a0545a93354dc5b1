"""Channel resolvability toolkit: spectra, finite-length bounds, codes and optimizers."""
from .asymptotics import (
    ball_membership,
    convergence_sweep,
    gaussian_approx_quantile,
    normal_quantile,
    normalize_second_order,
)
from .bounds import (
    BoundPoint,
    SweepCurve,
    achievability_bound,
    bound_sweep,
    converse_bound,
    optimize_bound_over_c,
)
from .codes import (
    ResolvabilityCode,
    best_random_code,
    code_distance,
    code_info_spectrum,
    code_output_distribution,
    exhaustive_optimal_code,
    random_code,
)
from .errors import (
    DegenerateTruncationError,
    DomainError,
    InfeasibleError,
    ParseError,
    PreconditionError,
    ResolvabilityError,
    ResourceError,
    ValidationError,
)
from .kernels import BACKEND
from .modelfile import ModelFile, parse_model_file
from .probability import (
    Channel,
    FiniteDistribution,
    MemorylessModel,
    ProductSpec,
    output_distribution,
    product_channel,
    product_distribution,
    variational_distance,
)
from .single_letter import (
    alternating_resolvability,
    feasible_polytope_vertices,
    grid_oracle_min_I,
    min_mutual_information,
    mutual_information,
)
from .spectrum import (
    Spectrum,
    eps_upper_quantile,
    info_density_spectrum,
    self_information_spectrum,
    spectrum_mean_var,
    spectrum_memoryless_exact,
    tail_probability,
)
from .typicality import in_AY, iid_product_distance, truncate_to_typical, type_of

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BoundPoint",
    "Channel",
    "DegenerateTruncationError",
    "DomainError",
    "FiniteDistribution",
    "InfeasibleError",
    "MemorylessModel",
    "ModelFile",
    "ParseError",
    "PreconditionError",
    "ProductSpec",
    "ResolvabilityCode",
    "ResolvabilityError",
    "ResourceError",
    "Spectrum",
    "SweepCurve",
    "ValidationError",
    "achievability_bound",
    "alternating_resolvability",
    "ball_membership",
    "best_random_code",
    "bound_sweep",
    "code_distance",
    "code_info_spectrum",
    "code_output_distribution",
    "convergence_sweep",
    "converse_bound",
    "eps_upper_quantile",
    "exhaustive_optimal_code",
    "feasible_polytope_vertices",
    "gaussian_approx_quantile",
    "grid_oracle_min_I",
    "iid_product_distance",
    "in_AY",
    "info_density_spectrum",
    "min_mutual_information",
    "mutual_information",
    "normal_quantile",
    "normalize_second_order",
    "optimize_bound_over_c",
    "output_distribution",
    "parse_model_file",
    "product_channel",
    "product_distribution",
    "random_code",
    "self_information_spectrum",
    "spectrum_mean_var",
    "spectrum_memoryless_exact",
    "tail_probability",
    "truncate_to_typical",
    "type_of",
    "variational_distance",
    "__version__",
]
