"""Variable-exponent Lebesgue space engine."""

from .checks import (
    DualityResult,
    EmbeddingResult,
    canonical_witness,
    dual_sandwich_check,
    embedding_check,
    embedding_class_ratio,
    holder_product_check,
    maximal_ratio,
    norm_axioms,
    potential_target_exponent,
    riesz_potential_ratio,
    riesz_transform_ratio,
)
from .exponent import (
    EmbeddingClassReport,
    Exponent,
    LogHolderReport,
    conjugate_exponent,
    embedding_class_check,
    harmonic_sum,
    log_holder_check,
    spatial_exponent,
    temporal_exponent,
    time_nodes,
    time_weights,
)
from .norms import (
    LuxemburgResult,
    classical_lp_norm,
    l1_time_norm,
    luxemburg_norm,
    modular,
    variable_norm,
    xt_norm,
)
from .operators import maximal_function, maximal_half_widths, riesz_potential_1d, riesz_potential_2d
