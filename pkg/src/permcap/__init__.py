"""Permanent-based ergodic capacity bounds for jointly-correlated MIMO
channels, with iterative water-filling power allocation."""

from .capacity import (
    MCEstimate,
    SnrConfig,
    bound,
    expected_det,
    kronecker_bound,
    lemma4_check,
    mc_mutual_info,
    pq_components,
)
from .channel import (
    JOINT_OMEGA_5X5,
    ChannelStats,
    EigenmodeCoupling,
    KroneckerSpec,
    coupling_from_stats,
    eigenmode_marginals,
    kronecker_coupling,
    sample_channel,
    sample_channels,
)
from .errors import (
    DimensionError,
    DomainError,
    InfeasibleError,
    NormalizationError,
    PermanentOverflowError,
    PermcapError,
    ScenarioError,
)
from .permanents import (
    OpCounter,
    PermanentPolynomial,
    extended_per_direct,
    extended_per_poly,
    per_definition,
    per_laplace,
    per_polynomial,
    per_ryser,
    permanent,
    predicted_multiplications,
)
from .power_alloc import (
    IwfaTrace,
    high_snr_policy,
    iwfa,
    kkt_residual,
    low_snr_policy,
    mc_reference_optimize,
    water_fill,
)
from .rng import SampleStream

__version__ = "0.1.0"

__all__ = [
    "ChannelStats",
    "DimensionError",
    "DomainError",
    "EigenmodeCoupling",
    "InfeasibleError",
    "IwfaTrace",
    "JOINT_OMEGA_5X5",
    "KroneckerSpec",
    "MCEstimate",
    "NormalizationError",
    "OpCounter",
    "PermanentOverflowError",
    "PermanentPolynomial",
    "PermcapError",
    "SampleStream",
    "ScenarioError",
    "SnrConfig",
    "bound",
    "coupling_from_stats",
    "eigenmode_marginals",
    "expected_det",
    "extended_per_direct",
    "extended_per_poly",
    "high_snr_policy",
    "iwfa",
    "kkt_residual",
    "kronecker_bound",
    "kronecker_coupling",
    "lemma4_check",
    "low_snr_policy",
    "mc_mutual_info",
    "mc_reference_optimize",
    "per_definition",
    "per_laplace",
    "per_polynomial",
    "per_ryser",
    "permanent",
    "pq_components",
    "predicted_multiplications",
    "sample_channel",
    "sample_channels",
    "water_fill",
]
