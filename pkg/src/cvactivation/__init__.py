"""Bounded-witness quantification of continuous-variable nonclassicality.

Truncated-Fock-space numerics for Wigner-negativity and non-Gaussianity
witnesses, certified monotone bounds, and their operational activation into
two-qubit Werner-state entanglement and EPR steering.
"""

__version__ = "0.1.0"

from .errors import BudgetError, ConfigError, InvariantError, TruncationError
from .fock import (
    DEFAULT_BUDGET,
    DensityMatrix,
    FockCutoff,
    OperatorMatrix,
    PureState,
    displacement_op,
    fidelity,
    identity_op,
    ladder_ops,
    momentum_op,
    parity_op,
    position_op,
    pure_fidelity,
    tensor,
    trace_norm,
)
from .states import (
    GaussianPureParams,
    GkpParams,
    cat,
    coherent,
    fock,
    gaussian_pure,
    gkp_comb,
    gkp_damped,
    photon_subtracted_squeezed,
    thermal,
)
from .channels import (
    DampingMap,
    GaussNoiseParams,
    KrausChannel,
    LossParams,
    apply_unitary,
    damping,
    gaussian_noise,
    gkp_ec_round,
    phase_rotation,
    pure_loss,
    sum_gate,
)
from .wigner import (
    DepthSearchConfig,
    NegativityDepthResult,
    WignerGrid,
    negativity_depth,
    wigner_at,
    wigner_batch,
    wigner_grid,
    wigner_pure_comb,
)
from .witnesses import (
    FreeSet,
    GaussianFidelityResult,
    GaussianFitConfig,
    WitnessBox,
    WitnessSpec,
    displaced_parity_spec,
    explicit_spec,
    gaussian_fidelity,
    lift_witness,
    pure_projector_spec,
    rescale_to_box,
    two_copy_projector_spec,
    witness_matrix,
    witness_value,
)
from .monotones import (
    FamilySearchConfig,
    MonotoneBound,
    PropertyReport,
    exact_boundary_mixture,
    hierarchy_check,
    lower_bound,
    property_suite,
    pure_state_bounds,
)
from .activation import (
    ActivationOutcome,
    Classification,
    WernerState,
    activate_entanglement,
    activate_steering,
    classify,
    discord_certificate,
    povm_from_witness,
    werner_analytics,
)

__all__ = [
    "ActivationOutcome",
    "BudgetError",
    "Classification",
    "ConfigError",
    "DEFAULT_BUDGET",
    "DampingMap",
    "DensityMatrix",
    "DepthSearchConfig",
    "FamilySearchConfig",
    "FockCutoff",
    "FreeSet",
    "GaussNoiseParams",
    "GaussianFidelityResult",
    "GaussianFitConfig",
    "GaussianPureParams",
    "GkpParams",
    "InvariantError",
    "KrausChannel",
    "LossParams",
    "MonotoneBound",
    "NegativityDepthResult",
    "OperatorMatrix",
    "PropertyReport",
    "PureState",
    "TruncationError",
    "WernerState",
    "WignerGrid",
    "WitnessBox",
    "WitnessSpec",
    "activate_entanglement",
    "activate_steering",
    "apply_unitary",
    "cat",
    "classify",
    "coherent",
    "damping",
    "discord_certificate",
    "displaced_parity_spec",
    "displacement_op",
    "exact_boundary_mixture",
    "explicit_spec",
    "fidelity",
    "fock",
    "gaussian_fidelity",
    "gaussian_noise",
    "gaussian_pure",
    "gkp_comb",
    "gkp_damped",
    "gkp_ec_round",
    "hierarchy_check",
    "identity_op",
    "ladder_ops",
    "lift_witness",
    "lower_bound",
    "momentum_op",
    "negativity_depth",
    "parity_op",
    "phase_rotation",
    "photon_subtracted_squeezed",
    "position_op",
    "povm_from_witness",
    "property_suite",
    "pure_fidelity",
    "pure_loss",
    "pure_projector_spec",
    "pure_state_bounds",
    "rescale_to_box",
    "sum_gate",
    "tensor",
    "thermal",
    "trace_norm",
    "two_copy_projector_spec",
    "werner_analytics",
    "wigner_at",
    "wigner_batch",
    "wigner_grid",
    "wigner_pure_comb",
    "witness_matrix",
    "witness_value",
]
