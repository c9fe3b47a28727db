"""Two-mode bosonic SU(2) polarization algebra and unpolarized states of light."""

__version__ = "0.1.0"

from .fock import (
    DirectSumOperator,
    ModeOccupation,
    TruncationError,
    basis_offset,
    embed_block,
    manifold_dimension,
)
from .su2 import (
    STOKES_FACTOR,
    casimir_block,
    commutator,
    photon_number_block,
    schwinger_block,
)
from .transforms import (
    LosslessUnitary,
    Su2Angles,
    differential_phase,
    evolution,
    evolution_block,
    geometric_rotation,
    haar_random_su2,
    random_lossless,
)
from .states import (
    DensityOperator,
    fock_vector,
    pure_density,
    thermal_state,
    unpolarized_state,
    validate,
)
from .analysis import (
    MomentTensor,
    UnpolarizationReport,
    classical_unpolarized_test,
    commutant_dimension,
    commutator_norms,
    invariance_deviation,
    is_unpolarized,
    monte_carlo_invariance,
    rotation_eigenbasis,
    stokes_moment_tensor,
)
