"""Classical, entangled and total correlation measures for bipartite quantum states."""

from .classical import (
    POVM,
    ConditionalEnsemble,
    CorrelationEstimate,
    POVMSettings,
    ProjectiveSettings,
    check_monotonicity_sample,
    classical_correlation_povm,
    classical_correlation_projective,
    condition_on_measurement,
    helstrom_measurement,
    holevo_objective,
    superadditivity_probe,
)
from .entropy import (
    classical_relative_entropy,
    entropy_decomposition_gap,
    mutual_information,
    quantum_relative_entropy,
    shannon_entropy,
    von_neumann_entropy,
)
from .errors import QCorrError
from .linalg import herm_eigen, partial_trace, partial_transpose, tensor
from .separable import (
    SeparableSettings,
    classical_correlation_relent,
    is_ppt,
    relative_entropy_of_entanglement,
    twirl_bell_diagonal,
)
from .states import (
    BipartiteState,
    Ensemble,
    make_bell_mixture,
    make_classical_quantum,
    make_nonorthogonal_separable,
    make_werner,
    random_local_channel,
    random_state,
    schmidt_decompose,
)

__version__ = "0.1.0"
