"""entanglab: a numerical laboratory for bipartite quantum entanglement.

Subpackages by theme:

* states       qubits, Bell states, spin directions, Born-rule statistics
* measures     partial trace, Schmidt decomposition, entropy, coherence
* bellgame     the three-question correlation game and its pigeonhole bound
* finite       finite-dimensional evolution and Hamiltonian factorization
* grid         two-particle split-step solver on a periodic lattice
* islands      Hartree mean-field dynamics and classical-regime scans
* cli          command-line front end (``entanglab <subcommand>``)
"""

__version__ = "0.1.0"

from .states import (  # noqa: F401
    Ket,
    MeasurementDirection,
    PureState,
    bell_state,
    joint_spin_probabilities,
    spin_eigenstate,
    tensor_product,
)
from .measures import (  # noqa: F401
    DensityMatrix,
    SchmidtDecomposition,
    coherence,
    entanglement,
    is_factorizable,
    reduced_density_matrix,
    schmidt_decompose,
    schmidt_number,
    von_neumann_entropy,
)
