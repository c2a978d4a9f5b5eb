"""High-dimensional linear-optical Type-II fusion simulator.

Exact Fock-space evaluation of fusion success probabilities, synthesis of
extra-dimensional correction unitaries, and reproduction of the reference
probability tables.
"""

from .fock import (
    FockPattern,
    FockVector,
    QuditIndex,
    apply_unitary,
    enumerate_patterns,
    pattern_count,
    permanent,
    transition_amplitude,
)
from .optics import (
    ModeUnitary,
    beamsplitter_r,
    compose,
    embed,
    fourier_matrix,
    permutation_unitary,
)
from .states import (
    QuditPauli,
    QuditState,
    ancilla_A,
    bell_state,
    boost_ancilla,
    bunched_state,
    lookup_state,
    pauli_matrix,
    qudit_state_from_fock,
    w_state,
)
from .edc import (
    CorrectionInput,
    CorrectionResult,
    DegenerateInputError,
    complete_isometry,
    conversion_probability,
    correction_unitary,
    gram_matrix,
    isometry_extension,
    schmidt_coefficients,
    usd_povm,
)
from .fusion import (
    FusionProtocol,
    FusionReport,
    PatternOutcome,
    bell_overlap,
    completeness_by_input,
    fourier_projection_state,
    ghz_boost_report,
    pattern_outcome,
    protocol_appendix_d,
    protocol_boost_qubit,
    protocol_boost_qutrit,
    protocol_even,
    protocol_ghz_boost,
    protocol_odd,
    protocol_wstate,
    protocol_ztl,
    success_probability,
)

__version__ = "0.1.0"
