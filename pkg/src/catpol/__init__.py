"""Quantum polarization and entanglement numerics for two-mode coherent
states and their equal-weight two-term superpositions, with every closed
form backed by a truncated number-basis reference implementation."""

from .entanglement import (
    NegativeRadicand,
    concurrence_after_crc,
    concurrence_general,
    concurrence_named,
)
from .fock import (
    CutoffTooSmall,
    FockVector,
    NonHermitianExpectation,
    UnpolarizedDensity,
    encode_coherent,
    encode_superposition,
    oracle_amplitude_means,
    oracle_stokes,
    purity_concurrence,
    q_density,
    q_fock,
    stokes_matrices,
    unpolarized_fixture,
)
from .polarization import (
    DegreeOfPolarization,
    QSampler,
    SphereGrid,
    UNPOLARIZED_Q,
    UnnormalizedSampler,
    amplitude_density,
    amplitude_means,
    coherent_sampler,
    constant_sampler,
    degree_of_polarization,
    dop_h_analytic,
    fock_sampler,
    named_sampler,
    q_coherent,
    q_named,
    q_superposition,
    su2_state,
    superposition_sampler,
    unpolarized_sampler,
)
from .states import (
    CatSuperposition,
    CrcParams,
    DegenerateSuperposition,
    NamedKind,
    NamedState,
    NonRealParameter,
    TwoModeCoherent,
    coherent_overlap,
    crc_apply,
    crc_transform,
    make_named_state,
    norm_constant,
    phase_shift,
    psi1,
    psi2,
    psi3,
    rotate,
)
from .stokes import StokesMoments, stokes_coherent, stokes_named, stokes_superposition

__version__ = "0.1.0"
