"""Wigner-matrix phase-space transport for variable-mass Klein-Gordon fields."""
from .cases import (
    TwoWaveSpec,
    dispersion_omega,
    gaussian_packet,
    plane_wave,
    two_wave_fields,
    two_wave_wigner,
)
from .errors import (
    AliasingError,
    GridMismatchError,
    ReferenceZeroError,
    SolverAbort,
    StabilityError,
    WindowError,
)
from .feshbach_villars import PAULI, TwoComponentField, apply_hamiltonian, fv_recombine, fv_split
from .grid import GridPair, SimParams, build_grid
from .kg import KGState, kg_energy, kg_evolve
from .medium import (
    ConstantMedium,
    CosineModulation,
    GaussianBump,
    LinearRamp,
    SinusoidMedium,
    TabulatedMedium,
    medium_sample,
)
from .moyal import MoyalOperatorSpec, advect_D, h0hat_apply, moyal_apply
from .swl import (
    ActionDensities,
    SWLFrame,
    advect_action,
    extract_fg,
    swl_diagonalize,
    swl_frame,
    wave_action,
)
from .transport import SolverControls, TransportState, charge, evolve_transport, transport_rhs
from .wigner import (
    PhaseSpaceDensities,
    WignerMatrixField,
    decompose_real,
    reconstruct_field,
    w_phiphi,
    wigner_matrix,
)
