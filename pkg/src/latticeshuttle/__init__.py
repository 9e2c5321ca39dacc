"""latticeshuttle: coherent atom transport and entanglement in dynamic
optical superlattices.

A small numpy/scipy toolkit that simulates one or two spinful bosons on an
open superlattice chain whose odd and even bonds are toggled by lattice
phase shifts.  It compiles hop/crossfade schedules, propagates them with a
sparse Krylov integrator, evaluates the closed-form double-well dynamics
they are built from, and measures transfer probability, concurrence, and an
entanglement witness at the chain edges.
"""

__version__ = "0.1.0"

from .analytic import (
    PhysicalUnits,
    TwoAtomCoefficients,
    double_occupancy,
    effective_gate_state,
    frequency_hz,
    j_exchange,
    max_double_occupancy,
    single_atom_amplitudes,
    t_hop,
    t_interact,
    to_physical_time,
    total_time,
    two_atom_coefficients,
)
from .basis import FockBasis, FockConfig, Spin, enumerate_basis
from .hamiltonian import (
    CouplingProfile,
    SparseHamiltonian,
    build_hamiltonian,
    coordinate_dump,
    expectation,
    interpolate,
)
from .observables import (
    TwoQubitOutcome,
    WitnessTerm,
    assemble_witness,
    concurrence,
    occupation_profile,
    project_two_sites,
    site_occupations,
    witness_bounds,
    witness_expectation,
    witness_expectation_sampled,
    witness_matrix,
    witness_settings,
)
from .propagator import (
    ConvergenceError,
    PropagatorConfig,
    StateVector,
    evolve_hold,
    evolve_ramp,
    evolve_schedule,
    localized_state,
    two_atom_product_state,
)
from .schedule import (
    Schedule,
    Segment,
    compile_entangle,
    compile_transport,
    format_schedule,
    hold_trajectory,
    profile_at,
)
from .sweep import (
    ResultRecord,
    SweepConfig,
    TransportResult,
    run_entangle_point,
    run_oracle_check,
    run_sweep_n,
    run_sweep_tau,
    run_transport,
    run_witness_check,
)
