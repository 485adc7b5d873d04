"""Steady-state heat transport in qubit chains between two thermal baths.

The package builds both master-equation descriptions of the same chain (the
eigenbasis "global" route and the site-basis "local" route), solves for the
nonequilibrium steady state, and measures populations and heat fluxes; the
closed-form results the two routes admit are implemented separately as
cross-checks.
"""

from ._version import __version__
from .errors import (
    AnalyticFormMismatch,
    BadBathAttachment,
    ChainfluxError,
    ConfigSyntaxError,
    ConvergenceFailure,
    DegenerateDenominator,
    DegenerateKernel,
    DegenerateTransition,
    DimensionMismatch,
    IndexOutOfRange,
    LengthMismatch,
    NegativeTemperature,
    NoConvergence,
    NonFiniteState,
    NonPositiveFrequency,
    NonPositiveGap,
    NonPositiveRate,
    NotHermitian,
    NTooLarge,
    SpecError,
    SpecInvalid,
    StepTooLarge,
    UnknownKey,
)
from .model import (
    BathSpec,
    ChainSpec,
    chain,
    conventions_fingerprint,
    dimer,
    monomer,
    validate_spec,
)
from .operators import (
    EigenSystem,
    EigenSystemDimer,
    build_chain_hamiltonian,
    diagonalize,
    dimer_analytic_eigensystem,
    number_operator,
    site_operator,
    total_excitation,
)
from .lindblad import (
    OMEGA_MIN,
    JumpOperator,
    LindbladModel,
    assemble,
    bose_occupation,
    build_global_dissipator,
    build_liouvillian,
    build_local_dissipator,
    global_jump_operators,
    liouvillian_unitary,
    spectral_density,
    thermal_dissipator,
    trace_vector,
    unvectorize,
    vectorize,
)
from .steady import (
    SteadySolution,
    Trajectory,
    check_density_matrix,
    evolve_rk4,
    solve_steady,
    steady_state,
    trace_distance,
)
from .observables import (
    DimerGlobalFlux,
    DimerGlobalSteadyState,
    SteadyReport,
    dimer_global_heat_flux_analytic,
    dimer_global_populations_analytic,
    dimer_local_heat_flux_analytic,
    dimer_local_populations_analytic,
    heat_flux,
    monomer_heat_flux_analytic,
    monomer_population_analytic,
    qubit_population,
    steady_report,
    universal_e,
)
from .sweep import (
    SweepRequest,
    SweepTable,
    apply_axis,
    emit_csv,
    figure_requests,
    format_config,
    parse_config,
    read_csv_table,
    run_sweep,
)

__all__ = [name for name in dir() if not name.startswith("_")]
