"""Multi-level QSP ground-state preparation with fast-forwarded evolution.

Filters, symmetric phase factors, exact eigenbasis simulation of the
multi-level, standard-QSP and LCU pipelines, and closed-form cost estimates.
"""

from .errors import (
    DomainError,
    FilterConstructionError,
    InvalidArgumentError,
    PreconditionError,
    SolverError,
)
from .spectral import (
    FastForwardModel,
    InitialState,
    QueryLedger,
    Regime,
    SpectralHamiltonian,
    equally_spaced,
    evolution_phases,
    query_cost,
    shift_spectrum,
)
from .filters import (
    FilterPolynomial,
    FourierFilter,
    build_cleanup_filter,
    build_heaviside_fourier,
    build_level_filter,
    build_standard_filter,
    eval_filter,
)
from .qsp import (
    PhaseFactorSet,
    Su2Response,
    convert_phases,
    golden_phase_table,
    induced_polynomial,
    qetu_response,
    qsp_unitary,
    solve_symmetric_phase_factors,
)
from .pipeline import (
    LevelState,
    PipelineRun,
    RunReport,
    apply_qetu_level,
    build_multilevel_filters,
    inject_oracle_error,
    level_schedule,
    run_lcu,
    run_multilevel_coherent,
    run_multilevel_measured,
    run_standard_qsp,
)
from .cost import CostEstimate, estimate, scaling_table, trotter_steps

__version__ = "0.1.0"
