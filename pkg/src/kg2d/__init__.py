"""Bound states of 2D spin-0 charged particles in an inverse-square well under a uniform magnetic field.

Natural units throughout: energies/masses in fm^-1, lengths in fm,
magnetic fields in fm^-2.
"""

from .analytic import (
    QuantizationProblem,
    RadialWavefunction,
    SpectrumResult,
    charge_density,
    coefficients,
    default_scan,
    density_peak_radius,
    kappa_domain_max_energy,
    ode_residual,
    quantization_residual,
    radial_integral,
    solve_level,
    solve_spectrum,
    suggested_r_max,
    wavefunction,
)
from .approximation import (
    ApproxCoefficients,
    ApproxErrorReport,
    approx_u,
    error_report,
    exact_u,
    match_coefficients,
)
from .errors import (
    AmbiguousBracketError,
    ConfigError,
    GridError,
    KappaDomainError,
    Kg2dError,
    NoBoundStateError,
    WeakFieldError,
)
from .model import (
    BoundState,
    CoefficientSet,
    PhysicalParams,
    QuantumNumbers,
    SampledFunction,
    SolverMode,
    StateSource,
    ValidationReport,
    validate_params,
)
from .oracle import (
    CompareReport,
    OracleConfig,
    OracleLevel,
    OracleVariant,
    assemble_operator,
    compare_report,
    default_oracle_config,
    oracle_levels,
    singularity_indicator,
)
from .specfun import KummerArgs, kummer_m, kummer_m_series, pochhammer

__version__ = "0.1.0"
