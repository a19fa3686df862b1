"""xxzbethe - Bethe ansatz and complete spectra of the open XXZ chain at roots of unity."""

from .exceptions import (
    BoundarySingularity,
    ConfigError,
    ConvergenceFailure,
    DerivativeUnstable,
    DimensionTooLarge,
    IncompleteMatch,
    InputError,
    LengthMismatch,
    MethodDisagreement,
    NoConvergence,
    NumericalError,
    PoleAtDenominator,
    PoleAtRoot,
    RankDeficiency,
    ResidualThresholdExceeded,
    UnsupportedCase,
    UnsupportedError,
    UnsupportedQ,
    XXZError,
)
from .models import (
    BetheState,
    BoundaryCase,
    DetMConfig,
    EnergyConstants,
    EnergyMethod,
    LambdaSource,
    ModelParams,
    RefinementInfo,
    Side,
    SpinTag,
)
from .scalars import delta_s, f0, f1, f_total, g_rescale, gamma_rescale, xi
from .qfunction import (
    bethe_residuals,
    det_m_matrix,
    det_m_residual,
    fused_eigenvalue,
    h_condition_residuals,
    h_fn,
    h_tilde,
    lambda_one_rescaled,
    lambda_tq,
    lambda_tq_derivative,
    lambda_unrescaled,
    max_bethe_residual,
    q_eval,
    root_invariants,
)
from .operators import (
    commutator_residual,
    functional_relation_operator_residual,
    k_minus,
    k_plus,
    r_matrix,
    transfer_fused,
    transfer_half,
    transfer_matrix,
    yang_baxter_residual,
)
from .hamiltonians import derivative_identity_residual, energy_constants, hamiltonian_half, hamiltonian_one
from .solver import (
    EnergyBreakdown,
    SpectrumReport,
    TransferEigenbranches,
    completeness_report,
    continue_roots,
    energy_from_roots,
    full_spectrum,
    match_spectra,
    newton_refine,
    q_polynomial_from_lambda,
)
from .records import OutputFormat, RunRecord, deserialize, persist_record, serialize
from .config import RunConfig, load_config
from .golden import GoldenTable, table1, table2

__version__ = "0.1.0"

__all__ = [
    # Models
    "ModelParams",
    "BetheState",
    "DetMConfig",
    "EnergyConstants",
    "RefinementInfo",
    "BoundaryCase",
    "Side",
    "SpinTag",
    "LambdaSource",
    "EnergyMethod",
    # Scalars
    "xi",
    "delta_s",
    "f0",
    "f1",
    "f_total",
    "g_rescale",
    "gamma_rescale",
    # T-Q layer
    "q_eval",
    "h_fn",
    "h_tilde",
    "lambda_tq",
    "lambda_tq_derivative",
    "lambda_unrescaled",
    "lambda_one_rescaled",
    "fused_eigenvalue",
    "bethe_residuals",
    "max_bethe_residual",
    "root_invariants",
    "h_condition_residuals",
    "det_m_matrix",
    "det_m_residual",
    # Operators
    "r_matrix",
    "k_minus",
    "k_plus",
    "transfer_half",
    "transfer_fused",
    "transfer_matrix",
    "commutator_residual",
    "yang_baxter_residual",
    "functional_relation_operator_residual",
    # Hamiltonians
    "hamiltonian_half",
    "hamiltonian_one",
    "energy_constants",
    "derivative_identity_residual",
    # Solver
    "SpectrumReport",
    "EnergyBreakdown",
    "TransferEigenbranches",
    "full_spectrum",
    "match_spectra",
    "newton_refine",
    "continue_roots",
    "q_polynomial_from_lambda",
    "energy_from_roots",
    "completeness_report",
    # Records and configuration
    "RunRecord",
    "OutputFormat",
    "serialize",
    "deserialize",
    "persist_record",
    "RunConfig",
    "load_config",
    "GoldenTable",
    "table1",
    "table2",
    # Exceptions
    "XXZError",
    "InputError",
    "ConfigError",
    "LengthMismatch",
    "UnsupportedError",
    "UnsupportedCase",
    "UnsupportedQ",
    "NumericalError",
    "PoleAtDenominator",
    "PoleAtRoot",
    "DimensionTooLarge",
    "DerivativeUnstable",
    "BoundarySingularity",
    "ConvergenceFailure",
    "NoConvergence",
    "RankDeficiency",
    "MethodDisagreement",
    "IncompleteMatch",
    "ResidualThresholdExceeded",
]
