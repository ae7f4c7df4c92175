"""Numerical laboratory for extremal first eigenvalues of the problem
y'' + q y + lambda y = 0 with boundary conditions y'(0) = k0^2 y(0),
y'(1) = -k1^2 y(1), over potentials normalized by int_0^1 q^gamma dx = 1."""

from .potentials import (
    DeltaComponent,
    NegativeResult,
    NonPositiveExponentOnVanishingFunction,
    Potential,
    StepPotential,
    ZeroPotential,
    normalize_gamma,
    pnorm,
    refine_common,
    shift,
)
from .eigensolver import (
    DEFAULT_CONFIG,
    BracketNotFound,
    EigenResult,
    RobinBC,
    SolverConfig,
    ZeroFunction,
    lambda1,
    lambda1_fd,
    lambda1_zero,
    rayleigh,
    theta_end,
)
from .sobolev import (
    SampledFunction,
    SignedMeasure,
    pairing,
    w1_norm,
    wminus1_dist,
    wminus1_norm,
)
from .families import (
    ConvergenceTable,
    ExtremumSearchSpec,
    NormBudgetExceeded,
    SearchResult,
    SpikeTrainSpec,
    TableRow,
    UnboundednessTable,
    VerificationError,
    search_extremum,
    statement1_family,
    statement2_family,
    statement3_family,
    verify_thm1,
    verify_thm2,
)

__version__ = "0.1.0"

__all__ = [
    "StepPotential",
    "DeltaComponent",
    "Potential",
    "pnorm",
    "normalize_gamma",
    "shift",
    "refine_common",
    "NonPositiveExponentOnVanishingFunction",
    "ZeroPotential",
    "NegativeResult",
    "RobinBC",
    "SolverConfig",
    "EigenResult",
    "DEFAULT_CONFIG",
    "theta_end",
    "lambda1",
    "lambda1_fd",
    "lambda1_zero",
    "rayleigh",
    "BracketNotFound",
    "ZeroFunction",
    "SignedMeasure",
    "SampledFunction",
    "w1_norm",
    "pairing",
    "wminus1_norm",
    "wminus1_dist",
    "SpikeTrainSpec",
    "ExtremumSearchSpec",
    "TableRow",
    "ConvergenceTable",
    "UnboundednessTable",
    "SearchResult",
    "statement1_family",
    "statement2_family",
    "statement3_family",
    "verify_thm1",
    "verify_thm2",
    "search_extremum",
    "NormBudgetExceeded",
    "VerificationError",
    "__version__",
]
