"""Two-Gaussian lattice energies K(alpha; z) - b K(2 alpha; z) and their phase diagram."""

from .energy import (
    EnergyValue,
    difference_energy,
    difference_energy_grad,
    gamma_c_energy,
    k_energy_direct,
    k_energy_expansion,
    theta_2d,
    transversal_terms,
)
from .errors import ConvergenceError, DomainError, EvaluationError, ReductionError, ThresholdAmbiguityError
from .minimize import (
    LineSearchConfig,
    MinimizeKind,
    MinimizeResult,
    certify_transversal_monotonicity,
    minimize_2d,
    minimize_on_gamma_c,
)
from .modular import FundamentalDomainPoint, GroupGenerator, GroupWord, apply, reduce
from .phases import Phase, PhaseResult, ThresholdResult, classify_phase, find_bc1, trace_yb_curve
from .points import HEXAGONAL, EnergyParams, UpperHalfPoint
from .proof_sums import ProofSumKind, ProofSums, eval_proof_sum
from .theta import DEFAULT_POLICY, AuxSeriesKind, ThetaValue, TruncationPolicy, aux_series, theta_eval

__all__ = [
    "AuxSeriesKind", "ConvergenceError", "DEFAULT_POLICY", "DomainError", "EnergyParams", "EnergyValue",
    "EvaluationError", "FundamentalDomainPoint", "GroupGenerator", "GroupWord", "HEXAGONAL", "LineSearchConfig",
    "MinimizeKind", "MinimizeResult", "Phase", "PhaseResult", "ProofSumKind", "ProofSums", "ReductionError",
    "ThetaValue", "ThresholdAmbiguityError", "ThresholdResult", "TruncationPolicy", "UpperHalfPoint", "apply",
    "aux_series", "certify_transversal_monotonicity", "classify_phase", "difference_energy",
    "difference_energy_grad", "eval_proof_sum", "find_bc1", "gamma_c_energy", "k_energy_direct",
    "k_energy_expansion", "minimize_2d", "minimize_on_gamma_c", "reduce", "theta_2d", "theta_eval",
    "trace_yb_curve", "transversal_terms",
]
