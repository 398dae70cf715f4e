"""Norms and bilateral tail bounds for sums of centered binary variables."""

from .binary import (BinaryVariable, GNormResult, audit_cosh_envelope, audit_proposition_2_2, g_norm,
                     log_beta, q_norm)
from .errors import ConditionViolated, DomainError, NotConvex, Unbounded
from .fenchel import ConjugableFunction, conjugate, conjugate_power_law, fenchel_moreau_check
from .oracle_sim import ExactTailQuery, SimulationResult, exact_tail, simulate_tail, sup_tail_over_n
from .phi_spaces import (BphiNorm, MgfOracle, PhiFunction, fit_bphi_norm, phi_rademacher,
                         phi_subgaussian, subgaussian_norm, tail_bound_from_norm)
from .sum_tails import (NormingFunction, SumModel, TailBoundReport, mgf_bilateral_check,
                        power_law, rate_v, tail_bounds, theta)

__version__ = "0.1.0"

__all__ = [
    "BinaryVariable", "BphiNorm", "ConditionViolated", "ConjugableFunction", "DomainError",
    "ExactTailQuery", "GNormResult", "MgfOracle", "NormingFunction", "NotConvex",
    "PhiFunction", "SimulationResult", "SumModel", "TailBoundReport", "Unbounded",
    "audit_cosh_envelope", "audit_proposition_2_2", "conjugate", "conjugate_power_law", "exact_tail",
    "fenchel_moreau_check", "fit_bphi_norm", "g_norm", "log_beta", "mgf_bilateral_check",
    "phi_rademacher", "phi_subgaussian", "power_law", "q_norm", "rate_v", "simulate_tail",
    "subgaussian_norm", "sup_tail_over_n", "tail_bound_from_norm", "tail_bounds", "theta",
]
