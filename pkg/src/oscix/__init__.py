"""Asymptotic expansions of oscillatory integrals with separable monomial phases.

The integral ``Os-int exp(i lam sum_j s_j x_j^{m_j}) a(x) dx`` is expanded in
rational powers of ``lam`` from the Taylor coefficients of ``a`` at the origin,
and checked against two independent quadrature routes.
"""

from .amplitude import Amplitude, SectorError, evaluate, parse_amplitude, taylor_at_zero
from .analysis import ConvergenceTable, NoiseFloorError, fit_order, geometric_grid, remainder_series
from .coeffs import c_one_dim, c_one_dim_fourcase, fresnel_general
from .core import (DomainError, MultiIndex, NumericalError, OscixError, Phase, exponent_of,
                   parse_phase, phase_canonicalize)
from .expansion import (Expansion, ExpansionTerm, eval_expansion, expand, expand_1d, preset,
                        stationary_phase_expansion)
from .index_set import OmegaSpec, enumerate_omega, remainder_order
from .oracle import (CostGuardError, OracleResult, QuadratureConfig, oracle_1d_regularized,
                     oracle_1d_rotated, oracle_nd_rotated, oracle_rotated)
from .special import GammaConfig, gamma_pos

__all__ = [
    "Amplitude", "SectorError", "evaluate", "parse_amplitude", "taylor_at_zero",
    "ConvergenceTable", "NoiseFloorError", "fit_order", "geometric_grid", "remainder_series",
    "c_one_dim", "c_one_dim_fourcase", "fresnel_general",
    "DomainError", "MultiIndex", "NumericalError", "OscixError", "Phase", "exponent_of",
    "parse_phase", "phase_canonicalize",
    "Expansion", "ExpansionTerm", "eval_expansion", "expand", "expand_1d", "preset",
    "stationary_phase_expansion",
    "OmegaSpec", "enumerate_omega", "remainder_order",
    "CostGuardError", "OracleResult", "QuadratureConfig", "oracle_1d_regularized",
    "oracle_1d_rotated", "oracle_nd_rotated", "oracle_rotated",
    "GammaConfig", "gamma_pos",
]
