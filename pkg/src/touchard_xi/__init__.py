"""Exact Touchard-polynomial identities and multiprecision completed L-functions."""

__version__ = "0.1.0"

from .characters import DirichletCharacter, builtin, chi3, chi4, from_table, gauss_omega, is_primitive
from .exact import GaussianRational, NPoly, PiPoly, stirling2
from .families import e_poly, f_poly, g_poly, touchard, u_poly
from .lfunctions import identity_residual, theta_chi, theta_fe_residual, xi3_critical, xi_lavrik
from .mpgamma import EvalReport, asympt_gamma, asympt_gamma_u, gamma_complex, lower_gamma, upper_gamma
from .relations import (
    LinearRelation,
    invert_relations,
    key_discovery_general,
    key_discovery_strong,
    solve_in_basis,
    span_dimension,
)

__all__ = [
    "DirichletCharacter", "builtin", "chi3", "chi4", "from_table", "gauss_omega", "is_primitive",
    "GaussianRational", "NPoly", "PiPoly", "stirling2",
    "e_poly", "f_poly", "g_poly", "touchard", "u_poly",
    "identity_residual", "theta_chi", "theta_fe_residual", "xi3_critical", "xi_lavrik",
    "EvalReport", "asympt_gamma", "asympt_gamma_u", "gamma_complex", "lower_gamma", "upper_gamma",
    "LinearRelation", "invert_relations", "key_discovery_general", "key_discovery_strong",
    "solve_in_basis", "span_dimension",
]
