"""Analytic capacities and Besov norms for finite zero sets in the disk.

Evaluation of finite Blaschke products and related test functions, radial
quadrature for Besov-type norms, capacity upper and lower bounds, an l1
coefficient-capacity solver with dual certificates, companion-matrix
inverse-norm ratios, and a sweep harness with a CLI front end.
"""

from .besov import BesovParams, NormReport, RadialQuadrature, besov_norm, \
    besov_seminorm, bloch_seminorm, suggested_quadrature, tail_bound
from .capacity import CapacityBoundReport, cap_h2, cap_hinfty, \
    capacity_bounds, conjugate_exponent, duality_lower_ratio, prod_moduli, \
    upper_bound_blaschke, upper_bound_dilated
from .circle import INF, AngularGrid, UndersampledGridWarning, \
    check_exponent, h2_norm_series, lp_norm_circle, power_factor
from .disk import BlaschkeProduct, DilatedTestFunction, FunctionHandle, \
    Monomial, SigmaStarHandle, SigmaStarSpec, dilated_test_function, \
    interp_sequence, sigma_star_handle, sigma_star_points
from .harness import CostGuardError, SweepConfig, SweepRow, \
    blaschke_norm_law, boundary_zeros, bstar_seminorm_law, \
    capacity_growth_law, consistency_constant, emit, run_region_table, \
    run_sigma_star_sweep, run_wiener_schaffer, wiener_growth_law
from .matrices import SingularMatrixError, companion_matrix, companion_ratio, \
    inverse_and_det, inverse_norm_ratio, operator_norm, schaffer_bound
from .wiener import BasisPursuitProblem, CertificateError, \
    ConvergenceWarning, DualCertificate, cap_wiener_certified_lower, \
    cap_wiener_primal, certificate_from_solution, \
    schaffer_lower_from_capacity, solve_basis_pursuit

__version__ = "0.1.0"

__all__ = [
    "AngularGrid", "BasisPursuitProblem", "BesovParams", "BlaschkeProduct",
    "CapacityBoundReport", "CertificateError", "ConvergenceWarning",
    "CostGuardError", "DilatedTestFunction", "DualCertificate",
    "FunctionHandle", "INF", "Monomial", "NormReport", "RadialQuadrature",
    "SigmaStarHandle", "SigmaStarSpec", "SingularMatrixError", "SweepConfig",
    "SweepRow", "UndersampledGridWarning", "besov_norm", "besov_seminorm",
    "blaschke_norm_law", "bloch_seminorm", "boundary_zeros",
    "bstar_seminorm_law", "cap_h2", "cap_hinfty", "cap_wiener_certified_lower",
    "cap_wiener_primal", "capacity_bounds", "capacity_growth_law",
    "certificate_from_solution", "check_exponent", "companion_matrix",
    "companion_ratio", "conjugate_exponent", "consistency_constant",
    "dilated_test_function", "duality_lower_ratio", "emit", "h2_norm_series",
    "interp_sequence", "inverse_and_det", "inverse_norm_ratio",
    "lp_norm_circle", "operator_norm", "power_factor", "prod_moduli",
    "run_region_table", "run_sigma_star_sweep", "run_wiener_schaffer",
    "schaffer_bound", "schaffer_lower_from_capacity", "sigma_star_handle",
    "sigma_star_points", "solve_basis_pursuit", "suggested_quadrature",
    "tail_bound", "upper_bound_blaschke", "upper_bound_dilated",
    "wiener_growth_law",
]
