"""Desk-scale laboratory for matrix functions built from periodized sums.

Two evaluation paths share one aliasing story. The Fourier path expands the
evolution factor e^{-T H^alpha} in a cosine series on a period-a lattice
(`kernels`, `fourier`); the contour path averages weighted resolvents on m
roots of unity to evaluate a holomorphic f(A) (`contour`). `operators`
supplies grid Hamiltonians and application drivers, `costmodel` turns plans
into oracle-query counts, and `cli` wraps everything for the shell.
"""

from .errors import NumericalError, PrecondError
from .kernels import (L1Estimate, SpectralProfile, TimeKernel,
                      algebraic_envelope_constant, algebraic_tail_integral,
                      algebraic_tail_value, decay_envelope, envelope_rate,
                      kernel_value, kernel_values, l1_norm_estimate,
                      saddle_rate)
from .fourier import (ErrorBudget, FourierPlan, aliasing_bound,
                      assemble_fourier_approx, error_bounds,
                      lcu_coefficients, plan_fourier, scalar_psf_residual,
                      spectral_scale, truncation_bound, truncation_ratio)
from .contour import (Amplification, ContourPlan, RadiusResult,
                      aliasing_norm_ratio, aliasing_term,
                      amplification_factor, circle_sup, discrete_sum_apply,
                      make_nodes, make_plan, optimize_radius, plan_contour,
                      plan_m, sup_exp_neg, sup_monomial, sup_poly_abs,
                      truncation_integral, truncation_norm_bound)
from .linalg import (SpectralDecomposition, eig, evolution_matrix,
                     exact_evolution, matfun, resolvent_apply,
                     resolvent_sup_on_circle)
from .operators import (ConvergenceRecord, DiracOperator, GridSpec,
                        difference_operator, dirac_operator, gradient_stack,
                        laplacian, run_application, shifted_encoding,
                        shifted_encoding_stats)
from .costmodel import (CostReport, PathComparison, ProblemSpec,
                        compare_paths, path_a_cost, path_b_cost,
                        qsvt_cos_degree, qsvt_inverse_degree)

__version__ = "0.1.0"

__all__ = [
    "Amplification", "ContourPlan", "ConvergenceRecord", "CostReport",
    "DiracOperator", "ErrorBudget", "FourierPlan", "GridSpec", "L1Estimate",
    "NumericalError", "PathComparison", "PrecondError", "ProblemSpec",
    "RadiusResult", "SpectralDecomposition", "SpectralProfile", "TimeKernel",
    "algebraic_envelope_constant", "algebraic_tail_integral",
    "algebraic_tail_value", "aliasing_bound", "aliasing_norm_ratio",
    "aliasing_term", "amplification_factor", "assemble_fourier_approx",
    "circle_sup", "compare_paths", "decay_envelope", "difference_operator",
    "dirac_operator", "discrete_sum_apply", "eig", "envelope_rate",
    "error_bounds", "evolution_matrix", "exact_evolution",
    "gradient_stack", "kernel_value", "kernel_values", "l1_norm_estimate",
    "laplacian", "lcu_coefficients", "make_nodes", "make_plan", "matfun",
    "optimize_radius", "path_a_cost", "path_b_cost", "plan_contour",
    "plan_fourier", "plan_m", "qsvt_cos_degree", "qsvt_inverse_degree",
    "resolvent_apply", "resolvent_sup_on_circle", "run_application",
    "saddle_rate", "scalar_psf_residual", "shifted_encoding",
    "shifted_encoding_stats", "spectral_scale", "sup_exp_neg",
    "sup_monomial", "sup_poly_abs", "truncation_bound", "truncation_integral",
    "truncation_norm_bound", "truncation_ratio",
]
