"""Approximation of functions with one interior singularity by locally
modified Bernstein-operator combinations, plus the weighted smoothness
machinery and rate experiments that verify the direct/inverse equivalence
numerically.
"""

from .core import (FunctionHandle, Grid, SmoothnessParams, WeightParams,
                   chebyshev_grid, delta_n, phi, preset_function,
                   uniform_grid, weight_eval)
from .bernstein import (BasisQuery, basis_eval, basis_matrix, basis_row,
                        bernstein_apply, bernstein_derivative, central_moment)
from .combination import (CombinationScheme, combo_apply, moment_residual,
                          solve_coefficients)
from .modifier import (SingularModifier, SmootherPoly, interp_nodes, knots,
                       lagrange_eval, modified_eval, modified_handle,
                       smoother_eval, solve_smoother)
from .operator import (OperatorConfig, PreparedOperator, approximate,
                       approximate_derivative, weighted_error)
from .modulus import (ModulusQuery, backward_diff, forward_diff,
                      main_part_modulus, symmetric_diff, weighted_modulus)
from .estimator import SingularBernsteinApproximator
from .experiments import (DirectResult, EquivalenceResult, ExperimentConfig,
                          LemmaDiagnostics, RateReport, rate_fit, run_direct,
                          run_equivalence, run_lemma_diagnostics)
from .errors import (ConfigError, DomainError, DomainTooSmall,
                     InsufficientData, SingBernError, SingularSample,
                     StencilHitsSingularity, StencilOutOfRange)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
