"""specgap: spectral-gap brackets for spherically symmetric measures.

Closed-form two-sided bounds on the Poincare constant of log-concave and
heavy-tailed rotationally invariant measures on R^n, cross-validated by an
independent Sturm-Liouville eigensolver for the radial dynamics and by
Monte Carlo Rayleigh quotients.
"""

from .bounds_engine import (CandidateFunction, ExpPowerBrackets, LowerBound,
                            curvature_lower, exp_power_explicit,
                            gamma_ratio_bounds, moment_bracket,
                            radial_moment_lower, rayleigh_upper,
                            spectral_comparison, validate_candidate,
                            variational_lower, variational_potential,
                            weighted_comparison, weighted_curvature,
                            weighted_curvature_lower)
from .catalog import (FAMILY_NAMES, WEIGHT_NAMES, FamilySpec, ReferenceGap,
                      ball_candidate, ball_potential, catalog_grid,
                      cauchy_potential, exp_power_potential,
                      gaussian_potential, inv_one_plus_r2_weight,
                      linear_candidate, make_family, make_weight,
                      one_plus_r2_weight, power_candidate,
                      power_law_candidate, quadratic_candidate,
                      reference_gap, unit_weight)
from .errors import (ConvergenceError, DegenerateFunction,
                     DiscretizationError, DomainError, HypothesisFailed,
                     InvalidInput, NonIntegrable, SpecGapError,
                     TruncationWarning)
from .loggamma import gamma_ratio, log_gamma
from .mc_sampler import (RayleighResult, SampleBatch, rayleigh_estimate,
                         sample_mu, sample_radius)
from .radial_model import (BoundBracket, RadialMeasure, RadialPotential,
                           Weight, build_measure, diagnostic_grid, drift,
                           drift_derivative, effective_potential,
                           expectation, moment, tail_mass,
                           truncation_radius, validate_weight,
                           weighted_moment)
from .sl_eigensolver import (Discretization, GapEstimate, GridFunction,
                             GridSpec, discretize, residual_check,
                             spectral_gap)

__version__ = "0.1.0"
