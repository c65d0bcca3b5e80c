"""Zero sets of Gaussian-weighted entire functions.

Point-family generators and their perturbations, windowed canonical products
evaluated in log space, Gaussian-measure quadrature with convergence
verdicts, and structured checkers for the zero-set stability criteria.
"""
import os as _os

# Cap BLAS/OpenMP threading before numpy loads: dense broadcasting here is
# memory-bound, and oversubscribed thread pools slow it down.
_threads = _os.environ.get("FOCKZEROS_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                 "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

from .logcomplex import LogComplex
from .sequences import (DeltaStats, ExponentFit, PerturbedSet, PointSet,
                        RadialStats, ShellDeltaStats, ShellFamily,
                        als_separation_constant, convergence_exponent,
                        counting_function, delta_stats, gen_als, gen_gamma_nu,
                        gen_integer_ray, gen_zeros_of_s, in_sector,
                        lindelof_curve, lindelof_sum, make_point_set, perturb,
                        points_from_json, points_to_json, power_sum,
                        power_sum_curve, sector_partition, separation,
                        shell_delta_stats)
from .products import (ALSProductEvaluator, EvaluationDomainError,
                       LatticeProductEvaluator, dist_to_set, eval_als_product,
                       eval_closed, eval_lattice_product, lattice_tail_sum,
                       log_abs_closed, log_abs_lattice_closed, log_abs_sigma,
                       log_abs_sin, max_modulus, order_type_estimate,
                       weighted_log_mag)
from .measures import (GaussianMeasure, LadderSpec, NormEstimate, NuMeasure,
                       QuadratureSpec, annulus_log_integral, fock_p_norm,
                       membership_trend, nu_integral, polar_grid)
from .verify import (ConditionRecord, EnvelopeFit, REPORT_SCHEMA,
                     TheoremReport, admissible_range, check_theorem1,
                     check_theorem2, check_theorem3, envelope_verify_als,
                     envelope_verify_lattice, lindelof_check,
                     sector_lemma_demo, zero_excess_demo)
from .report import bundle_report

__version__ = "0.1.0"

__all__ = [
    "LogComplex",
    "PointSet", "PerturbedSet", "RadialStats", "ShellFamily",
    "DeltaStats", "ShellDeltaStats", "ExponentFit",
    "gen_gamma_nu", "gen_als", "gen_zeros_of_s", "gen_integer_ray",
    "make_point_set", "perturb", "separation", "als_separation_constant",
    "counting_function", "power_sum", "power_sum_curve", "lindelof_sum",
    "lindelof_curve", "convergence_exponent", "delta_stats",
    "shell_delta_stats", "sector_partition", "in_sector",
    "points_to_json", "points_from_json",
    "EvaluationDomainError", "eval_closed", "log_abs_closed", "log_abs_sin",
    "log_abs_sigma", "log_abs_lattice_closed", "LatticeProductEvaluator",
    "ALSProductEvaluator", "eval_lattice_product", "eval_als_product",
    "weighted_log_mag", "dist_to_set", "max_modulus", "order_type_estimate",
    "lattice_tail_sum",
    "GaussianMeasure", "NuMeasure", "QuadratureSpec", "LadderSpec",
    "NormEstimate", "annulus_log_integral", "fock_p_norm", "nu_integral",
    "membership_trend", "polar_grid",
    "ConditionRecord", "TheoremReport", "EnvelopeFit", "REPORT_SCHEMA",
    "admissible_range", "check_theorem1", "check_theorem2", "check_theorem3",
    "envelope_verify_lattice", "envelope_verify_als", "zero_excess_demo",
    "lindelof_check", "sector_lemma_demo",
    "bundle_report",
    "__version__",
]
