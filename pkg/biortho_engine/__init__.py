"""
Biortho Engine

Finite-N correlation kernels of the Jacobi, Laguerre and Hermite
biorthogonal ensembles (weights x^a, x^a e^-x, |x|^a e^-x^2 with the
extra x^theta interaction), their hard-edge and bulk scaling limits in
terms of Wright's generalized Bessel functions, the associated
biorthogonal polynomial families, and a Metropolis sampler for checking
the predicted densities by simulation.
"""

from .errors import (AccuracyError, BiorthoError, ConfigurationError, DecompositionError, DomainError,
                     EvaluationError, SingularityError)
from .numerics import SeriesConfig, SignedLogValue, log_pochhammer, sum_series
from .special import (LimitKernelParams, bessel_kernel, limit_kernel, limit_kernel_hermite, sine_kernel,
                      wright_bessel)
from .gram import (CauchySystem, CoefficientMatrix, biorthogonalize, cauchy_inverse, jacobi_coeffs,
                   jacobi_gram, laguerre_coeffs, laguerre_gram_tilde)
from .kernels import (EnsembleSpec, KernelMatrix, correlation, kernel, kernel_hermite, kernel_jacobi,
                      kernel_laguerre, kernel_matrix, one_point, weight)
from .polynomials import (biortho_pair_general, hermite_S, hermite_T, kernel_from_polynomials,
                          konhauser_Y, konhauser_Z)
from .scaling import (ConvergenceReport, component_A, component_B, component_C, component_D,
                      component_study, convergence_study, scaled_kernel, symmetry_map)
from .sampler import (ChainConfig, Histogram, SampleBatch, empirical_rho1, empirical_rho2,
                      predicted_rho1, predicted_rho2, sample)
from .settings import default_chain_config, default_series_config
from .verification import CheckResult, list_suites, run_suite, summarize

__version__ = "1.0.0"
__all__ = [
    "BiorthoError", "DomainError", "ConfigurationError", "EvaluationError", "AccuracyError",
    "SingularityError", "DecompositionError",
    "SeriesConfig", "SignedLogValue", "log_pochhammer", "sum_series",
    "LimitKernelParams", "wright_bessel", "limit_kernel", "limit_kernel_hermite", "bessel_kernel",
    "sine_kernel",
    "CauchySystem", "CoefficientMatrix", "cauchy_inverse", "jacobi_gram", "jacobi_coeffs",
    "laguerre_gram_tilde", "laguerre_coeffs", "biorthogonalize",
    "EnsembleSpec", "KernelMatrix", "weight", "kernel", "kernel_jacobi", "kernel_laguerre",
    "kernel_hermite", "kernel_matrix", "correlation", "one_point",
    "biortho_pair_general", "konhauser_Z", "konhauser_Y", "hermite_S", "hermite_T",
    "kernel_from_polynomials",
    "ConvergenceReport", "scaled_kernel", "symmetry_map", "component_A", "component_B", "component_C",
    "component_D", "component_study", "convergence_study",
    "ChainConfig", "SampleBatch", "Histogram", "sample", "empirical_rho1", "empirical_rho2",
    "predicted_rho1", "predicted_rho2",
    "default_series_config", "default_chain_config",
    "CheckResult", "list_suites", "run_suite", "summarize",
    "evaluate_kernel", "evaluate_limit_kernel", "run_verification", "simulate",
]


def evaluate_kernel(family: str, alpha: float, theta: float, n: int, x: float, y: float) -> float:
    """
    Finite-N kernel K_N(x, y) of one ensemble.

    Args:
        family (str): "jacobi", "laguerre" or "hermite"
        alpha (float): Weight exponent, > -1
        theta (float): Power parameter, > 0
        n (int): Number of points
        x (float): First argument
        y (float): Second argument

    Returns:
        float: Kernel value
    """
    return kernel(EnsembleSpec(family, alpha, theta, n), x, y)


def evaluate_limit_kernel(family: str, alpha: float, theta: float, x: float, y: float,
                          config: SeriesConfig = None) -> float:
    """
    Scaling-limit kernel reached by the family.

    Args:
        family (str): "jacobi" or "laguerre" (hard edge) or "hermite" (bulk)
        alpha (float): Weight exponent, > -1
        theta (float): Power parameter, > 0
        x (float): First argument
        y (float): Second argument
        config (SeriesConfig): Tolerances, defaults with environment overrides when omitted

    Returns:
        float: K^(alpha,theta)(x, y) or K^Her(alpha,theta)(x, y)
    """
    spec = EnsembleSpec(family, alpha, theta, 1)
    config = config or default_series_config()
    p = LimitKernelParams(alpha, theta)
    if spec.family == "hermite":
        return limit_kernel_hermite(p, x, y, config=config)
    return limit_kernel(p, x, y, config=config)


def run_verification(suites=None, config: SeriesConfig = None) -> dict:
    """
    Run verification suites and collect a JSON-ready verdict.

    Args:
        suites (list): Suite names, all suites when omitted
        config (SeriesConfig): Tolerances

    Returns:
        dict: {"passed": bool, "suites": {name: [check, ...]}}
    """
    names = list(suites) if suites else list_suites()
    return summarize({name: run_suite(name, config) for name in names})


def simulate(family: str, alpha: float, theta: float, n: int, **chain_options) -> SampleBatch:
    """
    Metropolis samples of an ensemble.

    Args:
        family (str): "jacobi", "laguerre" or "hermite"
        alpha (float): Weight exponent, > -1
        theta (float): Power parameter, > 0
        n (int): Number of points
        **chain_options: ChainConfig fields overriding defaults.json

    Returns:
        SampleBatch: Kept configurations with acceptance statistics
    """
    return sample(EnsembleSpec(family, alpha, theta, n), default_chain_config(**chain_options))
