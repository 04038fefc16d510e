"""
Scaling Limits
Scaled finite-N kernels and component functions, their Wright-Bessel limits,
convergence studies and the parameter symmetry of the limit kernels.
"""

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
import pandas as pd
from scipy import linalg, special

from .errors import DomainError, check_parameters
from .gram import jacobi_coeffs
from .kernels import EnsembleSpec, correlation, kernel_hermite, kernel_jacobi, kernel_laguerre, laguerre_kernel_table
from .numerics import SeriesConfig, exp_sum, log_factorials, log_rising, signed_power
from .special import (EXTENDED_GUARD_DIGITS, LimitKernelParams, limit_kernel, limit_kernel_extended,
                      limit_kernel_hermite, limit_kernel_hermite_extended, wright_bessel)

logger = logging.getLogger(__name__)

# sup-errors may grow by this factor between consecutive N and still count as decreasing
MONOTONE_SLACK = 1.1
LAGUERRE_GAUGES = ("second", "printed", "none")
COMPONENTS = ("A", "B", "C", "D")


@dataclass
class ConvergenceReport:
    """Deviation of a scaled finite-N kernel from its limit over a grid and a list of N."""

    family: str
    alpha: float
    theta: float
    grid: List[Tuple[float, float]]
    n_list: List[int]
    finite_values: np.ndarray
    limit_values: np.ndarray
    errors: np.ndarray = field(init=False)
    monotone_flag: bool = field(init=False)

    def __post_init__(self):
        self.finite_values = np.asarray(self.finite_values, dtype=float)
        self.limit_values = np.asarray(self.limit_values, dtype=float)
        shape = (len(self.n_list), len(self.grid))
        if self.finite_values.shape != shape or self.limit_values.shape != (len(self.grid),):
            raise DomainError("report dimensions do not match grid and N list")
        self.errors = np.abs(self.finite_values - self.limit_values[None, :])
        sup = self.sup_errors()
        self.monotone_flag = bool(np.all(sup[1:] <= MONOTONE_SLACK * sup[:-1]))

    def sup_errors(self) -> np.ndarray:
        return self.errors.max(axis=1)

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for i, n in enumerate(self.n_list):
            for j, (x, y) in enumerate(self.grid):
                rows.append({"N": n, "x": x, "y": y,
                             "finite_value": self.finite_values[i, j],
                             "limit_value": self.limit_values[j],
                             "abs_error": self.errors[i, j]})
        return pd.DataFrame(rows, columns=["N", "x", "y", "finite_value", "limit_value", "abs_error"])

    def summary(self) -> Dict:
        return {
            "family": self.family,
            "alpha": self.alpha,
            "theta": self.theta,
            "n_list": list(self.n_list),
            "grid": [list(point) for point in self.grid],
            "sup_errors": self.sup_errors().tolist(),
            "monotone_flag": self.monotone_flag,
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2)


def symmetry_map(alpha: float, theta: float) -> Tuple[float, float]:
    """(alpha, theta) -> ((alpha+1)/theta - 1, 1/theta); an involution."""
    check_parameters(alpha, theta)
    return (alpha + 1) / theta - 1, 1 / theta


def _outside_unit(x: float, y: float, s: float, n: int):
    if not (x > 0 and y > 0):
        raise DomainError("scaled kernel arguments must be > 0")
    if x / s >= 1 or y / s >= 1:
        raise DomainError(f"scaled point outside (0, 1) for N = {n}; use a larger N")


def scaled_kernel_jacobi(alpha: float, theta: float, n: int, x: float, y: float) -> float:
    """
    Hard-edge scaled Jacobi kernel (1/s) (x/s)^alpha K_N(x/s, y/s), s = N^(1 + 1/theta).

    Args:
        alpha (float): Weight exponent, > -1
        theta (float): Power parameter, > 0
        n (int): Number of points
        x (float): First argument, > 0
        y (float): Second argument, > 0

    Returns:
        float: Tends to x^alpha K^(alpha,theta)(x, y)
    """
    check_parameters(alpha, theta, n)
    s = n ** (1 + 1 / theta)
    _outside_unit(x, y, s, n)
    return (x / s) ** alpha * kernel_jacobi(alpha, theta, n, x / s, y / s) / s


def scaled_kernel_laguerre(alpha: float, theta: float, n: int, x: float, y: float,
                           gauge: str = "second") -> float:
    """
    Hard-edge scaled Laguerre kernel, s = N^(1/theta).

    The weight factor e^-t may sit on either argument without changing any
    correlation determinant; "second" uses e^(-y/s), "printed" e^(x/s),
    "none" drops it. The limit is x^alpha K^(alpha,theta)(y, x).

    Args:
        alpha (float): Weight exponent, > -1
        theta (float): Power parameter, > 0
        n (int): Number of points
        x (float): First argument, > 0
        y (float): Second argument, > 0
        gauge (str): Placement of the exponential factor

    Returns:
        float: Scaled kernel value
    """
    check_parameters(alpha, theta, n)
    if gauge not in LAGUERRE_GAUGES:
        raise DomainError(f"gauge must be one of {', '.join(LAGUERRE_GAUGES)}")
    if not (x > 0 and y > 0):
        raise DomainError("scaled kernel arguments must be > 0")
    s = n ** (1 / theta)
    factor = {"second": math.exp(-y / s), "printed": math.exp(x / s), "none": 1.0}[gauge]
    return (x / s) ** alpha * factor * kernel_laguerre(alpha, theta, n, x / s, y / s) / s


def scaled_kernel_hermite(alpha: float, theta: float, n: int, x: float, y: float) -> float:
    """
    Bulk scaled Hermite kernel (1/s) |x/s|^alpha e^-(y/s)^2 K_N(x/s, y/s), s = (N/2)^(1/(2 theta)).

    Odd N is accepted with M = N/2.
    """
    check_parameters(alpha, theta, n)
    if x == 0 and alpha < 0:
        raise DomainError("x = 0 is outside the domain for alpha < 0")
    s = (n / 2) ** (1 / (2 * theta))
    weight = abs(x / s) ** alpha * math.exp(-(y / s) ** 2)
    return weight * kernel_hermite(alpha, theta, n, x / s, y / s) / s


def scaled_kernel(spec: EnsembleSpec, x: float, y: float) -> float:
    if spec.family == "jacobi":
        return scaled_kernel_jacobi(spec.alpha, spec.theta, spec.n_points, x, y)
    if spec.family == "laguerre":
        return scaled_kernel_laguerre(spec.alpha, spec.theta, spec.n_points, x, y)
    return scaled_kernel_hermite(spec.alpha, spec.theta, spec.n_points, x, y)


def jacobi_limit_oracle(p: LimitKernelParams, x: float, y: float,
                        config: Optional[SeriesConfig] = None) -> float:
    return x ** p.alpha * limit_kernel(p, x, y, config=config)


def laguerre_limit_oracle(p: LimitKernelParams, x: float, y: float,
                          config: Optional[SeriesConfig] = None) -> float:
    """x^alpha K(y, x): the Laguerre kernel converges with its arguments transposed."""
    return x ** p.alpha * limit_kernel(p, y, x, config=config)


def hermite_limit_oracle(p: LimitKernelParams, x: float, y: float,
                         config: Optional[SeriesConfig] = None) -> float:
    """|x|^alpha [K_even(y^2, x^2) + x^theta y K_odd(y^2, x^2)], the transposed parity parts."""
    value = limit_kernel(p.hermite_even(), y * y, x * x, config=config)
    if x != 0 and y != 0:
        value += signed_power(x, p.theta) * y * limit_kernel(p.hermite_odd(), y * y, x * x, config=config)
    return abs(x) ** p.alpha * value


LIMIT_ORACLES: Dict[str, Callable] = {
    "jacobi": jacobi_limit_oracle,
    "laguerre": laguerre_limit_oracle,
    "hermite": hermite_limit_oracle,
}


def _power_sum(log_coeffs: np.ndarray, x: float) -> float:
    """sum_m exp(log_coeffs[m]) (-x)^m in signed-log form."""
    m = np.arange(len(log_coeffs))
    if x == 0:
        return float(math.exp(log_coeffs[0]))
    log_terms = log_coeffs + m * math.log(abs(x))
    signs = np.where((m % 2 == 1) & (x > 0), -1.0, 1.0)
    return exp_sum(signs, log_terms)


def component_A_raw(alpha: float, theta: float, n: int, x: float) -> float:
    """A_N(x) = sum_k ((k+alpha)/theta)_N (-x)^(k-1) / ((k-1)! (N-k)!)."""
    check_parameters(alpha, theta, n)
    k = np.arange(1, n + 1, dtype=float)
    log_fact = log_factorials(n)
    return _power_sum(log_rising((k + alpha) / theta, n) - log_fact - log_fact[::-1], x)


def component_B_raw(alpha: float, theta: float, n: int, y: float) -> float:
    """B_N(y) = sum_l (theta(l-1)+alpha+1)_N (-y)^(l-1) / ((l-1)! (N-l)!)."""
    check_parameters(alpha, theta, n)
    l = np.arange(n, dtype=float)
    log_fact = log_factorials(n)
    return _power_sum(log_rising(theta * l + alpha + 1, n) - log_fact - log_fact[::-1], y)


def component_C_raw(alpha: float, theta: float, n: int, x: float) -> float:
    """C_N(x) = sum_k Gamma(N) (-x)^k / (Gamma(alpha+theta k+1) k! (N-k-1)!)."""
    check_parameters(alpha, theta, n)
    k = np.arange(n, dtype=float)
    log_fact = log_factorials(n)
    log_coeffs = (special.gammaln(n) - special.gammaln(alpha + theta * k + 1)
                  - log_fact - log_fact[::-1])
    return _power_sum(log_coeffs, x)


def component_D_raw(alpha: float, theta: float, n: int, y: float) -> float:
    """D_N(y) = sum_i Gamma(N+c_i) (-y)^i / (Gamma(N) Gamma(c_i) i!), c_i = (i+alpha+1)/theta."""
    check_parameters(alpha, theta, n)
    c = (np.arange(n, dtype=float) + alpha + 1) / theta
    return _power_sum(log_rising(c, n) - special.gammaln(n) - log_factorials(n), y)


def _component_scaling(name: str, alpha: float, theta: float, n: int):
    """(raw function, argument scale, prefactor, Wright parameters of the limit)."""
    a1, b1 = (alpha + 1) / theta, 1 / theta
    a2, b2 = alpha + 1, theta
    table = {
        "A": (component_A_raw, n ** (1 + 1 / theta), n ** (-a1), (a1, b1)),
        # B_N enters the kernel at the theta-th power of the scaled argument
        "B": (component_B_raw, n ** (1 + theta), n ** (-a2), (a2, b2)),
        # Gamma(N)/(N-k-1)! grows like N^k
        "C": (component_C_raw, float(n), 1.0, (a2, b2)),
        "D": (component_D_raw, n ** (1 / theta), n ** (-a1), (a1, b1)),
    }
    if name not in table:
        raise DomainError(f"component must be one of {', '.join(COMPONENTS)}")
    return table[name]


def scaled_component(name: str, alpha: float, theta: float, n: int, x: float) -> float:
    raw, scale, prefactor, _ = _component_scaling(name, alpha, theta, n)
    return prefactor * raw(alpha, theta, n, x / scale)


def component_limit(name: str, alpha: float, theta: float, x: float,
                    config: Optional[SeriesConfig] = None) -> float:
    """Wright-Bessel limit J_{a,b}(x) of a scaled component."""
    _, _, _, (a, b) = _component_scaling(name, alpha, theta, 1)
    return wright_bessel(a, b, x, config)


def component_A(alpha: float, theta: float, n: int, x: float) -> float:
    """N^(-(alpha+1)/theta) A_N(x / N^(1+1/theta)), tends to J_{(alpha+1)/theta, 1/theta}(x)."""
    return scaled_component("A", alpha, theta, n, x)


def component_B(alpha: float, theta: float, n: int, y: float) -> float:
    """N^(-(alpha+1)) B_N(y / N^(1+theta)), tends to J_{alpha+1, theta}(y)."""
    return scaled_component("B", alpha, theta, n, y)


def component_C(alpha: float, theta: float, n: int, x: float) -> float:
    """C_N(x / N), tends to J_{alpha+1, theta}(x)."""
    return scaled_component("C", alpha, theta, n, x)


def component_D(alpha: float, theta: float, n: int, y: float) -> float:
    """N^(-(alpha+1)/theta) D_N(y / N^(1/theta)), tends to J_{(alpha+1)/theta, 1/theta}(y)."""
    return scaled_component("D", alpha, theta, n, y)


def component_study(name: str, alpha: float, theta: float, n_list: Sequence[int],
                    points: Sequence[float], config: Optional[SeriesConfig] = None) -> pd.DataFrame:
    """
    Scaled component against its limit at each point and N.

    Args:
        name (str): "A", "B", "C" or "D"
        alpha (float): Weight exponent, > -1
        theta (float): Power parameter, > 0
        n_list (list): Values of N
        points (list): Evaluation points

    Returns:
        pandas.DataFrame: Columns component, N, x, scaled_value, limit_value, abs_error
    """
    limits = {x: component_limit(name, alpha, theta, x, config) for x in points}
    rows = []
    for n in n_list:
        for x in points:
            value = scaled_component(name, alpha, theta, int(n), x)
            rows.append({"component": name, "N": int(n), "x": x, "scaled_value": value,
                         "limit_value": limits[x], "abs_error": abs(value - limits[x])})
    return pd.DataFrame(rows)


def _warm_tables(spec: EnsembleSpec, n: int):
    """Build cached coefficient tables before worker threads share them."""
    if spec.family == "jacobi":
        jacobi_coeffs(float(spec.alpha), float(spec.theta), n)
    elif spec.family == "laguerre":
        laguerre_kernel_table(float(spec.alpha), float(spec.theta), n)
    else:
        laguerre_kernel_table((spec.alpha - 1) / 2, float(spec.theta), (n + 1) // 2)
        if n > 1:
            laguerre_kernel_table((spec.alpha + spec.theta) / 2, float(spec.theta), n // 2)


def convergence_study(spec: EnsembleSpec, grid: Sequence[Tuple[float, float]], n_list: Sequence[int],
                      config: Optional[SeriesConfig] = None, workers: Optional[int] = None
                      ) -> ConvergenceReport:
    """
    Compare the scaled finite-N kernel of the ensemble's family with its limit.

    Args:
        spec (EnsembleSpec): Family and parameters; spec.n_points is ignored
        grid (list): (x, y) points
        n_list (list): Ascending values of N (even for Hermite)
        config (SeriesConfig): Tolerances for the limit kernel
        workers (int): Thread count, None for the executor default

    Returns:
        ConvergenceReport: Values, errors and the monotone flag
    """
    grid = [(float(x), float(y)) for x, y in grid]
    n_list = [int(n) for n in n_list]
    if not grid:
        raise DomainError("grid must not be empty")
    if not n_list or any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise DomainError("N list must be non-empty and strictly ascending")
    if spec.family == "hermite" and any(n % 2 for n in n_list):
        raise DomainError("Hermite convergence studies use even N")
    p = LimitKernelParams(spec.alpha, spec.theta)
    oracle = LIMIT_ORACLES[spec.family]
    for n in n_list:
        _warm_tables(spec, n)

    def finite(task):
        n, (x, y) = task
        return scaled_kernel(spec.with_n(n), x, y)

    tasks = [(n, point) for n in n_list for point in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        limit_values = list(pool.map(lambda point: oracle(p, point[0], point[1], config), grid))
        finite_values = list(pool.map(finite, tasks))
    report = ConvergenceReport(spec.family, spec.alpha, spec.theta, grid, n_list,
                               np.array(finite_values).reshape(len(n_list), len(grid)),
                               np.array(limit_values))
    logger.info("%s convergence: sup errors %s", spec.family, np.array2string(report.sup_errors(), precision=3))
    return report


def limit_determinant(p: LimitKernelParams, points: Sequence[float], kind: str = "hard_edge",
                      config: Optional[SeriesConfig] = None, digits: Optional[int] = None) -> float:
    """
    prod w(x_i) det[K(x_i, x_j)] for the hard-edge (x^alpha) or bulk (|x|^alpha) limit kernel.

    With `digits` the entries and the determinant are computed by mpmath at
    that many significant digits.
    """
    if kind not in ("hard_edge", "bulk"):
        raise DomainError("kind must be hard_edge or bulk")
    if digits is not None:
        return float(_extended_determinant(p.alpha, p.theta, points, kind, digits))
    points = [float(x) for x in points]
    if kind == "hard_edge":
        matrix = [[limit_kernel(p, xi, xj, config=config) for xj in points] for xi in points]
        weights = math.prod(x ** p.alpha for x in points)
    else:
        matrix = [[limit_kernel_hermite(p, xi, xj, config=config) for xj in points] for xi in points]
        weights = math.prod(abs(x) ** p.alpha for x in points)
    return weights * float(linalg.det(np.array(matrix)))


def _extended_determinant(alpha, theta, points, kind: str, digits: int):
    """Weighted limit determinant as an mpmath number; points may already be mpmath numbers."""
    if kind not in ("hard_edge", "bulk"):
        raise DomainError("kind must be hard_edge or bulk")
    entry = limit_kernel_extended if kind == "hard_edge" else limit_kernel_hermite_extended
    with mpmath.workdps(digits + EXTENDED_GUARD_DIGITS):
        points = [mpmath.mpf(x) for x in points]
        matrix = mpmath.matrix([[entry(alpha, theta, xi, xj, digits) for xj in points] for xi in points])
        weights = mpmath.fprod(abs(x) ** alpha for x in points)
        return weights * mpmath.det(matrix)


def symmetry_residual(p: LimitKernelParams, points: Sequence[float], kind: str = "hard_edge",
                      config: Optional[SeriesConfig] = None, digits: Optional[int] = None) -> float:
    """
    Relative gap between a limit determinant and its image under the parameter symmetry.

    The image uses u_i = x_i^theta (signed in the bulk), parameters
    symmetry_map(alpha, theta) and the Jacobian prod theta |x_i|^(theta-1).
    Kernel matrices of nearby points are nearly singular, so in double
    precision the gap is only as small as cond * 1e-16; `digits` moves the
    whole comparison, image points and parameters included, into mpmath.
    """
    if digits is not None:
        with mpmath.workdps(digits + EXTENDED_GUARD_DIGITS):
            alpha, theta = mpmath.mpf(p.alpha), mpmath.mpf(p.theta)
            xs = [mpmath.mpf(float(x)) for x in points]
            u = [mpmath.sign(x) * abs(x) ** theta for x in xs]
            jacobian = mpmath.fprod(theta * abs(x) ** (theta - 1) for x in xs)
            original = _extended_determinant(alpha, theta, xs, kind, digits)
            mapped = _extended_determinant((alpha + 1) / theta - 1, 1 / theta, u, kind, digits) * jacobian
            return float(abs(mapped - original) / abs(original))
    points = [float(x) for x in points]
    image = LimitKernelParams(*symmetry_map(p.alpha, p.theta))
    u = [signed_power(x, p.theta) for x in points]
    jacobian = math.prod(p.theta * abs(x) ** (p.theta - 1) for x in points)
    original = limit_determinant(p, points, kind, config)
    mapped = limit_determinant(image, u, kind, config) * jacobian
    return abs(mapped - original) / max(abs(original), 1e-300)


def finite_symmetry_gap(alpha: float, theta: float, points: Sequence[float], n: int = 3) -> float:
    """
    Relative gap of the same symmetry for the finite-N Laguerre ensemble.

    Finite ensembles do not have the symmetry, so this is expected to be large
    whenever theta != 1.
    """
    alpha_image, theta_image = symmetry_map(alpha, theta)
    original = correlation(EnsembleSpec("laguerre", alpha, theta, n), points)
    u = [x ** theta for x in points]
    jacobian = math.prod(theta * x ** (theta - 1) for x in points)
    mapped = correlation(EnsembleSpec("laguerre", alpha_image, theta_image, n), u) * jacobian
    return abs(mapped - original) / max(abs(original), abs(mapped), 1e-300)
