"""
Metropolis Sampler
Single-site random-walk Metropolis sampling of the finite-N joint densities,
empirical one- and two-point correlations, and sample file I/O.
"""

import logging
import math
import struct
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .errors import DomainError
from .kernels import EnsembleSpec, correlation, one_point

logger = logging.getLogger(__name__)

TARGET_ACCEPTANCE = (0.3, 0.5)
SCALE_LIMITS = (1e-3, 50.0)
BLOCK_SWEEPS = 512
BATCHES_PER_CHAIN = 20
MAX_RHO2_BINS = 15

BINARY_MAGIC = b"BIOE"
BINARY_VERSION = 1
# magic, version u16, N u32, count u64, chains u32
BINARY_HEADER = struct.Struct("<4sHIQI")


@dataclass(frozen=True)
class ChainConfig:
    """Sweep counts and seed of a sampling run."""

    steps: int
    burn_in: int
    thin: int
    proposal_scale: float
    seed: int
    chains: int = 4
    adapt_interval: int = 100

    def __post_init__(self):
        if self.steps < 1:
            raise DomainError("steps must be a positive integer")
        if not 0 <= self.burn_in < self.steps:
            raise DomainError("burn_in must satisfy 0 <= burn_in < steps")
        if self.thin < 1:
            raise DomainError("thin must be >= 1")
        if not self.proposal_scale > 0:
            raise DomainError("proposal_scale must be > 0")
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError("seed must be an unsigned 64-bit integer")
        if self.chains < 1:
            raise DomainError("chains must be >= 1")
        if self.adapt_interval < 1:
            raise DomainError("adapt_interval must be >= 1")

    @property
    def kept_per_chain(self) -> int:
        return -(-(self.steps - self.burn_in) // self.thin)

    def as_dict(self) -> dict:
        return {"steps": self.steps, "burn_in": self.burn_in, "thin": self.thin,
                "proposal_scale": self.proposal_scale, "seed": self.seed,
                "chains": self.chains, "adapt_interval": self.adapt_interval}


@dataclass
class SampleBatch:
    """Kept configurations, shape (chains, kept, N), each sorted ascending."""

    spec: EnsembleSpec
    config: ChainConfig
    configurations: np.ndarray
    steps: np.ndarray
    acceptance_rate: float
    chain_acceptance: np.ndarray = field(default_factory=lambda: np.zeros(0))
    proposal_scales: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        if self.configurations.ndim != 3 or self.configurations.shape[2] != self.spec.n_points:
            raise DomainError("configurations must have shape (chains, kept, N)")
        if not 0 <= self.acceptance_rate <= 1:
            raise DomainError("acceptance rate must lie in [0, 1]")
        if not np.all(_inside(self.spec, self.configurations)):
            raise DomainError("configuration outside the ensemble interval")

    @property
    def points(self) -> np.ndarray:
        """All configurations as a (count, N) array, chain-major."""
        return self.configurations.reshape(-1, self.spec.n_points)

    @property
    def count(self) -> int:
        return self.configurations.shape[0] * self.configurations.shape[1]

    def to_frame(self) -> pd.DataFrame:
        return to_frame(self)


def _inside(spec: EnsembleSpec, x: np.ndarray) -> np.ndarray:
    if spec.family == "jacobi":
        return (x > 0) & (x < 1)
    if spec.family == "laguerre":
        return x > 0
    finite = np.isfinite(x)
    return finite if spec.alpha >= 0 else finite & (x != 0)


def _log_weight(spec: EnsembleSpec, x: np.ndarray) -> np.ndarray:
    """log w(x), -inf outside the interval."""
    x = np.asarray(x, dtype=float)
    inside = _inside(spec, x)
    safe = np.where(inside, x, 0.5)
    if spec.family == "jacobi":
        value = spec.alpha * np.log(safe)
    elif spec.family == "laguerre":
        value = spec.alpha * np.log(safe) - safe
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            log_abs = np.log(np.abs(safe))
            value = np.where((safe == 0) & (spec.alpha == 0), 0.0, spec.alpha * log_abs) - safe * safe
    with np.errstate(invalid="ignore"):
        return np.where(inside & ~np.isnan(value), value, -np.inf)


def _powers(spec: EnsembleSpec, x: np.ndarray) -> np.ndarray:
    return np.sign(x) * np.abs(x) ** spec.theta


def log_density(spec: EnsembleSpec, points: Sequence[float]) -> float:
    """
    Unnormalized log joint density of the ensemble.

    sum log w(x_i) + sum_{i<j} [log|x_i - x_j| + log|x_i^theta - x_j^theta|];
    both differences share a sign, so their product is nonnegative.

    Args:
        spec (EnsembleSpec): Ensemble with N = len(points)
        points (list): N points in the interval

    Returns:
        float: Log density, -inf for coincident points
    """
    x = np.asarray(points, dtype=float)
    if x.shape != (spec.n_points,):
        raise DomainError(f"expected {spec.n_points} points")
    if not np.all(_inside(spec, x)):
        raise DomainError(f"points must lie inside the {spec.family} interval")
    p = _powers(spec, x)
    upper = np.triu_indices(len(x), 1)
    gaps = np.abs(x[:, None] - x[None, :])[upper] * np.abs(p[:, None] - p[None, :])[upper]
    if np.any(gaps == 0):
        return -math.inf
    return float(np.sum(_log_weight(spec, x)) + np.sum(np.log(gaps)))


def log_density_delta(spec: EnsembleSpec, points: Sequence[float], index: int, value: float) -> float:
    """Change of log_density when points[index] is replaced by value."""
    x = np.asarray(points, dtype=float)
    others = np.delete(x, index)
    others_p = _powers(spec, others)
    new_p, old_p = _powers(spec, np.array([value, x[index]]))
    with np.errstate(divide="ignore"):
        new = (float(_log_weight(spec, np.array([value]))[0])
               + np.sum(np.log(np.abs(value - others))) + np.sum(np.log(np.abs(new_p - others_p))))
        old = (float(_log_weight(spec, x[index:index + 1])[0])
               + np.sum(np.log(np.abs(x[index] - others))) + np.sum(np.log(np.abs(old_p - others_p))))
    return float(new - old)


def _initial_state(spec: EnsembleSpec, chains: int) -> np.ndarray:
    n = spec.n_points
    i = np.arange(n, dtype=float)
    if spec.family == "jacobi":
        start = (i + 1) / (n + 1)
    elif spec.family == "laguerre":
        start = i + 1.0
    else:
        start = (i - (n - 1) / 2) / math.sqrt(n) + 0.05
    return np.tile(start, (chains, 1))


def _propose(spec: EnsembleSpec, x: np.ndarray, step: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Proposal and log Hastings correction."""
    if spec.family == "jacobi":
        # reflection at 0 and 1 keeps the walk symmetric
        folded = np.abs(x + step) % 2.0
        return np.where(folded > 1, 2.0 - folded, folded), np.zeros_like(x)
    if spec.family == "laguerre":
        return x * np.exp(step), step
    return x + step, np.zeros_like(x)


def _chain_generators(config: ChainConfig):
    return [np.random.Generator(np.random.Philox(np.random.SeedSequence(config.seed, spawn_key=(c,))))
            for c in range(config.chains)]


def sample(spec: EnsembleSpec, config: Optional[ChainConfig] = None) -> SampleBatch:
    """
    Run config.chains independent Metropolis chains on the joint density of spec.

    Each sweep proposes a move for every coordinate in turn. The proposal
    scale adapts toward 30-50% acceptance during burn-in and is frozen
    afterward.

    Args:
        spec (EnsembleSpec): Ensemble
        config (ChainConfig): Sweep counts and seed, defaults.json values when omitted

    Returns:
        SampleBatch: Kept configurations and acceptance statistics
    """
    if config is None:
        from .settings import default_chain_config
        config = default_chain_config()
    n = spec.n_points
    chains = config.chains
    generators = _chain_generators(config)
    x = _initial_state(spec, chains)
    p = _powers(spec, x)
    log_w = _log_weight(spec, x)
    scales = np.full(chains, float(config.proposal_scale))
    window_accepted = np.zeros(chains)
    window_proposed = 0
    kept_accepted = np.zeros(chains)
    kept_proposed = 0
    kept = config.kept_per_chain
    configurations = np.empty((chains, kept, n))
    kept_steps = np.empty(kept, dtype=np.int64)
    record = 0
    mask = ~np.eye(n, dtype=bool)

    for block_start in range(0, config.steps, BLOCK_SWEEPS):
        size = min(BLOCK_SWEEPS, config.steps - block_start)
        normals = np.stack([g.standard_normal((size, n)) for g in generators])
        log_u = np.log(np.stack([g.random((size, n)) for g in generators]))
        for b in range(size):
            sweep = block_start + b
            burning = sweep < config.burn_in
            for i in range(n):
                old = x[:, i]
                new, hastings = _propose(spec, old, scales * normals[:, b, i])
                new_p = _powers(spec, new)
                new_w = _log_weight(spec, new)
                others = mask[i]
                with np.errstate(divide="ignore", invalid="ignore"):
                    gain = np.sum(np.log(np.abs(new[:, None] - x[:, others]))
                                  + np.log(np.abs(new_p[:, None] - p[:, others]))
                                  - np.log(np.abs(old[:, None] - x[:, others]))
                                  - np.log(np.abs(p[:, i][:, None] - p[:, others])), axis=1)
                    delta = new_w - log_w[:, i] + gain + hastings
                accept = np.isfinite(new_w) & (log_u[:, b, i] < np.nan_to_num(delta, nan=-np.inf))
                x[:, i] = np.where(accept, new, old)
                p[:, i] = np.where(accept, new_p, p[:, i])
                log_w[:, i] = np.where(accept, new_w, log_w[:, i])
                if burning:
                    window_accepted += accept
                else:
                    kept_accepted += accept
            if burning:
                window_proposed += n
                if (sweep + 1) % config.adapt_interval == 0 or sweep + 1 == config.burn_in:
                    rate = window_accepted / window_proposed
                    scales = np.where(rate < TARGET_ACCEPTANCE[0], scales * 0.8,
                                      np.where(rate > TARGET_ACCEPTANCE[1], scales * 1.25, scales))
                    scales = np.clip(scales, *SCALE_LIMITS)
                    if sweep + 1 == config.burn_in:
                        outside = (rate < TARGET_ACCEPTANCE[0]) | (rate > TARGET_ACCEPTANCE[1])
                        if np.any(outside):
                            logger.warning("proposal scale frozen with acceptance %s outside %s",
                                           np.array2string(rate, precision=2), TARGET_ACCEPTANCE)
                    window_accepted[:] = 0
                    window_proposed = 0
            else:
                kept_proposed += n
                if (sweep - config.burn_in) % config.thin == 0:
                    configurations[:, record, :] = np.sort(x, axis=1)
                    kept_steps[record] = sweep
                    record += 1

    chain_acceptance = kept_accepted / max(kept_proposed, 1)
    rate = float(np.mean(chain_acceptance))
    logger.info("%s sampling: %d chains x %d kept, acceptance %.3f",
                spec.family, chains, kept, rate)
    return SampleBatch(spec, config, configurations, kept_steps, rate, chain_acceptance, scales)


@dataclass
class Histogram:
    """Binned density estimate; density and sigma are 1-D or 2-D."""

    edges: np.ndarray
    density: np.ndarray
    sigma: np.ndarray
    counts: np.ndarray

    @property
    def centers(self) -> np.ndarray:
        return (self.edges[:-1] + self.edges[1:]) / 2

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)


def _check_batch(batch: SampleBatch):
    if batch.count == 0:
        raise DomainError("sample batch is empty")


def _default_range(batch: SampleBatch) -> Tuple[float, float]:
    if batch.spec.family == "jacobi":
        return 0.0, 1.0
    points = batch.points
    return float(points.min()), float(points.max())


def _batch_slices(batch: SampleBatch):
    kept = batch.configurations.shape[1]
    size = max(kept // BATCHES_PER_CHAIN, 1)
    for c in range(batch.configurations.shape[0]):
        for start in range(0, kept - size + 1, size):
            yield batch.configurations[c, start:start + size]


def _combined_sigma(batch_estimates: np.ndarray, poisson: np.ndarray, method: str) -> np.ndarray:
    if method == "poisson" or len(batch_estimates) < 2:
        return poisson
    batch_means = np.std(batch_estimates, axis=0, ddof=1) / math.sqrt(len(batch_estimates))
    return np.maximum(batch_means, poisson)


def empirical_rho1(batch: SampleBatch, bins: int = 20, range: Optional[Tuple[float, float]] = None,
                   method: str = "batch") -> Histogram:
    """
    Histogram estimate of the one-point density; it integrates to about N.

    Args:
        batch (SampleBatch): Samples
        bins (int): Number of bins, >= 5
        range (tuple): Histogram range, the interval (Jacobi) or data span
        method (str): "batch" (max of batch-means and Poisson errors) or "poisson"

    Returns:
        Histogram: Density per bin with standard errors
    """
    _check_batch(batch)
    if bins < 5:
        raise DomainError("rho1 needs at least 5 bins")
    if method not in ("batch", "poisson"):
        raise DomainError("method must be batch or poisson")
    range = range or _default_range(batch)
    counts, edges = np.histogram(batch.points.ravel(), bins=bins, range=range)
    scale = batch.count * np.diff(edges)
    estimates = np.array([np.histogram(block.ravel(), bins=edges)[0] / (len(block) * np.diff(edges))
                          for block in _batch_slices(batch)])
    poisson = np.sqrt(counts) / scale
    return Histogram(edges, counts / scale, _combined_sigma(estimates, poisson, method), counts)


def _ordered_pairs(configurations: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    n = configurations.shape[-1]
    i, j = np.nonzero(~np.eye(n, dtype=bool))
    return configurations[:, i].ravel(), configurations[:, j].ravel()


def empirical_rho2(batch: SampleBatch, bins: int = 10, range: Optional[Tuple[float, float]] = None,
                   method: str = "batch") -> Histogram:
    """
    2-D histogram of ordered pairs i != j; integrates to about N(N-1).

    Args:
        batch (SampleBatch): Samples with N >= 2
        bins (int): Bins per axis, at most 15
        range (tuple): Range of both axes
        method (str): "batch" or "poisson"

    Returns:
        Histogram: density[a, b] over the square bins
    """
    _check_batch(batch)
    if batch.spec.n_points < 2:
        raise DomainError("rho2 needs N >= 2")
    if not 2 <= bins <= MAX_RHO2_BINS:
        raise DomainError(f"rho2 uses between 2 and {MAX_RHO2_BINS} bins per axis")
    if method not in ("batch", "poisson"):
        raise DomainError("method must be batch or poisson")
    range = range or _default_range(batch)
    first, second = _ordered_pairs(batch.points)
    counts, edges, _ = np.histogram2d(first, second, bins=bins, range=[range, range])
    area = np.outer(np.diff(edges), np.diff(edges))
    estimates = []
    for block in _batch_slices(batch):
        a, b = _ordered_pairs(block)
        estimates.append(np.histogram2d(a, b, bins=[edges, edges])[0] / (len(block) * area))
    poisson = np.sqrt(counts) / (batch.count * area)
    density = counts / (batch.count * area)
    return Histogram(edges, density, _combined_sigma(np.array(estimates), poisson, method), counts)


def predicted_rho1(spec: EnsembleSpec, edges: Sequence[float], nodes: int = 5) -> np.ndarray:
    """Bin averages of w(x) K_N(x, x) by Gauss-Legendre sub-sampling."""
    edges = np.asarray(edges, dtype=float)
    t, w = np.polynomial.legendre.leggauss(nodes)
    values = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        xs = (hi - lo) / 2 * t + (hi + lo) / 2
        values.append(0.5 * sum(wk * one_point(spec, xk) for wk, xk in zip(w, xs)))
    return np.array(values)


def predicted_rho2(spec: EnsembleSpec, edges: Sequence[float], nodes: int = 3) -> np.ndarray:
    """Bin averages of w(x)w(y) det[K_N] over square bins, nodes x nodes per bin."""
    edges = np.asarray(edges, dtype=float)
    t, w = np.polynomial.legendre.leggauss(nodes)
    bins = len(edges) - 1
    values = np.empty((bins, bins))
    mids = [((hi - lo) / 2 * t + (hi + lo) / 2) for lo, hi in zip(edges[:-1], edges[1:])]
    for a in range(bins):
        for b in range(bins):
            values[a, b] = 0.25 * sum(w[r] * w[s] * correlation(spec, [mids[a][r], mids[b][s]])
                                      for r in range(nodes) for s in range(nodes))
    return values


def transition_counts(batch: SampleBatch, edges: Sequence[float]) -> np.ndarray:
    """
    Counts of moves between bins over consecutive kept states of N = 1 chains.

    A reversible chain gives a matrix symmetric up to Monte Carlo error.
    """
    if batch.spec.n_points != 1:
        raise DomainError("transition counts are defined for N = 1")
    edges = np.asarray(edges, dtype=float)
    bins = len(edges) - 1
    matrix = np.zeros((bins, bins), dtype=np.int64)
    for chain in batch.configurations[:, :, 0]:
        states = np.clip(np.searchsorted(edges, chain, side="right") - 1, 0, bins - 1)
        np.add.at(matrix, (states[:-1], states[1:]), 1)
    return matrix


def to_frame(batch: SampleBatch) -> pd.DataFrame:
    """Columnar view: chain, step, x_1..x_N."""
    chains, kept, n = batch.configurations.shape
    frame = pd.DataFrame(batch.points, columns=[f"x_{i + 1}" for i in range(n)])
    frame.insert(0, "step", np.tile(batch.steps, chains))
    frame.insert(0, "chain", np.repeat(np.arange(chains), kept))
    return frame


def write_csv(batch: SampleBatch, path: str):
    to_frame(batch).to_csv(path, index=False)


def _record_dtype(n: int) -> np.dtype:
    return np.dtype([("chain", "<u4"), ("step", "<u8"), ("x", "<f8", (n,))])


def write_binary(batch: SampleBatch, path: str):
    """
    Write the compact container: header "BIOE", version, N, count, chains,
    then (u32 chain, u64 step, N x f64) records, little-endian.
    """
    chains, kept, n = batch.configurations.shape
    records = np.empty(chains * kept, dtype=_record_dtype(n))
    records["chain"] = np.repeat(np.arange(chains), kept)
    records["step"] = np.tile(batch.steps, chains)
    records["x"] = batch.points
    with open(path, "wb") as f:
        f.write(BINARY_HEADER.pack(BINARY_MAGIC, BINARY_VERSION, n, len(records), chains))
        f.write(records.tobytes())


def read_binary(path: str) -> Tuple[dict, pd.DataFrame]:
    """Read a container written by write_binary; returns (header, frame)."""
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < BINARY_HEADER.size:
        raise DomainError("file too short for a sample container")
    magic, version, n, count, chains = BINARY_HEADER.unpack_from(data)
    if magic != BINARY_MAGIC:
        raise DomainError("not a sample container (bad magic bytes)")
    if version != BINARY_VERSION:
        raise DomainError(f"unsupported container version {version}")
    records = np.frombuffer(data, dtype=_record_dtype(n), count=count, offset=BINARY_HEADER.size)
    frame = pd.DataFrame(records["x"], columns=[f"x_{i + 1}" for i in range(n)])
    frame.insert(0, "step", records["step"].astype(np.int64))
    frame.insert(0, "chain", records["chain"].astype(np.int64))
    header = {"version": version, "n_points": n, "count": count, "chains": chains}
    return header, frame
