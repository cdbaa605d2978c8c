"""Gaussian free field pinned to zero at the base vertex."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import SolverFailure
from .network import ElectricalNetwork
from .rng import DEFAULT_CHUNK, SeedLike, run_chunks
from .stats import Bound


@dataclass(frozen=True, eq=False)
class GffModel:
    """Covariance of the field on the free vertices and its Cholesky factor.

    ``covariance[i, j]`` refers to ``network.free[i]`` and ``network.free[j]``;
    it is the inverse of the Laplacian grounded at the base vertex.
    """

    network: ElectricalNetwork
    covariance: np.ndarray
    factor: np.ndarray

    @property
    def n(self) -> int:
        return self.network.n

    @cached_property
    def full_covariance(self) -> np.ndarray:
        """``n x n`` covariance including the zero row/column of the base."""
        return self.network.green

    @cached_property
    def variances(self) -> np.ndarray:
        return np.diag(self.full_covariance).copy()

    @property
    def sigma2_max(self) -> float:
        return float(self.variances.max()) if self.n > 1 else 0.0

    def increment_variance(self) -> np.ndarray:
        """``E(eta_x - eta_y)^2`` for all pairs, computed from the covariance."""
        S = self.full_covariance
        d = np.diag(S)
        return d[:, None] + d[None, :] - 2.0 * S

    def restrict(self, vertices) -> np.ndarray:
        idx = np.asarray(vertices, dtype=np.int64)
        return self.full_covariance[np.ix_(idx, idx)]


@dataclass(frozen=True)
class GaussMaxEstimate:
    M_hat: float
    std_error: float
    n_samples: int
    R: float
    sigma2_max: float


def build_gff(net: ElectricalNetwork) -> GffModel:
    free = net.free
    cov = net.green[np.ix_(free, free)].copy()
    if len(free):
        try:
            chol = np.linalg.cholesky(cov)
        except np.linalg.LinAlgError as exc:
            raise SolverFailure(f"GFF covariance is not positive definite: {exc}") from exc
    else:
        chol = np.zeros((0, 0))
    cov.setflags(write=False)
    chol.setflags(write=False)
    return GffModel(network=net, covariance=cov, factor=chol)


def sample_gff(model: GffModel, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Exact draw(s) of the field; coordinate ``base`` is identically zero.

    Returns a vector of length ``n`` or, with ``size``, an array ``(size, n)``.
    """
    net = model.network
    k = 1 if size is None else int(size)
    out = np.zeros((k, net.n))
    if len(net.free):
        z = rng.standard_normal((k, len(net.free)))
        out[:, net.free] = z @ model.factor.T
    return out[0] if size is None else out


def sample_gff_many(
    model: GffModel, n_samples: int, seed: SeedLike, *, workers: int = 1, chunk_size: int = DEFAULT_CHUNK
) -> np.ndarray:
    """``n_samples`` draws using the chunked stream contract (rows are samples)."""
    parts = run_chunks(lambda count, rng: sample_gff(model, rng, count), n_samples, seed,
                       chunk_size=chunk_size, workers=workers)
    return np.concatenate(parts, axis=0) if parts else np.zeros((0, model.n))


def estimate_M(
    model: GffModel, n_samples: int, seed: SeedLike, *, workers: int = 1, chunk_size: int = DEFAULT_CHUNK
) -> GaussMaxEstimate:
    """Monte Carlo estimate of ``E max_x eta_x`` (the max includes the base, where eta is 0)."""
    if n_samples < 2:
        raise ValueError("estimate_M needs at least 2 samples")

    def chunk(count, rng):
        m = sample_gff(model, rng, count).max(axis=1)
        return np.array([m.sum(), np.square(m).sum()])

    sums = np.sum(run_chunks(chunk, n_samples, seed, chunk_size=chunk_size, workers=workers), axis=0)
    mean = sums[0] / n_samples
    var = max(sums[1] - n_samples * mean * mean, 0.0) / (n_samples - 1)
    return GaussMaxEstimate(
        M_hat=float(mean),
        std_error=math.sqrt(var / n_samples),
        n_samples=int(n_samples),
        R=model.network.max_resistance,
        sigma2_max=model.sigma2_max,
    )


def gaussian_max_concentration_bound(sigma2: float, alpha: float):
    """``2 exp(-alpha^2 / (2 sigma2))`` for ``|max - E max| >= alpha``."""
    if sigma2 <= 0 or alpha <= 0:
        raise ValueError("sigma2 and alpha must be positive")
    return Bound(2.0 * math.exp(-alpha * alpha / (2.0 * sigma2)))
