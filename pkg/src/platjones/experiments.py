"""Random-braid experiments: output distributions, design moments, anti-concentration.

Every random quantity is drawn from a per-sample Philox stream keyed by
``(seed, 0, sample_index)``, so results do not depend on how samples are
split across workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .braid import BraidWord, design_length, random_braid
from .moments import MAX_MOMENT_DIM, exact_moment_gap, haar_moment
from .pathmodel import (
    DimensionError,
    PathBasis,
    apply_braid,
    cap_index,
    cap_state,
    enumerate_paths,
    generator_matrices,
)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "OutputDistribution",
    "Distance",
    "MomentReport",
    "AntiConcentrationRow",
    "AntiConcentrationReport",
    "PaleyZygmundReport",
    "sample_seed",
    "sample_braids",
    "output_distribution",
    "sample_outcomes",
    "l1_distance",
    "braid_amplitudes",
    "estimate_design_moments",
    "lemma2_bound",
    "anticoncentration_fraction",
    "paley_zygmund_check",
]

MAX_DISTRIBUTION_DIM = 2000


class ConfigError(ValueError):
    """Experiment parameters outside their admissible range."""


def sample_seed(seed: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(0, index))


def _aux_seed(seed: int, tag: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(1, tag))


def sample_braids(strands: int, length: int, count: int, seed: int, start: int = 0) -> list[BraidWord]:
    return [random_braid(strands, length, sample_seed(seed, i)) for i in range(start, start + count)]


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    k: int
    t: int = 2
    epsilon: float = 0.1
    gamma: float | None = 0.5
    lam: float = 1.0
    samples: int = 10_000
    seed: int = 0
    length: int | None = None
    beta: str = "cap"

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        if self.k < 3:
            raise ConfigError(f"k must be >= 3, got {self.k}")
        if self.t < 1:
            raise ConfigError(f"t must be >= 1, got {self.t}")
        if not 0 < self.epsilon < 1:
            raise ConfigError(f"epsilon must satisfy 0 < epsilon < 1, got {self.epsilon}")
        if self.gamma is not None and not 0 < self.gamma < 1 - self.epsilon:
            raise ConfigError(
                f"gamma must satisfy 0 < gamma < 1 - epsilon = {1 - self.epsilon:g}, got {self.gamma}"
            )
        if self.lam <= 0:
            raise ConfigError(f"lambda must be > 0, got {self.lam}")
        if self.samples < 1:
            raise ConfigError(f"samples must be >= 1, got {self.samples}")
        if self.length is not None and self.length < 0:
            raise ConfigError(f"length must be >= 0, got {self.length}")
        if self.beta not in ("cap", "random"):
            raise ConfigError(f"beta must be 'cap' or 'random', got {self.beta!r}")

    @property
    def strands(self) -> int:
        return 2 * self.n

    def resolved_length(self) -> int:
        if self.length is not None:
            return self.length
        return design_length(self.n, self.epsilon, self.t, self.lam)

    def basis(self) -> PathBasis:
        return enumerate_paths(self.n, self.k)

    def vectors(self) -> tuple[np.ndarray, np.ndarray]:
        """(alpha, beta): alpha is the cap state, beta the cap or a seeded random unit vector."""
        basis = self.basis()
        alpha = cap_state(basis).amplitudes
        if self.beta == "cap":
            return alpha, alpha.copy()
        rng = np.random.Generator(np.random.Philox(_aux_seed(self.seed, 0)))
        v = rng.normal(size=basis.dim) + 1j * rng.normal(size=basis.dim)
        return alpha, v / np.linalg.norm(v)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["lambda"] = out.pop("lam")
        return out


# ---------------------------------------------------------------------------
# output distributions


@dataclass(frozen=True, eq=False)
class OutputDistribution:
    basis: PathBasis
    probabilities: np.ndarray

    def labels(self) -> list[str]:
        return ["".join("U" if s > 0 else "D" for s in p) for p in self.basis.paths]


def output_distribution(b: BraidWord, k: int) -> OutputDistribution:
    """``Pr[x] = |<x| rho_k(b) |cap>|^2`` over path labels x."""
    basis = enumerate_paths(b.n, k)
    if basis.dim > MAX_DISTRIBUTION_DIM:
        raise DimensionError(f"dimension {basis.dim} exceeds {MAX_DISTRIBUTION_DIM}")
    out = apply_braid(b, cap_state(basis))
    return OutputDistribution(basis, out.probabilities())


def sample_outcomes(dist: OutputDistribution | np.ndarray, N: int, seed: int) -> np.ndarray:
    """Counts of N inverse-CDF draws from the exact probability vector."""
    if N < 1:
        raise ValueError("N must be >= 1")
    p = np.asarray(dist.probabilities if isinstance(dist, OutputDistribution) else dist, dtype=float)
    cdf = np.cumsum(p)
    cdf /= cdf[-1]
    rng = np.random.Generator(np.random.Philox(seed))
    draws = np.searchsorted(cdf, rng.random(N), side="right")
    # zero-probability tail entries can never be drawn
    draws = np.minimum(draws, np.flatnonzero(p > 0)[-1])
    return np.bincount(draws, minlength=len(p))


@dataclass(frozen=True)
class Distance:
    l1: float

    @property
    def tv(self) -> float:
        return self.l1 / 2


def l1_distance(p, q) -> Distance:
    p = np.asarray(p.probabilities if isinstance(p, OutputDistribution) else p, dtype=float)
    q = np.asarray(q.probabilities if isinstance(q, OutputDistribution) else q, dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"support mismatch: {p.shape} vs {q.shape}")
    return Distance(float(np.abs(p - q).sum()))


# ---------------------------------------------------------------------------
# amplitude ensembles


def _amplitude_chunk(args) -> np.ndarray:
    n, k, length, seed, start, count, alpha, beta = args
    basis = enumerate_paths(n, k)
    gens = generator_matrices(basis)
    alpha_c = np.conj(alpha)
    out = np.empty(count, dtype=complex)
    for j, b in enumerate(sample_braids(2 * n, length, count, seed, start)):
        v = beta
        for g in b.letters:
            v = gens[g] @ v
        out[j] = alpha_c @ v
    return out


def braid_amplitudes(cfg: ExperimentConfig, workers: int = 1) -> np.ndarray:
    """``<alpha| rho(b_i) |beta>`` for the cfg.samples random braids of the configured length."""
    length = cfg.resolved_length()
    alpha, beta = cfg.vectors()
    N = cfg.samples
    workers = max(1, min(workers, N))
    bounds = np.linspace(0, N, workers + 1).astype(int)
    jobs = [
        (cfg.n, cfg.k, length, cfg.seed, int(lo), int(hi - lo), alpha, beta)
        for lo, hi in zip(bounds[:-1], bounds[1:])
    ]
    if workers == 1:
        parts = [_amplitude_chunk(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_amplitude_chunk, jobs))
    return np.concatenate(parts)


def _gap_if_computable(cfg: ExperimentConfig, length: int) -> float | None:
    d = cfg.basis().dim
    if d**4 > MAX_MOMENT_DIM:
        return None
    return exact_moment_gap(cfg.n, cfg.k, 2, length)


@dataclass(frozen=True)
class MomentReport:
    k_moment: int
    empirical: float
    haar_value: float
    ratio: float
    stderr: float
    N: int
    seed: int
    d: int
    length: int

    def within_band(self, epsilon: float, n_stderr: float = 3.0) -> bool:
        """Empirical moment inside ``(1 +- epsilon) * haar`` up to ``n_stderr`` standard errors."""
        lo = (1 - epsilon) * self.haar_value - n_stderr * self.stderr
        hi = (1 + epsilon) * self.haar_value + n_stderr * self.stderr
        return lo <= self.empirical <= hi

    def to_dict(self) -> dict:
        return asdict(self)


def estimate_design_moments(cfg: ExperimentConfig, workers: int = 1, amplitudes: np.ndarray | None = None) -> list[MomentReport]:
    """Monte Carlo ``E |<alpha|rho(b)|beta>|^(2m)`` for m = 1..t against the Haar values."""
    length = cfg.resolved_length()
    d = cfg.basis().dim
    if amplitudes is None:
        amplitudes = braid_amplitudes(cfg, workers)
    z = np.abs(amplitudes) ** 2
    N = len(z)
    reports = []
    for m in range(1, cfg.t + 1):
        zm = z**m
        emp = float(zm.mean())
        se = float(zm.std(ddof=1) / math.sqrt(N)) if N > 1 else float("nan")
        haar = haar_moment(m, d)
        reports.append(MomentReport(m, emp, haar, emp / haar, se, N, cfg.seed, d, length))
    return reports


def lemma2_bound(epsilon: float, gamma: float) -> float:
    """``(1 - eps - gamma)^2 / (2 (1 + eps))``; 0 when gamma > 1 - eps (no guarantee)."""
    if gamma > 1 - epsilon:
        return 0.0
    return (1 - epsilon - gamma) ** 2 / (2 * (1 + epsilon))


@dataclass(frozen=True)
class AntiConcentrationRow:
    gamma: float
    threshold: float
    empirical: float
    stderr: float
    bound: float
    bound_config_epsilon: float

    @property
    def ok(self) -> bool:
        return self.empirical >= self.bound - 3 * self.stderr


@dataclass(frozen=True)
class AntiConcentrationReport:
    config: ExperimentConfig
    length: int
    d: int
    epsilon_achieved: float | None
    epsilon_used: float
    rows: tuple[AntiConcentrationRow, ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "length": self.length,
            "d": self.d,
            "epsilon_achieved": self.epsilon_achieved,
            "epsilon_used": self.epsilon_used,
            "rows": [asdict(r) | {"ok": r.ok} for r in self.rows],
            "ok": self.ok,
        }


def anticoncentration_fraction(
    cfg: ExperimentConfig,
    gammas: Sequence[float] | None = None,
    workers: int = 1,
    amplitudes: np.ndarray | None = None,
) -> AntiConcentrationReport:
    """Fraction of random braids with ``|<alpha|rho(b)|beta>|^2 > gamma/d``.

    The bound uses the design accuracy achieved at the configured length
    (the exact moment gap) when that is computable, else ``cfg.epsilon``.
    """
    if gammas is None:
        if cfg.gamma is None:
            raise ConfigError("no gamma given")
        gammas = [cfg.gamma]
    for g in gammas:
        if not 0 < g < 1 - cfg.epsilon:
            raise ConfigError(f"gamma must satisfy 0 < gamma < 1 - epsilon = {1 - cfg.epsilon:g}, got {g}")
    length = cfg.resolved_length()
    d = cfg.basis().dim
    achieved = _gap_if_computable(cfg, length)
    eps_used = achieved if achieved is not None else cfg.epsilon
    if amplitudes is None:
        amplitudes = braid_amplitudes(cfg, workers)
    z = np.abs(amplitudes) ** 2
    N = len(z)
    rows = []
    for g in gammas:
        frac = float(np.mean(z > g / d))
        se = math.sqrt(frac * (1 - frac) / N)
        rows.append(AntiConcentrationRow(
            gamma=float(g), threshold=g / d, empirical=frac, stderr=se,
            bound=lemma2_bound(eps_used, g), bound_config_epsilon=lemma2_bound(cfg.epsilon, g),
        ))
    return AntiConcentrationReport(cfg, length, d, achieved, eps_used, tuple(rows))


@dataclass(frozen=True)
class PaleyZygmundReport:
    theta: float
    probability: float
    mean: float
    second_moment: float
    bound: float
    slack: float
    stderr: float
    N: int

    @property
    def ok(self) -> bool:
        return self.slack >= -3 * self.stderr

    def to_dict(self) -> dict:
        return asdict(self) | {"ok": self.ok}


def paley_zygmund_check(samples, theta: float) -> PaleyZygmundReport:
    """Compare ``Pr[Z > theta E Z]`` with ``(1-theta)^2 E[Z]^2 / E[Z^2]`` on a sample."""
    z = np.asarray(samples, dtype=float)
    if not 0 <= theta <= 1:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    if z.size == 0:
        raise ValueError("empty sample")
    if np.any(z < 0):
        raise ValueError("Paley-Zygmund needs non-negative samples")
    N = z.size
    mean = float(z.mean())
    second = float(np.mean(z**2))
    prob = float(np.mean(z > theta * mean))
    bound = (1 - theta) ** 2 * mean**2 / second if second > 0 else 0.0
    se = math.sqrt(prob * (1 - prob) / N)
    return PaleyZygmundReport(theta, prob, mean, second, bound, prob - bound, se, N)
