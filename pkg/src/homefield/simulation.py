"""Monte Carlo study of the estimators under two ability-generation scenarios.

Scenario 1 draws each pairwise neutral-field difference independently; scenario 2
derives them from per-team abilities.  Every replicate builds a full double
round-robin ``Y[i, j] = alpha[i, j] + beta[i] + eps[i, j]`` and runs the same
pairing, solve and inference path as real data.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .estimator import build_design, solve_beta
from .inference import VARIANCE_MODES, infer_league, infer_teams, var_delta_hat
from .league_data import PairedOutcomeSet
from .rng import check_seed, standard_normals, substream

GRID_TEAMS = (10, 20, 40, 80)
GRID_SIGMA0_SQ = (0.5, 1.0, 2.0)
GRID_SCENARIOS = (1, 2)


@dataclass(frozen=True)
class SimulationConfig:
    scenario: int
    n: int
    sigma0_sq: float
    replicates: int = 1000
    seed: int = 2021
    delta_true: float = 1.0
    sigma_true: float = 0.3
    alpha_scale: float = 2.0
    level: float = 0.05
    variance_mode: str = "total"

    def __post_init__(self):
        if self.scenario not in (1, 2):
            raise ValueError(f"scenario must be 1 or 2, got {self.scenario}")
        if self.n < 3:
            raise ValueError(f"need at least 3 teams, got {self.n}")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if not self.sigma0_sq > 0:
            raise ValueError("sigma0_sq must be > 0")
        if self.sigma_true < 0 or self.alpha_scale < 0:
            raise ValueError("sigma_true and alpha_scale must be >= 0")
        if not 0 < self.level < 1:
            raise ValueError("level must lie in (0, 1)")
        if self.variance_mode not in VARIANCE_MODES:
            raise ValueError(f"variance_mode must be one of {VARIANCE_MODES}")
        check_seed(self.seed)


def gen_alphas_scenario1(n: int, gen: np.random.Generator, alpha_scale: float = 2.0) -> np.ndarray:
    """Independent ``N(0, alpha_scale^2)`` per unordered pair, mirrored antisymmetrically."""
    iu = np.triu_indices(n, k=1)
    alpha = np.zeros((n, n))
    draws = alpha_scale * standard_normals(gen, len(iu[0]))
    alpha[iu] = draws
    alpha[iu[1], iu[0]] = -draws
    return alpha


def gen_alphas_scenario2(n: int, gen: np.random.Generator, alpha_scale: float = 2.0) -> np.ndarray:
    """``alpha[i, j] = ability[i] - ability[j]`` with ``ability ~ N(0, alpha_scale^2)``."""
    ability = alpha_scale * standard_normals(gen, n)
    return ability[:, None] - ability[None, :]


@dataclass(frozen=True)
class ReplicateResult:
    index: int
    delta_true: float
    delta_hat: float
    sigma2_raw: float
    sigma2_clamped: float
    sigma2_beta: float
    var_delta: float
    var_delta_raw: float
    delta_covered: bool
    beta_true: np.ndarray
    beta_hat: np.ndarray
    beta_var: np.ndarray
    beta_covered: np.ndarray
    beta_p: np.ndarray


def simulate_outcomes(config: SimulationConfig, replicate_index: int) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``(beta, Y)`` for one replicate; ``Y`` has a zero diagonal."""
    n = config.n
    beta = config.delta_true + config.sigma_true * standard_normals(
        substream(config.seed, replicate_index, "beta"), n
    )
    alpha_gen = substream(config.seed, replicate_index, "alpha")
    if config.scenario == 1:
        alpha = gen_alphas_scenario1(n, alpha_gen, config.alpha_scale)
    else:
        alpha = gen_alphas_scenario2(n, alpha_gen, config.alpha_scale)
    eps = math.sqrt(config.sigma0_sq) * standard_normals(
        substream(config.seed, replicate_index, "epsilon"), n * n
    ).reshape(n, n)
    y = alpha + beta[:, None] + eps
    np.fill_diagonal(y, 0.0)
    return beta, y


def run_replicate(config: SimulationConfig, replicate_index: int) -> ReplicateResult:
    beta, y = simulate_outcomes(config, replicate_index)
    design = build_design(PairedOutcomeSet.from_matrix(y))
    assert design.complete
    est = solve_beta(design)
    league = infer_league(est, config.level, config.variance_mode)
    teams = infer_teams(est, config.level)
    lo, hi = league.ci
    return ReplicateResult(
        index=replicate_index,
        delta_true=config.delta_true,
        delta_hat=league.delta_hat,
        sigma2_raw=league.sigma2_raw,
        sigma2_clamped=league.sigma2_hat,
        sigma2_beta=est.sigma2_beta_hat,
        var_delta=league.var_delta_hat,
        var_delta_raw=var_delta_hat(league.sigma2_raw, est.sigma2_beta_hat, config.n, config.variance_mode),
        delta_covered=bool(lo <= config.delta_true <= hi),
        beta_true=beta,
        beta_hat=est.beta_hat,
        beta_var=est.cov_diag,
        beta_covered=(teams.lower <= beta) & (beta <= teams.upper),
        beta_p=teams.p_value,
    )


@dataclass(frozen=True)
class EstimandMetrics:
    bias: float
    cp: float
    sv: float
    mv: float


@dataclass(frozen=True)
class MetricsSummary:
    config: SimulationConfig
    delta: EstimandMetrics
    beta_bias: np.ndarray
    beta_cp: np.ndarray
    beta_sv: np.ndarray
    beta_mv: np.ndarray
    beta_rejection_rate: float
    negative_sigma2: int
    mean_sigma2_raw: float
    mean_sigma2_beta: float

    @property
    def beta_cp_pooled(self) -> float:
        return float(self.beta_cp.mean())

    def row(self) -> dict:
        c = self.config
        return {
            "scenario": c.scenario,
            "n": c.n,
            "sigma0_sq": c.sigma0_sq,
            "replicates": c.replicates,
            "seed": c.seed,
            "variance_mode": c.variance_mode,
            **asdict(self.delta),
            "beta_cp": self.beta_cp_pooled,
            "beta_bias": float(self.beta_bias.mean()),
            "negative_sigma2": self.negative_sigma2,
            "mean_sigma2_raw": self.mean_sigma2_raw,
            "mean_sigma2_beta": self.mean_sigma2_beta,
        }


def aggregate(results, config: SimulationConfig) -> MetricsSummary:
    """Bias, coverage, sample variance of estimates and mean variance estimate.

    Delta is scored against ``config.delta_true``; each beta_i against the
    replicate's realized beta_i, with SV the variance of the estimation error.
    MV uses raw (unclamped) variance estimates.
    """
    results = list(results)
    if len(results) < 2:
        raise ValueError("need at least 2 replicates to compute a sample variance")
    d = np.array([r.delta_hat for r in results])
    delta = EstimandMetrics(
        bias=float(d.mean() - config.delta_true),
        cp=float(np.mean([r.delta_covered for r in results])),
        sv=float(np.var(d, ddof=1)),
        mv=float(np.mean([r.var_delta_raw for r in results])),
    )
    err = np.stack([r.beta_hat - r.beta_true for r in results])
    return MetricsSummary(
        config=config,
        delta=delta,
        beta_bias=err.mean(axis=0),
        beta_cp=np.stack([r.beta_covered for r in results]).mean(axis=0),
        beta_sv=err.var(axis=0, ddof=1),
        beta_mv=np.stack([r.beta_var for r in results]).mean(axis=0),
        beta_rejection_rate=float(np.mean(np.stack([r.beta_p for r in results]) < config.level)),
        negative_sigma2=int(sum(r.sigma2_raw < 0 for r in results)),
        mean_sigma2_raw=float(np.mean([r.sigma2_raw for r in results])),
        mean_sigma2_beta=float(np.mean([r.sigma2_beta for r in results])),
    )


def run_simulation(config: SimulationConfig) -> MetricsSummary:
    return aggregate((run_replicate(config, k) for k in range(config.replicates)), config)


def full_grid(seed: int = 2021, replicates: int = 1000, variance_mode: str = "total", **kwargs) -> list[SimulationConfig]:
    """All scenario x teams x noise-variance cells, in table order."""
    return [
        SimulationConfig(s, n, v, replicates=replicates, seed=seed, variance_mode=variance_mode, **kwargs)
        for s in GRID_SCENARIOS
        for n in GRID_TEAMS
        for v in GRID_SIGMA0_SQ
    ]


def run_grid(configs, jobs: int = 1) -> list[MetricsSummary]:
    """Run cells, in parallel processes when ``jobs > 1``; output order follows ``configs``."""
    configs = list(configs)
    if jobs <= 1 or len(configs) <= 1:
        return [run_simulation(c) for c in configs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_simulation, configs))


def coverage_standard_error(replicates: int, nominal: float = 0.95) -> float:
    """Binomial Monte Carlo standard error of an estimated coverage probability."""
    return math.sqrt(nominal * (1.0 - nominal) / replicates)
