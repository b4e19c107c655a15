"""League- and team-level inference: variance components, z intervals and p-values."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .estimator import EffectEstimates

VARIANCE_MODES = ("total", "literal")


def normal_cdf(x):
    """Standard normal CDF.  Scalars in, float out; arrays in, arrays out."""
    if np.ndim(x) == 0:
        return float(kernels.ndtr_scalar(float(x)))
    arr = np.asarray(x, dtype=np.float64)
    return kernels.ndtr(np.ascontiguousarray(arr.ravel())).reshape(arr.shape)


def normal_quantile(p):
    """Inverse of :func:`normal_cdf` on the open interval (0, 1)."""
    if np.ndim(p) == 0:
        p = float(p)
        if not 0.0 < p < 1.0:
            raise ValueError(f"probability must lie in (0, 1), got {p}")
        return float(kernels.ndtri_scalar(p))
    arr = np.asarray(p, dtype=np.float64)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise ValueError("probabilities must lie in (0, 1)")
    return kernels.ndtri(np.ascontiguousarray(arr.ravel())).reshape(arr.shape)


def critical_value(alpha: float) -> float:
    """Upper ``alpha / 2`` quantile of the standard normal."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return normal_quantile(1.0 - alpha / 2.0)


def delta_hat(beta_hat) -> float:
    beta_hat = np.asarray(beta_hat, dtype=np.float64)
    if beta_hat.size == 0:
        raise ValueError("beta_hat is empty")
    return float(beta_hat.mean())


def sigma2_hat(beta_hat, cov_diag) -> tuple[float, float]:
    """Between-team variance: sample variance of ``beta_hat`` minus mean sampling variance.

    Returns ``(raw, clamped)``; ``raw`` can be negative in finite samples.
    """
    beta_hat = np.asarray(beta_hat, dtype=np.float64)
    cov_diag = np.asarray(cov_diag, dtype=np.float64)
    if beta_hat.size < 2:
        raise ValueError("need at least 2 team effects")
    if beta_hat.shape != cov_diag.shape:
        raise ValueError("beta_hat and cov_diag differ in shape")
    raw = float(np.var(beta_hat, ddof=1) - cov_diag.mean())
    return raw, max(raw, 0.0)


def var_delta_hat(sigma2_clamped: float, sigma2_beta_hat: float, n: int, mode: str = "total") -> float:
    """Variance used for the league interval.

    ``literal`` is ``sigma2 / n``.  ``total`` adds the sampling noise of the mean
    team effect, ``sigma2_beta / (n (2n - 2))``, which is ``1' Sigma_beta 1 / n^2``
    for a complete season.
    """
    if n < 3:
        raise ValueError(f"need at least 3 teams, got {n}")
    if mode == "literal":
        return sigma2_clamped / n
    if mode == "total":
        return sigma2_clamped / n + sigma2_beta_hat / (n * (2 * n - 2))
    raise ValueError(f"unknown variance mode {mode!r}; expected one of {VARIANCE_MODES}")


def confidence_interval(point, variance, alpha: float = 0.05):
    """``point -/+ z_{alpha/2} sqrt(variance)``; works elementwise on arrays."""
    z = critical_value(alpha)
    if np.any(np.asarray(variance) < 0):
        raise ValueError("variance must be non-negative")
    half = z * np.sqrt(variance)
    if np.ndim(half) == 0 and np.ndim(point) == 0:
        return float(point - half), float(point + half)
    return np.asarray(point - half), np.asarray(point + half)


def z_test(point, variance):
    """Two-sided p-value for H0: parameter = 0.

    Zero variance is degenerate: p is 0 for a nonzero point and 1 at zero.
    """
    point_a = np.asarray(point, dtype=np.float64)
    var_a = np.asarray(variance, dtype=np.float64)
    if np.any(var_a < 0):
        raise ValueError("variance must be non-negative")
    with np.errstate(divide="ignore", invalid="ignore"):
        stat = np.abs(point_a) / np.sqrt(var_a)
    stat = np.where(var_a > 0, stat, np.where(point_a == 0, 0.0, np.inf))
    flat = np.ascontiguousarray(stat.ravel())
    p = 2.0 * kernels.ndtr(-flat)
    p = np.minimum(p, 1.0).reshape(stat.shape)
    if p.ndim == 0:
        return float(p)
    return p


@dataclass(frozen=True)
class LeagueInference:
    delta_hat: float
    sigma2_raw: float
    sigma2_hat: float
    var_delta_hat: float
    ci: tuple[float, float]
    p_value: float
    alpha: float
    variance_mode: str

    @property
    def se(self) -> float:
        return math.sqrt(self.var_delta_hat)

    @property
    def clamped(self) -> bool:
        return self.sigma2_raw < 0

    @property
    def degenerate(self) -> bool:
        return self.var_delta_hat == 0


@dataclass(frozen=True)
class TeamInference:
    beta_hat: np.ndarray
    se: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    p_value: np.ndarray
    alpha: float

    @property
    def degenerate(self) -> bool:
        return bool(np.any(self.se == 0))


def infer_league(est: EffectEstimates, alpha: float = 0.05, mode: str = "total") -> LeagueInference:
    d = delta_hat(est.beta_hat)
    raw, clamped = sigma2_hat(est.beta_hat, est.cov_diag)
    var = var_delta_hat(clamped, est.sigma2_beta_hat, est.n, mode)
    ci = confidence_interval(d, var, alpha)
    return LeagueInference(d, raw, clamped, var, ci, z_test(d, var), alpha, mode)


def infer_teams(est: EffectEstimates, alpha: float = 0.05) -> TeamInference:
    se = np.sqrt(est.cov_diag)
    lower, upper = confidence_interval(est.beta_hat, est.cov_diag, alpha)
    p = np.atleast_1d(z_test(est.beta_hat, est.cov_diag))
    return TeamInference(np.asarray(est.beta_hat), se, lower, upper, p, alpha)
