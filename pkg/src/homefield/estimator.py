"""Least-squares estimation of per-team home effects from pair sums.

Each unordered pair contributes one row ``beta_i + beta_j = Y_ij + Y_ji``.  For a
complete double round-robin the Gram matrix is ``(n - 2) I + J`` and is inverted
in closed form; incomplete (partial) designs fall back to a dense solve.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InferenceWarning, InsufficientTeamsError, RankDeficiencyError
from .league_data import PairedOutcomeSet


@dataclass(frozen=True)
class DesignSystem:
    """Implicit incidence matrix: row k has ones in columns ``pair_i[k]`` and ``pair_j[k]``."""

    n: int
    pair_i: np.ndarray
    pair_j: np.ndarray
    rhs: np.ndarray
    complete: bool

    @property
    def n_rows(self) -> int:
        return len(self.rhs)

    @property
    def n_matches(self) -> int:
        return 2 * self.n_rows

    def incidence(self) -> np.ndarray:
        h = np.zeros((self.n_rows, self.n))
        rows = np.arange(self.n_rows)
        h[rows, self.pair_i] = 1.0
        h[rows, self.pair_j] = 1.0
        return h

    def gram(self) -> np.ndarray:
        g = np.zeros((self.n, self.n))
        np.add.at(g, (self.pair_i, self.pair_i), 1.0)
        np.add.at(g, (self.pair_j, self.pair_j), 1.0)
        np.add.at(g, (self.pair_i, self.pair_j), 1.0)
        np.add.at(g, (self.pair_j, self.pair_i), 1.0)
        return g


@dataclass(frozen=True)
class EffectEstimates:
    beta_hat: np.ndarray
    residuals: np.ndarray
    sigma2_beta_hat: float
    cov_diag: np.ndarray
    n_matches: int

    @property
    def n(self) -> int:
        return len(self.beta_hat)


def _check_identified(n: int, pair_i: np.ndarray, pair_j: np.ndarray) -> None:
    # Unsigned incidence has full column rank iff every component is connected
    # and contains an odd cycle.  We require a single component.
    adj = [[] for _ in range(n)]
    for i, j in zip(pair_i.tolist(), pair_j.tolist()):
        adj[i].append(j)
        adj[j].append(i)
    absent = [k for k in range(n) if not adj[k]]
    if absent:
        raise RankDeficiencyError(f"teams {absent} appear in no retained pair")
    colour = [-1] * n
    colour[0] = 0
    stack = [0]
    odd_cycle = False
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if colour[v] < 0:
                colour[v] = 1 - colour[u]
                stack.append(v)
            elif colour[v] == colour[u]:
                odd_cycle = True
    if min(colour) < 0:
        raise RankDeficiencyError("retained pairs do not connect all teams")
    if not odd_cycle:
        raise RankDeficiencyError("retained pairs form a bipartite graph; team effects are not identified")


def build_design(pairs: PairedOutcomeSet) -> DesignSystem:
    n = pairs.n
    if n < 3:
        raise InsufficientTeamsError(f"need at least 3 teams, got {n}")
    complete = pairs.complete
    if not complete:
        _check_identified(n, pairs.pair_i, pairs.pair_j)
    return DesignSystem(n, pairs.pair_i, pairs.pair_j, pairs.sums, complete)


def gram_inverse_apply(v, n: int) -> np.ndarray:
    """Apply ``((n - 2) I + J)^-1`` to ``v`` via Sherman-Morrison."""
    if n < 3:
        raise InsufficientTeamsError(f"need at least 3 teams, got {n}")
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (n,):
        raise ValueError(f"expected a vector of length {n}, got shape {v.shape}")
    return v / (n - 2) - v.sum() / ((n - 2) * (2 * n - 2))


def gram_inverse_diag(n: int) -> float:
    """Common diagonal entry of ``((n - 2) I + J)^-1``."""
    return (2 * n - 3) / ((n - 2) * (2 * n - 2))


def residual_variance(design: DesignSystem, beta_hat, df_correction: bool = False) -> float:
    """Row-noise variance ``2 * RSS / N`` with ``N`` the number of matches.

    ``df_correction=True`` divides by ``rows - n`` instead, which is unbiased
    but not the default.
    """
    r = kernels.pair_residuals(np.ascontiguousarray(beta_hat, dtype=np.float64), design.pair_i, design.pair_j, design.rhs)
    rss = float(r @ r)
    if df_correction:
        dof = design.n_rows - design.n
        if dof <= 0:
            raise ValueError("saturated design has no residual degrees of freedom")
        return rss / dof
    return 2.0 * rss / design.n_matches


def beta_cov_diag(n: int, sigma2_beta_hat: float) -> np.ndarray:
    return np.full(n, sigma2_beta_hat * gram_inverse_diag(n))


def solve_beta(design: DesignSystem, df_correction: bool = False) -> EffectEstimates:
    n = design.n
    totals = kernels.team_totals(n, design.pair_i, design.pair_j, design.rhs)
    if design.complete:
        beta_hat = gram_inverse_apply(totals, n)
        inv_diag = None
    else:
        gram = design.gram()
        try:
            chol = np.linalg.cholesky(gram)
        except np.linalg.LinAlgError:
            raise RankDeficiencyError("Gram matrix is singular") from None
        beta_hat = np.linalg.solve(chol.T, np.linalg.solve(chol, totals))
        inv_diag = np.diag(np.linalg.inv(gram))

    residuals = kernels.pair_residuals(beta_hat, design.pair_i, design.pair_j, design.rhs)
    if design.n_rows == n:
        warnings.warn(
            "design is saturated (as many pairs as teams); residual variance is 0 and inference is vacuous",
            InferenceWarning,
            stacklevel=2,
        )
        sigma2 = 0.0
    else:
        sigma2 = residual_variance(design, beta_hat, df_correction)
    cov = beta_cov_diag(n, sigma2) if inv_diag is None else sigma2 * inv_diag
    return EffectEstimates(beta_hat, residuals, sigma2, cov, design.n_matches)
