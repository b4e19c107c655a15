"""Causal home-field advantage estimation for double round-robin leagues."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DuplicateFixtureError,
    HomeFieldError,
    IncompleteSeasonError,
    InferenceWarning,
    InsufficientTeamsError,
    ParseError,
    RankDeficiencyError,
    SchemaError,
    UnknownStatisticError,
)
from .estimator import (  # noqa: E402
    DesignSystem,
    EffectEstimates,
    beta_cov_diag,
    build_design,
    gram_inverse_apply,
    residual_variance,
    solve_beta,
)
from .inference import (  # noqa: E402
    LeagueInference,
    TeamInference,
    confidence_interval,
    delta_hat,
    infer_league,
    infer_teams,
    normal_cdf,
    normal_quantile,
    sigma2_hat,
    var_delta_hat,
    z_test,
)
from .league_data import (  # noqa: E402
    MatchRecord,
    MatchSet,
    NetOutcome,
    PairedOutcomeSet,
    TeamId,
    net_outcome,
    pair_outcomes,
    parse_matches,
    read_matches,
    summarize_stat,
)
from .simulation import SimulationConfig, aggregate, run_replicate, run_simulation  # noqa: E402
