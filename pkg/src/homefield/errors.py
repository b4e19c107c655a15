"""Exception hierarchy.  Each family maps to one CLI exit code."""


class HomeFieldError(Exception):
    exit_code = 1


class SchemaError(HomeFieldError, ValueError):
    """Input table does not match the expected layout."""

    exit_code = 4


class ParseError(SchemaError):
    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class DuplicateFixtureError(SchemaError):
    def __init__(self, home, away, row):
        super().__init__(f"row {row}: duplicate fixture {home!r} (home) vs {away!r} (away)")
        self.home = home
        self.away = away
        self.row = row


class IncompleteSeasonError(HomeFieldError, ValueError):
    """Some unordered pair lacks one of its two fixtures."""

    exit_code = 5

    def __init__(self, missing):
        self.missing = list(missing)
        shown = ", ".join("{%s,%s}" % pair for pair in self.missing[:10])
        more = f" (+{len(self.missing) - 10} more)" if len(self.missing) > 10 else ""
        super().__init__(f"missing mirror fixture for pairs: {shown}{more}")


class RankDeficiencyError(HomeFieldError, ValueError):
    """Pairing design does not identify every team effect."""

    exit_code = 6


class InsufficientTeamsError(RankDeficiencyError):
    pass


class InferenceWarning(UserWarning):
    """Inference is degenerate (saturated design, zero variance)."""


class UnknownStatisticError(HomeFieldError, KeyError):
    exit_code = 4

    def __str__(self):
        return str(self.args[0]) if self.args else ""
