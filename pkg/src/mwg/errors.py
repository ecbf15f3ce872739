"""Exception types shared across the package."""


class MwgError(Exception):
    """Base class for errors raised by this package."""


class InvalidGameError(MwgError):
    """A game structure failed validation; carries the violation list."""

    def __init__(self, violations):
        self.violations = list(violations)
        detail = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid game: {detail}")


class WalkError(MwgError):
    """A play prefix, lasso, or circuit is not a connected walk."""


class DimensionError(MwgError):
    """A vector or dimension index does not match the game's dimension."""


class StrategyError(MwgError):
    """A strategy does not fit the game it is applied to."""


class LpError(MwgError):
    """A linear constraint system is malformed."""


class ParseError(MwgError):
    """Positioned syntax error in a game, certificate, or instance file."""

    def __init__(self, line, column, reason):
        self.line = line
        self.column = column
        self.reason = reason
        super().__init__(f"line {line}, column {column}: {reason}")
