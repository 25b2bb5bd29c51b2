"""Exception types raised by the solvers, the oracle and the CLI."""


class ModelError(Exception):
    """Base class for every model-level failure.

    ``leg`` is set to ``"equity"`` or ``"token"`` when the error was raised
    while solving one financing mode of a pair.
    """

    leg = None


class DomainError(ModelError, ValueError):
    """A parameter or argument lies outside its admissible range."""


class CannotFinance(ModelError):
    """Equity cannot raise I: the whole share is worth less than I."""


class DegenerateCase(ModelError):
    """A formula is undefined at this parameter point (e.g. lambda = 1)."""


class IlliquidToken(ModelError):
    """The token has a zero t=0 price and raises no funds."""


class NoEquilibrium(ModelError):
    """The fixed-point residual has no admissible root in the bracket."""


class ConvergenceFailure(ModelError):
    """The root finder hit its iteration cap before meeting tolerance."""


class BracketError(ModelError):
    """A price bracket does not straddle market clearing."""


class ParseError(ModelError):
    """A config file could not be parsed."""
