"""Exception hierarchy shared by the pipeline stages."""


class ChvgError(ValueError):
    """Base class for data errors raised by the pipeline."""


class CorpusError(ChvgError):
    """Input text could not be read or decoded."""


class GraphError(ChvgError):
    """A graph was built from inconsistent inputs or broke a structural invariant."""


class InsufficientPointsError(ChvgError):
    """Too few distinct measures to fit a power law."""
