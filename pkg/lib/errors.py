"""Exception hierarchy for phase retrieval analysis."""


class PhaseRetrievalError(Exception):
    """Base class for domain errors (CLI exit status 1)."""


class NonConvergence(PhaseRetrievalError):
    """Root finding did not reach the residual tolerance."""


class PairingFailure(PhaseRetrievalError):
    """Roots could not be grouped into reflection pairs."""


class RealnessViolation(PhaseRetrievalError):
    """A product over zeros left an imaginary residue above tolerance."""


class HypothesisViolation(PhaseRetrievalError):
    """An operation was called outside the hypothesis it is defined under."""


class GenerationFailure(PhaseRetrievalError):
    """An instance generator exhausted its retry budget."""


class ConfigError(Exception):
    """Invalid configuration (CLI exit status 2)."""


class FormatError(Exception):
    """Malformed input file or document (CLI exit status 2)."""
