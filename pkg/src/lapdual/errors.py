"""Exception types shared across the package.

Input problems (bad arguments, schema violations, mathematical domain
errors) are kept distinct from numerical engine failures so the CLI can
map them onto separate exit codes (2 and 3 respectively).
"""


class LapdualError(Exception):
    """Base class for all package-specific errors."""


class InputError(LapdualError, ValueError):
    """Invalid input: bad arguments, schema violations, domain errors."""


class UnboundedSublevelError(InputError):
    """g is not strictly positive away from the origin, so its sublevel
    sets admit no finite enclosing box."""


class EngineError(LapdualError, RuntimeError):
    """A numerical engine failed to produce a trustworthy value."""


class EffortError(EngineError):
    """The requested computation exceeds the configured effort cap, or an
    adaptive loop exhausted its budget without stabilizing."""


class EvaluationError(EngineError):
    """An integrand produced a non-finite value at an evaluation point."""


class BracketError(EngineError):
    """A root-finding bracket does not straddle the target value."""


class EvaluationNoiseError(EngineError):
    """Numerical evaluations are inconsistent beyond the expected noise
    floor (e.g. a monotone map evaluated non-monotonically)."""


class ExtractionError(EngineError):
    """Mean-value point extraction failed.  ``best`` carries the closest
    candidate found, or None."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
