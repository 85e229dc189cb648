"""Exception hierarchy shared by all conelab modules."""


class ConelabError(Exception):
    """Base class for every error raised by conelab."""


class DomainError(ConelabError, ValueError):
    """An argument lies outside the domain of the operation (negative radius, negative eigenvalue, ...)."""


class PoleError(DomainError):
    """A quantity is only defined by a limit at the pole r = 0."""


class ConstraintViolation(ConelabError, ValueError):
    """A parameter set violates one of the gluing/positivity assumptions.

    The failing assumption name is stored in ``assumption``.
    """

    def __init__(self, assumption, message):
        super().__init__(f"{assumption}: {message}")
        self.assumption = assumption


class UsageError(ConelabError, ValueError):
    """Malformed request: degenerate window, missing dyadic sample, bad configuration."""


class RangeError(ConelabError, ValueError):
    """A radius lies beyond the range on which a solution or grid is available."""


class PreconditionError(ConelabError, ValueError):
    """A mathematical precondition of a theorem-level check does not hold."""


class NonMaximalGrowthError(ConelabError, ValueError):
    """The model has zero asymptotic volume ratio, so the Green's-function distance b is undefined."""


class ZeroHarmonicError(ConelabError, ValueError):
    """The harmonic function vanishes identically, so a ratio or normalization is undefined."""
