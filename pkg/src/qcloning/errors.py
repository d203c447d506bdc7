"""Exception hierarchy shared by all modules."""


class CloningError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CloningError, ValueError):
    """An input lies outside the domain where a quantity is defined."""


class InfeasibleError(DomainError):
    """The (gamma, s) pair admits no real machine: gamma < (1 - s)/2."""


class SingularInputError(DomainError):
    """A closed form is singular at the requested point (e.g. s = 0)."""


class UndefinedFidelityError(DomainError):
    """The success probability vanishes, so the post-selected state is undefined."""


class InvariantError(CloningError, ValueError):
    """A value violates a structural invariant (normalization, hermiticity, ...)."""
