"""Exception types shared across the package."""


class RevrelError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(RevrelError):
    """A distribution parameter is outside its admissible range."""


class SupportError(RevrelError):
    """An evaluation point lies outside the support of the distribution."""


class DomainError(RevrelError):
    """A check or functional was requested on a model that cannot host it."""


class UnboundedSupport(DomainError):
    """Raised when a quantity needs a finite right endpoint and there is none."""


class DivergentMoment(RevrelError):
    """A requested moment does not exist for the given distribution."""


class NonFiniteWeight(RevrelError):
    """A Monte Carlo weight function produced a non-finite value."""


class NoMass(RevrelError):
    """An empirical estimate was requested at a point with no sample mass."""


class TooFewPoints(RevrelError):
    """The sample is too small for the requested estimate."""


class QuadratureError(RevrelError):
    """Low-level failure inside the integration engine."""
