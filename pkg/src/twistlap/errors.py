"""Exception hierarchy shared by every module."""


class TwistlapError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(TwistlapError, ValueError):
    pass


class EnvelopeMismatch(TwistlapError, ValueError):
    pass


class IndexOutOfRange(TwistlapError, IndexError):
    pass


class InvalidParameter(TwistlapError, ValueError):
    pass


class ZeroFunction(TwistlapError, ValueError):
    pass


class NonIntegrable(TwistlapError, ValueError):
    pass


class PoleAtC(TwistlapError, ValueError):
    pass


class NonConvergence(TwistlapError, ArithmeticError):
    pass


class DomainTooSmall(TwistlapError, ValueError):
    pass


class NotUnitary(TwistlapError, ValueError):
    pass


def require_positive_mu(mu):
    if not mu > 0:
        raise InvalidParameter(f"mu must be > 0, got {mu!r}")
