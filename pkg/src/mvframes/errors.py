"""Exception hierarchy shared by every module of the package."""


class MVFrameError(Exception):
    """Base class for all errors raised by mvframes."""


class SignatureMismatch(MVFrameError):
    pass


class InfiniteCarrier(MVFrameError):
    pass


class CarrierTooLarge(MVFrameError):
    pass


class NotAlgebraicSignature(MVFrameError):
    pass


class BadSignatureForNucleus(MVFrameError):
    pass


class BadParameter(MVFrameError):
    pass


class PreconditionFailed(MVFrameError):
    """Raised when a construction needs classification flags that do not hold.

    ``failed`` lists the names of the flags that were false (or unknown).
    """

    def __init__(self, message, failed=()):
        super().__init__(message)
        self.failed = tuple(failed)


class UnitIntervalNotRepresentable(MVFrameError):
    pass


class NotUnitPreserving(MVFrameError):
    pass


class MalformedInput(MVFrameError):
    """Malformed JSON spec or element description."""
