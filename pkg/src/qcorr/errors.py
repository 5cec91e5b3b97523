"""Exception types raised by qcorr."""


class QCorrError(ValueError):
    """Base class for all qcorr input errors."""


class DimensionError(QCorrError):
    """Matrix or subsystem dimensions are inconsistent."""


class NotHermitianError(QCorrError):
    pass


class InvalidStateError(QCorrError):
    """A density matrix violates one of its invariants.

    The ``invariant`` attribute names the violated property (``"trace"``,
    ``"hermitian"``, ``"positivity"``, ``"finite"``, ``"shape"``).
    """

    def __init__(self, message, invariant=None):
        super().__init__(message)
        self.invariant = invariant


class InvalidDistributionError(QCorrError):
    pass


class InvalidPOVMError(QCorrError):
    pass


class InvalidChannelError(QCorrError):
    pass


class UnsupportedDimensionError(QCorrError):
    """The requested optimisation is only implemented for qubit subsystems."""
