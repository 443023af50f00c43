class NetcalcError(Exception):
    """Base class for every error raised by this package."""


class MalformedInputError(NetcalcError, ValueError):
    pass


class DirectednessError(NetcalcError, ValueError):
    pass


class DomainError(NetcalcError, ValueError):
    pass


class NotMatrixFormError(NetcalcError, ValueError):
    pass


class SeparationError(NetcalcError):
    """Raised when a limit is requested in a space that is not Hausdorff."""


class PreconditionError(NetcalcError):
    pass


class SoundnessError(NetcalcError, AssertionError):
    """A theorem check saw its hypotheses pass and its conclusion fail."""

    def __init__(self, record):
        super().__init__(
            f"{record.check} [{record.sample_id}]: conclusion failed with hypotheses met"
        )
        self.record = record


class ConfigError(NetcalcError, ValueError):
    pass


class UsageError(NetcalcError, ValueError):
    pass
