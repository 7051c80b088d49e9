"""Exception hierarchy shared by all lpmine modules."""


class LPMError(Exception):
    """Base class for every error raised by lpmine."""


class ConfigurationError(LPMError):
    """Invalid user configuration: missing columns, bad thresholds, empty alphabet."""


class LogParseError(LPMError):
    """An event log source could not be read."""


class ResourceLimitError(LPMError):
    """A search exceeded its configured state budget."""


class ContractViolation(LPMError):
    """A precondition of an operation was not met by the caller."""
