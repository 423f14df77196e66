"""Exception hierarchy shared across the package."""


class VarietyDVFSError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(VarietyDVFSError, ValueError):
    pass


class InfeasibleSkewError(VarietyDVFSError, ValueError):
    """A Zipfian apportionment would put more hits in a block than it has records."""

    def __init__(self, rank, hit_count, record_count):
        self.rank = rank
        self.hit_count = hit_count
        self.record_count = record_count
        super().__init__(
            f"block rank {rank} needs {hit_count} hit records but holds only {record_count}"
        )


class OutOfRangeError(VarietyDVFSError, ValueError):
    pass


class DegenerateBaselineError(VarietyDVFSError, ZeroDivisionError):
    pass


class ConfigError(VarietyDVFSError):
    pass


class ConfigNotFoundError(ConfigError, FileNotFoundError):
    pass


class ConfigParseError(ConfigError):
    pass


class ConfigValidationError(ConfigError, ValueError):
    """Carries the dotted path of the offending field."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class RunError(VarietyDVFSError):
    """An experiment run failed; the message names scenario, z and seed."""
