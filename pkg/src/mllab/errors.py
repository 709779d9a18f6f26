class DomainError(ValueError):
    """Input outside the region where a function or inequality is defined.

    ``param`` names the offending argument when there is a single culprit; the
    CLI uses it to point at the matching flag.
    """

    def __init__(self, message, param=None):
        super().__init__(message)
        self.param = param


class ConfigError(ValueError):
    """Malformed grid, preset, or configuration file; ``param`` names the flag."""

    def __init__(self, message, param=None):
        super().__init__(message)
        self.param = param
