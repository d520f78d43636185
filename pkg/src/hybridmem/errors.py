class ConfigError(ValueError):
    """Invalid or inconsistent configuration; `path` names the offending field."""

    def __init__(self, message, path=None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class NumericalError(RuntimeError):
    """A numerical invariant (hermiticity, trace, norm) was violated."""
