class ContractViolation(ValueError):
    """Raised when an operation is called outside its precondition."""


class ConfigError(ValueError):
    """Invalid experiment configuration, optionally tied to a source line."""

    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        self.message = message
        super().__init__(f"line {line}: {message}" if line is not None else message)

    def __str__(self):
        return self.args[0]
