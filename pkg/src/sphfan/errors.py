class SphfanError(ValueError):
    """Base class for invalid input or violated preconditions."""


class DimensionError(SphfanError):
    pass


class LimitExceeded(SphfanError):
    """Input is beyond the configured desk-scale caps."""


class InvalidDatum(SphfanError):
    pass


class ConfigurationError(SphfanError):
    pass


class PreconditionError(SphfanError):
    pass


class SchemaError(SphfanError):
    """Malformed problem document; ``pointer`` locates the offending value."""

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
        self.message = message
