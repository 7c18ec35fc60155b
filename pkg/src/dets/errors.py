"""Exception types shared across the package."""


class ConfigError(ValueError):
    """An experiment configuration field is missing, unknown, or out of range."""


class ProtocolError(RuntimeError):
    """The coordination protocol reached a state its invariants forbid."""


class TraceError(ValueError):
    """A trace references arms or rounds inconsistent with its instance."""
