"""Exception types shared across the package."""


class ApvasError(Exception):
    """Base class for every error this package raises on purpose."""


class ConfigurationError(ApvasError):
    """Bad setup input: unknown curve id, malformed topology, bad flag combos."""


class EncodeError(ApvasError):
    """A value violates its wire invariants. Carries the offending field name."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class DecodeError(ApvasError):
    """Bytes cannot be decoded. Carries the offset where parsing failed."""

    def __init__(self, offset, message):
        super().__init__(f"at byte {offset}: {message}")
        self.offset = offset
        self.message = message


class DuplicateEntryError(ApvasError):
    """A (pk, m) pair would appear twice in one claim."""
