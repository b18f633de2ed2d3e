"""Shared exception types."""


class DiscrimError(Exception):
    """Base class for all package errors."""


class BudgetExceeded(DiscrimError):
    """An enumeration grew past its configured cap."""


class WordFormatError(DiscrimError, ValueError):
    """A serialized word failed to parse.

    Carries the character position of the offending token.
    """

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class GroupSpecError(DiscrimError, ValueError):
    """An extension-of-centralizer spec failed validation."""

    def __init__(self, message, stage=None):
        if stage is not None:
            message = f"stage {stage}: {message}"
        super().__init__(message)
        self.stage = stage


class CertificationError(DiscrimError):
    """A certified bound was contradicted by a concrete counterexample."""
