class DocsynthError(Exception):
    """Base class for every error the toolkit reports to the user."""


class ParameterError(DocsynthError, ValueError):
    """Raised when an operation receives parameters outside its domain."""


class DimensionMismatchError(DocsynthError, ValueError):
    """Raised when images or masks that must share a shape do not."""
