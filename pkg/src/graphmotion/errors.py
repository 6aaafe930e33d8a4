"""Exception types shared across the library."""


class GraphMotionError(Exception):
    """Base class for all library errors."""


class ContractError(GraphMotionError):
    """A caller violated a documented precondition (dimension mismatch etc.)."""


class FileFormatError(GraphMotionError):
    """A document could not be parsed at all (bad JSON, wrong container)."""


class SchemaError(GraphMotionError):
    """A document parsed but a field is missing, malformed, or inconsistent.

    The message names the offending field path.
    """


class VersionError(GraphMotionError):
    """A document declares an unsupported format_version."""


class FreeSpaceNotFoundError(GraphMotionError):
    """Rejection sampling failed to find a collision-free configuration."""


class DivergenceError(GraphMotionError):
    """Training loss became non-finite."""
