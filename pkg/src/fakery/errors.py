"""Exception hierarchy shared across the package."""


class FakeryError(Exception):
    """Base class for all package errors."""


class DecodeError(FakeryError):
    """Image file could not be decoded."""


class DimensionError(FakeryError):
    """Array or image has an unexpected shape."""


class EmptyDatasetError(FakeryError):
    """No images found under the dataset root."""


class DegenerateClassError(FakeryError):
    """A class has too few members to split."""


class FormatError(FakeryError):
    """Cache file has a bad magic or version."""


class TruncationError(FakeryError):
    """Cache file is shorter than its header promises."""


class SingleClassError(FakeryError):
    """Operation requires both classes to be present."""


class LengthMismatchError(FakeryError):
    """Paired sequences have different lengths."""


class NoPositivesError(FakeryError):
    """Operation requires at least one positive label."""


class CacheConflictError(FakeryError):
    """Existing cache disagrees with the requested feature spec."""


class MissingArtifactError(FakeryError):
    """A required trained artifact does not exist."""


class NoResultsError(FakeryError):
    """No metrics files available to report on."""
