"""Exception types raised across the package."""


class LungSegError(Exception):
    """Base class for all package errors."""


# --- volume I/O ---

class MissingKeyError(LungSegError):
    """A required MetaImage header key is absent."""


class DimMismatchError(LungSegError):
    """A payload length disagrees with the declared dimensions."""


class UnsupportedTypeError(LungSegError):
    """Header declares an element type or layout we do not handle."""


class IoError(LungSegError):
    """A read or write to disk failed."""


class UnmappedLabelError(LungSegError):
    """A label value does not appear in the supplied label map."""


# --- preprocessing / slabs ---

class OutOfWindowError(LungSegError):
    """An HU value falls outside the [-1000, 400] window."""


class OutOfRangeError(LungSegError):
    """A slab center index has no n-1 or n+1 neighbour inside the volume."""


class GeometryMismatchError(LungSegError):
    """Two volumes that must share geometry do not."""


# --- network / weights ---

class InvalidConfigError(LungSegError):
    """A network configuration violates its invariants."""


class ShapeMismatchError(LungSegError):
    """Tensor shapes disagree with the expected contract."""


class BadMagicError(LungSegError):
    """A weight container does not start with the expected magic bytes."""


class NameMismatchError(LungSegError):
    """Strict weight loading found differing tensor name sets."""


class BadWeightsError(LungSegError):
    """A weight container does not fit the configured network."""


# --- training / metrics ---

class InvalidKError(LungSegError):
    """Fold count is not usable for the given id list."""


class EmptyDatasetError(LungSegError):
    """No training samples were provided."""


class BothEmptyError(LungSegError):
    """Dice is undefined: both masks are empty."""


class NoIncludedSlicesError(LungSegError):
    """No slice in the evaluated range has lung in either mask."""


class MissingPairError(LungSegError):
    """A scan id is present in one directory but not its counterpart."""


# --- CLI ---

class ConfigError(LungSegError):
    """A run configuration file is malformed or references missing paths."""
