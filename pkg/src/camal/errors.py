"""Exception types shared across the package."""


class CamalError(Exception):
    """Base class for all package errors."""


class MalformedRow(CamalError):
    """A CSV row could not be parsed; carries the 1-based line number."""

    def __init__(self, line_number, message):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class DuplicateTimestamp(CamalError):
    """Two readings share the same timestamp."""


class NonMonotonicTimestamps(CamalError):
    """Timestamps decrease somewhere in the input."""


class UpsamplingRequested(CamalError):
    """Requested resample period is finer than the series grid."""


class LengthMismatch(CamalError):
    """Two arrays that must align have different lengths."""


class ShapeMismatch(CamalError):
    """Tensor shapes are incompatible with the layer contract."""


class NoGroundTruthAvailable(CamalError):
    """Weak label requested for a window without per-timestep truth."""


class InvalidConfig(CamalError):
    """A configuration value violates its invariant."""


class SingleClassTrainingSet(CamalError):
    """Training requires both a positive and a negative example."""


class NonFiniteLoss(CamalError):
    """Loss became NaN/Inf during training."""


class HouseOverlap(CamalError):
    """A test house also appears in the ensemble's training houses."""


class CheckpointSchemaMismatch(CamalError):
    """Checkpoint or bundle was written with an incompatible schema version."""


class EmptyInput(CamalError):
    """An operation that needs at least one element received none."""
