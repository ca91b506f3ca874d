"""Exception types shared across the toolkit.

All recoverable data/input problems derive from ToolkitError so the CLI can
map them to a single exit code; anything else is treated as an internal bug.
"""


class ToolkitError(Exception):
    """Base class for expected data or protocol errors."""


# frame decoding / directory reading

class MalformedHeader(ToolkitError):
    pass


class MaxvalUnsupported(ToolkitError):
    pass


class TruncatedRaster(ToolkitError):
    pass


class MissingIndex(ToolkitError):
    def __init__(self, index, path=None):
        self.index = index
        where = f" in {path}" if path else ""
        super().__init__(f"missing frame index {index}{where}")


class MixedDimensions(ToolkitError):
    pass


class EmptyDirectory(ToolkitError):
    pass


# composition

class WrongFrameCount(ToolkitError):
    pass


class NonConsecutiveIndices(ToolkitError):
    pass


# dataset building

class UnknownClassDir(ToolkitError):
    pass


class DegenerateSplit(UserWarning):
    """A class has too few videos to populate both sides of the split."""


# model / training

class ShapeMismatch(ToolkitError):
    pass


class EmptyClass(ToolkitError):
    pass


class DivergedLoss(ToolkitError):
    pass


class NoConvLayer(ToolkitError):
    pass


# evaluation

class EmptyInput(ToolkitError):
    pass


class PredictorFailure(ToolkitError):
    def __init__(self, message, sample_id=None):
        self.sample_id = sample_id
        if sample_id is not None:
            message = f"{message} (sample {sample_id!r})"
        super().__init__(message)


# scoring

class EmptyCohort(ToolkitError):
    pass


class MixedCohort(ToolkitError):
    pass


class NameMismatch(ToolkitError):
    pass


# benchmarking

class InsufficientSamples(ToolkitError):
    pass
