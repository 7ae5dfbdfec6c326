"""Exception types shared across the package."""

from typing import Optional


class ShapeError(ValueError):
    """Tensor extents or channel counts do not fit the operation."""


class PoseFormatError(ValueError):
    """A pose or trajectory file line could not be parsed."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class BlobFormatError(ValueError):
    """A VOTB blob or a manifest next to it is malformed."""


class NonFiniteGradientError(FloatingPointError):
    """A gradient handed to the optimizer contains NaN or inf."""

    def __init__(self, parameter: str, bad_count: int):
        self.parameter = parameter
        self.bad_count = bad_count
        super().__init__(
            f"non-finite gradient for parameter '{parameter}' "
            f"({bad_count} non-finite entries)"
        )


class TrainingDivergedError(RuntimeError):
    """The training loss became NaN or infinite."""
