"""Exception types shared across the pipeline."""


class CurvetileError(Exception):
    """Base class for all package errors."""


class ValidationError(CurvetileError):
    """Bad user input: malformed scene, invalid stroke, unknown group."""

    def __init__(self, message, field=None):
        self.field = field
        super().__init__(message if field is None else f"{field}: {message}")


class NotSimpleError(ValidationError):
    """A stroke self-intersects."""


class OrbitOverlapError(ValidationError):
    """A stroke intersects one of its own symmetry images.

    ``op_a``/``op_b`` index the two group operations whose placed copies
    collide (lattice translates of the same operation report equal indices).
    """

    def __init__(self, message, op_a, op_b):
        self.op_a = op_a
        self.op_b = op_b
        super().__init__(message)


class PipelineError(CurvetileError):
    """A pipeline stage failed; carries the stage name for diagnostics."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {cause}")
