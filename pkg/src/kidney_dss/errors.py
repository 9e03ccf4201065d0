"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all kidney_dss errors."""


class ParseError(ToolkitError):
    """A CSV row is structurally malformed (wrong arity, unreadable cell)."""


class SchemaError(ToolkitError):
    """The input does not match the expected column/token schema."""


class ValidationError(ToolkitError):
    """A field value is outside its valid domain."""


class DataError(ToolkitError):
    """A dataset is unusable for the requested operation (empty, degenerate
    split sizes, a single outcome class, a fully-missing feature)."""


class FitError(ToolkitError):
    """Model training failed (divergent optimization, invalid config)."""


class InferenceError(ToolkitError):
    """Statistical inference on a fitted model is not computable."""


class ConfigError(ToolkitError):
    """An experiment configuration is malformed or inconsistent."""


class ArtifactError(ToolkitError):
    """A saved model artifact cannot be read or written."""


class ArtifactVersionError(ArtifactError):
    """The artifact file declares an unsupported format version."""


class ArtifactCorruptError(ArtifactError):
    """The artifact file is truncated or fails its digest check."""


class StageError(ToolkitError):
    """Wraps a pipeline failure with the name of the stage that raised it."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
