from __future__ import annotations


class HatebenchError(Exception):
    """Base class for all errors raised by hatebench."""


class ValidationError(HatebenchError):
    """Raised when user input, configuration or data violates a contract.

    The CLI maps these errors to exit code 1.
    """


class PipelineError(HatebenchError):
    """Raised when a pipeline stage fails at runtime.

    The CLI maps these errors to exit code 2.

    Attributes:
        stage: Name of the stage that failed (e.g. ``"train"``).
    """

    stage = "pipeline"


class PreconditionError(ValidationError):
    """Raised when an operation is called with arguments it does not accept."""


class IngestionError(ValidationError):
    """Raised when a raw source cannot be ingested."""

    def __init__(self, source_id: str, detail: str) -> None:
        super().__init__(f"{source_id}: {detail}")
        self.source_id = source_id


class RuleCoverageError(ValidationError):
    """Raised when a label rule meets a raw value it does not cover."""

    def __init__(self, source_id: str, value: str) -> None:
        super().__init__(
            f"{source_id}: raw label value {value!r} is not covered by the mapping rule"
        )
        self.source_id = source_id
        self.value = value


class EmptyCorpusError(ValidationError):
    """Raised when a corpus has no surviving records."""


class StratificationError(ValidationError):
    """Raised when a stratified split cannot be formed."""


class RegistryError(ValidationError):
    """Raised when a name is looked up in a registry that does not know it."""

    def __init__(self, kind: str, name: str, known: list[str]) -> None:
        super().__init__(
            f"Unknown {kind}: {name!r} (known: {', '.join(sorted(known))})"
        )
        self.name = name
        self.known = tuple(sorted(known))


class ProvenanceError(ValidationError):
    """Raised when results from different corpus snapshots are combined."""


class ShapeError(ValidationError):
    """Raised when a tensor does not have the shape a model expects."""

    def __init__(self, expected: object, actual: object) -> None:
        super().__init__(f"Shape mismatch: expected {expected}, got {actual}")
        self.expected = expected
        self.actual = actual


class BackendUnavailableError(PipelineError):
    """Raised when an embedding backend or model checkpoint cannot be loaded."""

    stage = "embed"


class DivergedTrainingError(PipelineError):
    """Raised when the training loss becomes NaN or infinite."""

    stage = "train"

    def __init__(self, epoch: int, loss: float) -> None:
        super().__init__(f"Training diverged at epoch {epoch} (loss={loss})")
        self.epoch = epoch
        self.loss = loss


class EvaluationError(PipelineError):
    """Raised when a model cannot be evaluated."""

    stage = "evaluate"


class LeakageError(PipelineError):
    """Raised when a test record also appears in the training set."""

    stage = "split"


class StageFailedError(PipelineError):
    """Raised when a stage fails with an error that is not a hatebench error."""

    def __init__(self, stage: str, detail: str) -> None:
        super().__init__(f"{stage} stage failed: {detail}")
        self.stage = stage
