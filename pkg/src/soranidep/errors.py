"""Exception types raised across the pipeline.

Every error carries a ``category`` (its class name) so the CLI can print a
single machine-parsable line.
"""


class PipelineError(Exception):
    @property
    def category(self) -> str:
        return type(self).__name__


# corpus I/O
class MissingColumn(PipelineError, ValueError):
    pass


class DuplicateId(PipelineError, ValueError):
    pass


class UnknownLabel(PipelineError, ValueError):
    def __init__(self, value, line):
        super().__init__(f"unknown label {value!r} on line {line}")
        self.value = value
        self.line = line


class MalformedRecord(PipelineError, ValueError):
    def __init__(self, line, reason=""):
        msg = f"malformed record on line {line}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)
        self.line = line


class IoFailure(PipelineError, OSError):
    pass


class UnlabeledPost(PipelineError, ValueError):
    def __init__(self, post_id):
        super().__init__(f"post {post_id!r} has no label")
        self.post_id = post_id


class EmptyKeywordSet(PipelineError, ValueError):
    pass


class InvalidTable(PipelineError, ValueError):
    pass


# features
class EmptyCorpus(PipelineError, ValueError):
    pass


class EmptyVocabulary(PipelineError, ValueError):
    pass


# models
class EmptyTrainingSet(PipelineError, ValueError):
    pass


class NegativeFeature(PipelineError, ValueError):
    pass


class NonFiniteObjective(PipelineError, FloatingPointError):
    pass


class DimensionMismatch(PipelineError, ValueError):
    pass


class VersionMismatch(PipelineError, ValueError):
    pass


class CorruptModel(PipelineError, ValueError):
    pass


# resampling / evaluation
class EmptyClass(PipelineError, ValueError):
    pass


class FractionOutOfRange(PipelineError, ValueError):
    pass


class KTooLarge(PipelineError, ValueError):
    pass


class LengthMismatch(PipelineError, ValueError):
    pass


class LabelOutOfRange(PipelineError, ValueError):
    pass


class EmptyMatrix(PipelineError, ValueError):
    pass


# harness / cli
class InvalidSpec(PipelineError, ValueError):
    pass


class EmptyReportList(PipelineError, ValueError):
    pass


class ExperimentFailed(PipelineError, RuntimeError):
    def __init__(self, stage, cause):
        super().__init__(f"stage {stage!r} failed: {cause.__class__.__name__}: {cause}")
        self.stage = stage
        self.cause = cause


class UnknownKey(PipelineError, KeyError):
    def __str__(self):
        return f"unknown config key {self.args[0]!r}"


class TypeMismatch(PipelineError, TypeError):
    pass


class ConfigFileNotFound(PipelineError, FileNotFoundError):
    pass
