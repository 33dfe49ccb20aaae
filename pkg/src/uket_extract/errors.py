"""Exception types shared across the pipeline."""

from __future__ import annotations


class UketError(Exception):
    """Base class for all pipeline errors."""


class InvalidDocumentError(UketError):
    """A judgment document violates its invariants (e.g. empty text)."""


class CorpusIntegrityError(UketError):
    """A corpus violates its invariants (e.g. duplicate case ids)."""


class UnknownTemplateError(UketError):
    """A prompt template id/version is not present in the registry."""


class DuplicateTemplateError(UketError):
    """The same (template_id, version) was registered twice."""


class CacheMissError(UketError):
    """Replay-strict completion requested for a key that is not cached."""

    def __init__(self, digest: str) -> None:
        super().__init__(f"no cached completion for replay key {digest}")
        self.digest = digest


class ExhaustedRetriesError(UketError):
    """A live request kept failing transiently until the attempt budget ran out."""


class AuthenticationError(UketError):
    """Credential missing or rejected by the completion endpoint."""


class BudgetExceededError(UketError):
    """Estimated spend reached the configured cap; live call refused."""


class ResponseParseError(UketError):
    """A model response could not be parsed into an extraction record."""


class MissingSectionError(ResponseParseError):
    def __init__(self, section: str) -> None:
        super().__init__(f"missing section: {section}")
        self.section = section


class AmbiguousSectionError(ResponseParseError):
    def __init__(self, section: str) -> None:
        super().__init__(f"section heading matched twice: {section}")
        self.section = section


class UnparseableLabelError(ResponseParseError):
    def __init__(self, raw_label: str) -> None:
        super().__init__(f"unparseable outcome label: {raw_label!r}")
        self.raw_label = raw_label


class InvalidAnnotationError(UketError):
    """An annotation failed rubric validation."""

    def __init__(self, violations: list[str]) -> None:
        super().__init__("; ".join(violations))
        self.violations = violations


class AnnotationConflictError(UketError):
    """An annotation write carried a stale version counter."""

    def __init__(self, case_id: str, expected: int, current: int) -> None:
        super().__init__(
            f"stale version for {case_id}: submitted {expected}, current {current}"
        )
        self.case_id = case_id
        self.expected = expected
        self.current = current


class DanglingReferenceError(UketError):
    """An annotation references a case with no parsed record."""


class EmptyExportError(UketError):
    """A dataset export selected zero cases."""
