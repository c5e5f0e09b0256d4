"""Exception types shared across the simulation engine."""


class UxsimError(Exception):
    """Base class for all engine errors."""


class ProviderUnavailable(UxsimError):
    """The LLM provider could not be reached after exhausting retries."""

    def __init__(self, message: str, retry_count: int = 0):
        super().__init__(message)
        self.retry_count = retry_count


class SchemaViolation(UxsimError):
    """Provider output never matched the requested structure, even after re-prompts."""

    def __init__(self, message: str, retry_count: int = 0, last_output: str | None = None):
        super().__init__(message)
        self.retry_count = retry_count
        self.last_output = last_output


class ClockRegression(UxsimError):
    """A memory carried a timestamp older than one already recorded by the same clock."""


class NegativeAge(UxsimError):
    """Recency was asked about a memory from the future (t > now)."""


class DimensionMismatch(UxsimError):
    """Two embeddings of different dimensionality were compared."""


class AlreadyScored(UxsimError):
    """Importance may only be assigned once per memory piece."""


class UnknownId(UxsimError):
    """No memory piece exists with the requested id."""


class InvalidTarget(UxsimError):
    """The agent named an element id that is absent from the current observation."""


class UnknownTarget(UxsimError):
    """An action referenced a semantic id that does not resolve in the live page."""


class NotInteractable(UxsimError):
    """The resolved element exists but accepts no interaction of the requested kind."""


class BrowserGone(UxsimError):
    """The browser session is closed or unreachable."""


class MalformedDocument(UxsimError):
    """The page markup could not be parsed cleanly; a best-effort tree was used."""


class StepBudgetExceeded(UxsimError):
    """The fast loop ran out of its configured iteration budget."""


class MissingItems(UxsimError):
    """A survey instrument is incomplete (e.g. fewer than 10 usability-scale answers)."""


class OutOfScale(UxsimError):
    """A Likert answer fell outside the declared scale."""


class UnknownRun(UxsimError):
    """No persisted study run matches the requested id."""


class UnknownAgent(UxsimError):
    """No session in the run matches the requested agent id."""


class TimestampOutOfRange(UxsimError):
    """An interview was requested at a timestamp beyond the session's clock."""
