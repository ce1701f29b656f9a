"""Exception taxonomy shared across the pipeline."""


class PdtSynthError(Exception):
    """Base class for all pipeline errors."""


# word list
class MalformedLine(PdtSynthError):
    pass


class DuplicateWord(PdtSynthError):
    pass


class EmptyList(PdtSynthError):
    pass


class KTooLarge(PdtSynthError):
    pass


# provider
class ProviderError(PdtSynthError):
    """Base for anything the chat provider can raise."""


class AuthError(ProviderError):
    """401/403 from the endpoint; never retried."""


class TransientExhausted(ProviderError):
    """Retry budget spent on 429/5xx/timeouts."""


class MalformedProviderReply(ProviderError):
    """Reply missing text or usage, or with inconsistent token totals."""


class ScriptExhausted(ProviderError):
    """Mock script has no unconsumed line matching the request."""


# synthesis / scoring
class UnparseableReply(PdtSynthError):
    """Generation reply could not be parsed after the retry budget."""


class UnparseableCsvReply(PdtSynthError):
    """Scoring reply had no usable CSV line after the retry budget."""


class PipelineStalled(PdtSynthError):
    """Too many consecutive provider failures during a batch."""


class WrongPromptKind(PdtSynthError):
    pass


# alignment
class LengthMismatch(PdtSynthError):
    pass


class OutOfRange(PdtSynthError):
    pass


# diversity
class EmptyCorpus(PdtSynthError):
    pass


class SingleDocument(PdtSynthError):
    pass


# costing
class MissingUsage(PdtSynthError):
    pass


class ZeroRows(PdtSynthError):
    pass


# datastore
class SchemaMismatch(PdtSynthError):
    pass
