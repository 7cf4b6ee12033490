"""Error hierarchy.

``DataError`` subclasses describe bad input files or records (CLI exit 2);
``ConfigError`` subclasses describe invalid component/flag combinations
(CLI exit 3).
"""


class CascadeNERError(Exception):
    pass


class DataError(CascadeNERError, ValueError):
    pass


class ConfigError(CascadeNERError, ValueError):
    pass


class MalformedLine(DataError):
    def __init__(self, lineno, message):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class UnknownLabel(DataError):
    pass


class EmptyCorpus(DataError):
    pass


class InvalidCorpus(DataError):
    pass


class InvalidEntityType(UnknownLabel):
    pass


class InvalidToken(DataError):
    pass


class OverlappingSpans(DataError):
    pass


class SpanOutOfRange(DataError):
    pass


class MissingTypeForFullScheme(DataError):
    pass


class LengthMismatch(DataError):
    pass


class NoSpansInCorpus(DataError):
    pass


class MalformedJson(DataError):
    pass


class UnknownSentenceId(DataError):
    pass


class MissingPrediction(DataError):
    pass


class DuplicatePrediction(DataError):
    pass


class SchemeMismatch(ConfigError):
    pass


class MissingComponent(ConfigError):
    pass


class InvalidHyperParameter(ConfigError):
    pass


class SingleClassCorpusWarning(UserWarning):
    """Training data holds a single class; the model degenerates to it."""
