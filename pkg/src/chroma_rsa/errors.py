"""Exception hierarchy shared across the package.

Every error class carries the process exit code the CLI maps it to, so one
table defines both the Python API surface and the shell contract.
"""


class ChromaRsaError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ConfigError(ChromaRsaError):
    """Invalid or incomplete study configuration."""

    exit_code = 2


class MissingStageError(ChromaRsaError):
    """A pipeline stage was invoked before its prerequisite stage ran."""

    exit_code = 3


class FormatError(ChromaRsaError):
    """Embedding interchange file violates the binary format contract."""

    exit_code = 4


class BadMagicError(FormatError):
    """File does not start with the embedding-file magic; not an embedding file."""


class VersionError(FormatError):
    """Embedding file declares an unsupported format version."""


class TruncatedFileError(FormatError):
    """Declared lengths disagree with the actual byte count."""


class NonFiniteError(FormatError):
    """Embedding payload contains NaN or infinity."""


class AudioError(ChromaRsaError):
    """Synthesis parameter or WAV file problem."""

    exit_code = 5


class FrontendError(ChromaRsaError):
    """Front-end cannot process the given audio or parameters."""

    exit_code = 6


class DegenerateError(ChromaRsaError):
    """Statistic or matrix is degenerate (constant input, duplicate labels, ...)."""

    exit_code = 7


class ReportError(ChromaRsaError):
    """Figure or table rendering rejected its input."""

    exit_code = 8
