"""Error hierarchy; every class carries the process exit code the CLI uses."""


class ExporterError(Exception):
    exit_code = 1


class ModelSpecError(ExporterError):
    """Bad model spec: unknown pooling, malformed layer, empty model id."""

    exit_code = 2


class ManifestError(ExporterError):
    """Bank manifest missing, unreadable, or without the required fields."""

    exit_code = 3


class ModelLoadError(ExporterError):
    """Checkpoint or feature extractor could not be loaded."""

    exit_code = 4


class LayerRangeError(ExporterError):
    """Requested hidden-state layer outside the model's valid range."""

    exit_code = 5


class SampleRateError(ExporterError):
    """Bank rate differs from the model's expected rate and resampling is off."""

    exit_code = 6


class AudioReadError(ExporterError):
    """WAV file unreadable or not mono 16-bit PCM."""

    exit_code = 7
