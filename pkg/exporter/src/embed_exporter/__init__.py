"""Bridge pretrained audio networks to the .aemb embedding interchange format."""
from .errors import (AudioReadError, ExporterError, LayerRangeError,
                     ManifestError, ModelLoadError, ModelSpecError,
                     SampleRateError)
from .exporter import LayerInfo, ModelSpec, export, list_layers
from .interchange_writer import write_embedding_file

__all__ = [
    "AudioReadError", "ExporterError", "LayerInfo", "LayerRangeError",
    "ManifestError", "ModelLoadError", "ModelSpec", "ModelSpecError",
    "SampleRateError", "export", "list_layers", "write_embedding_file",
]
__version__ = "0.1.0"
