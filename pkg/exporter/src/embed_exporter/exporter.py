"""Run pretrained audio networks over a WAV bank and export hidden states.

The bank is described by its manifest (JSON with sample_rate_hz, note_midis,
and per-instrument WAV lists, index-aligned with note_midis). For each
instrument the notes are batched through the network once, one hidden-state
layer is selected, frames are mean-pooled, and the resulting matrix is
written as one interchange file. Inference runs single-threaded in eval mode
so a re-export is byte-identical.
"""
from __future__ import annotations

import json
import math
import wave
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.signal import resample_poly

from .errors import (AudioReadError, LayerRangeError, ManifestError,
                     ModelLoadError, ModelSpecError, SampleRateError)
from .interchange_writer import write_embedding_file

POOLINGS = ("mean",)


@dataclass(frozen=True)
class ModelSpec:
    """Which network, which hidden-state layer, which pooling."""

    model: str  # hub id or local checkpoint directory
    layer: int = None  # None = final hidden state
    pooling: str = "mean"

    def __post_init__(self):
        if not self.model:
            raise ModelSpecError("model id or checkpoint path must be non-empty")
        if self.layer is not None and not isinstance(self.layer, int):
            raise ModelSpecError("layer must be an integer or None")
        if self.pooling not in POOLINGS:
            raise ModelSpecError(
                f"pooling {self.pooling!r} is not defined; choose from {POOLINGS}")

    @property
    def name(self) -> str:
        return self.model.rstrip("/").split("/")[-1]


@dataclass(frozen=True)
class LayerInfo:
    index: int
    dim: int
    description: str
    default: bool


def _coerce_spec(model_spec) -> ModelSpec:
    if isinstance(model_spec, ModelSpec):
        return model_spec
    return ModelSpec(model=str(model_spec))


def _hidden_layer_count(config) -> int:
    for attr in ("num_hidden_layers", "encoder_layers"):
        n = getattr(config, attr, None)
        if isinstance(n, int):
            return n
    raise ModelLoadError(
        f"cannot determine hidden layer count for architecture {config.model_type!r}")


def _hidden_dim(config) -> int:
    for attr in ("hidden_size", "d_model"):
        d = getattr(config, attr, None)
        if isinstance(d, int):
            return d
    raise ModelLoadError(
        f"cannot determine hidden dimension for architecture {config.model_type!r}")


def _load(spec: ModelSpec):
    # import here so spec/list errors do not require torch at module import
    import torch
    import transformers

    transformers.utils.logging.set_verbosity_error()
    transformers.utils.logging.disable_progress_bar()
    try:
        extractor = transformers.AutoFeatureExtractor.from_pretrained(spec.model)
        model = transformers.AutoModel.from_pretrained(spec.model)
    except Exception as e:
        raise ModelLoadError(f"cannot load model {spec.model!r}: {e}") from e
    model.eval()
    torch.set_num_threads(1)  # fixed reduction order -> byte-identical exports
    module = model.get_encoder() if getattr(model.config, "is_encoder_decoder",
                                            False) else model
    return module, extractor, _hidden_layer_count(model.config)


def list_layers(model_spec) -> list:
    """Describe the selectable hidden-state layers (0 = pre-transformer)."""
    import transformers

    spec = _coerce_spec(model_spec)
    transformers.utils.logging.set_verbosity_error()
    try:
        config = transformers.AutoConfig.from_pretrained(spec.model)
    except Exception as e:
        raise ModelLoadError(f"cannot load model {spec.model!r}: {e}") from e
    n = _hidden_layer_count(config)
    dim = _hidden_dim(config)
    out = []
    for k in range(n + 1):
        desc = ("frontend output, before any transformer block" if k == 0
                else f"output of transformer block {k}")
        out.append(LayerInfo(index=k, dim=dim, description=desc,
                             default=(k == n)))
    return out


def _read_manifest(path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise ManifestError(f"no bank manifest at {path}")
    try:
        manifest = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise ManifestError(f"unreadable bank manifest {path}: {e}") from e
    for key in ("sample_rate_hz", "note_midis", "instruments"):
        if key not in manifest:
            raise ManifestError(f"bank manifest missing field {key!r}")
    for inst in manifest["instruments"]:
        if "instrument_id" not in inst or "wavs" not in inst:
            raise ManifestError("manifest instrument entries need instrument_id and wavs")
        if len(inst["wavs"]) != len(manifest["note_midis"]):
            raise ManifestError(
                f"instrument {inst.get('instrument_id')!r} has "
                f"{len(inst['wavs'])} wavs for {len(manifest['note_midis'])} notes")
    return manifest


def _read_wav(path) -> tuple:
    try:
        with wave.open(str(path), "rb") as w:
            if w.getnchannels() != 1 or w.getsampwidth() != 2:
                raise AudioReadError(f"{path}: need mono 16-bit PCM")
            sr = w.getframerate()
            raw = w.readframes(w.getnframes())
    except AudioReadError:
        raise
    except (OSError, wave.Error, EOFError) as e:
        raise AudioReadError(f"cannot read WAV {path}: {e}") from e
    samples = np.frombuffer(raw, dtype="<i2").astype(np.float32) / 32768.0
    return samples, sr


def _resample(x: np.ndarray, sr_from: int, sr_to: int) -> np.ndarray:
    g = math.gcd(sr_from, sr_to)
    return resample_poly(x, sr_to // g, sr_from // g).astype(np.float32)


def export(manifest_path, model_spec, out_dir, resample: bool = True) -> list:
    """Write one interchange file per manifest instrument; returns the paths."""
    import torch

    spec = _coerce_spec(model_spec)
    manifest = _read_manifest(manifest_path)
    bank_dir = Path(manifest_path).parent
    bank_sr = int(manifest["sample_rate_hz"])
    midis = [int(m) for m in manifest["note_midis"]]

    module, extractor, n_layers = _load(spec)
    layer = spec.layer if spec.layer is not None else n_layers
    if not 0 <= layer <= n_layers:
        raise LayerRangeError(
            f"layer {layer} out of range for {spec.name}; valid layers: 0..{n_layers}")
    representation_name = f"{spec.name}/layer-{layer}"

    target_sr = int(extractor.sampling_rate)
    if bank_sr != target_sr and not resample:
        raise SampleRateError(
            f"bank is {bank_sr} Hz but {spec.name} expects {target_sr} Hz; "
            "enable resampling or rebuild the bank at the model's rate")

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for inst in manifest["instruments"]:
        notes = []
        for rel in inst["wavs"]:
            samples, sr = _read_wav(bank_dir / rel)
            if sr != bank_sr:
                raise ManifestError(
                    f"{rel}: file is {sr} Hz but manifest says {bank_sr} Hz")
            if sr != target_sr:
                samples = _resample(samples, sr, target_sr)
            notes.append(samples)
        # equal-length notes batch into one forward pass; mixed lengths would
        # need padding, which changes frame counts, so they run one by one
        groups = ([notes] if len({n.size for n in notes}) == 1
                  else [[n] for n in notes])
        rows = []
        for group in groups:
            inputs = extractor(group, sampling_rate=target_sr,
                               return_tensors="pt")
            with torch.no_grad():
                out = module(**inputs, output_hidden_states=True)
            hidden = out.hidden_states
            if len(hidden) != n_layers + 1:
                raise LayerRangeError(
                    f"{spec.name} returned {len(hidden)} hidden states; "
                    f"expected {n_layers + 1}")
            rows.append(hidden[layer].mean(dim=1).cpu().numpy())
        vectors = np.concatenate(rows, axis=0).astype(np.float32)
        path = write_embedding_file(representation_name,
                                    inst["instrument_id"], midis, vectors,
                                    out_dir / f"{inst['instrument_id']}.aemb")
        written.append(path)
    return written
