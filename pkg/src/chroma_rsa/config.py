"""Study configuration: one JSON-serializable object drives every stage.

Each pipeline stage writes into a directory suffixed with a hash of exactly
the configuration that influences its output, so artifacts from different
configurations can never be combined silently: a changed upstream setting
changes the hash the downstream stage looks for, and the stale directory is
simply not found.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError
from .frontends import FRONTEND_KINDS, FrontendParams, default_frontend_params
from .hypothesis_models import DEFAULT_MODELS, MODEL_KINDS
from .stimulus_bank import BankConfig

CONFIG_SCHEMA_VERSION = 1

STAGES = ("bank", "embeddings", "rdms", "rsa", "figures")


@dataclass(frozen=True)
class StudyConfig:
    seed: int
    out_dir: str = "out"
    alpha: float = 0.01
    workers: int = 0  # 0 = logical CPU count
    bank: BankConfig = BankConfig()
    frontends: tuple = None  # default: (mel, cqt, cochleagram) at the bank's rate
    models: tuple = DEFAULT_MODELS
    embedding_dirs: tuple = ()  # extra directories of external embedding files

    def __post_init__(self):
        if self.seed is None:
            raise ConfigError("a seed is required; pass --seed or set it in the config")
        if not isinstance(self.seed, int):
            raise ConfigError("seed must be an integer")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha must lie in (0, 1)")
        if self.workers < 0:
            raise ConfigError("workers must be >= 0")
        if self.frontends is None:
            object.__setattr__(self, "frontends", tuple(
                default_frontend_params(kind, self.bank.sample_rate_hz)
                for kind in FRONTEND_KINDS))
        object.__setattr__(self, "frontends", tuple(self.frontends))
        object.__setattr__(self, "models", tuple(self.models))
        object.__setattr__(self, "embedding_dirs", tuple(self.embedding_dirs))
        if not self.models:
            raise ConfigError("at least one hypothesis model is required")
        for m in self.models:
            if m not in MODEL_KINDS:
                raise ConfigError(f"unknown model kind {m!r}")
        kinds = [f.kind for f in self.frontends]
        if len(set(kinds)) != len(kinds):
            raise ConfigError("duplicate front-end kinds in config")

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "schema_version": CONFIG_SCHEMA_VERSION,
            "seed": self.seed,
            "out_dir": self.out_dir,
            "alpha": self.alpha,
            "workers": self.workers,
            "bank": {
                "families": list(self.bank.families),
                "instruments_per_family": self.bank.instruments_per_family,
                "octave_lo": self.bank.octave_lo,
                "octave_hi": self.bank.octave_hi,
                "duration_s": self.bank.duration_s,
                "sample_rate_hz": self.bank.sample_rate_hz,
            },
            "frontends": [{
                "kind": f.kind,
                "n_channels": f.n_channels,
                "fmin_hz": f.fmin_hz,
                "fmax_hz": f.fmax_hz,
                "bins_per_octave": f.bins_per_octave,
                "window_s": f.window_s,
                "hop_s": f.hop_s,
            } for f in self.frontends],
            "models": list(self.models),
            "embedding_dirs": list(self.embedding_dirs),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StudyConfig":
        try:
            bank = BankConfig(
                families=tuple(d.get("bank", {}).get("families", BankConfig.families)),
                instruments_per_family=d.get("bank", {}).get(
                    "instruments_per_family", BankConfig.instruments_per_family),
                octave_lo=d.get("bank", {}).get("octave_lo", BankConfig.octave_lo),
                octave_hi=d.get("bank", {}).get("octave_hi", BankConfig.octave_hi),
                duration_s=d.get("bank", {}).get("duration_s", BankConfig.duration_s),
                sample_rate_hz=d.get("bank", {}).get(
                    "sample_rate_hz", BankConfig.sample_rate_hz),
            )
            frontends = None
            if "frontends" in d:
                frontends = tuple(FrontendParams(**f) for f in d["frontends"])
            return cls(
                seed=d.get("seed"),
                out_dir=d.get("out_dir", "out"),
                alpha=d.get("alpha", 0.01),
                workers=d.get("workers", 0),
                bank=bank,
                frontends=frontends,
                models=tuple(d.get("models", DEFAULT_MODELS)),
                embedding_dirs=tuple(d.get("embedding_dirs", ())),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid config: {exc}") from exc

    def replace(self, **overrides) -> "StudyConfig":
        """Copy with some fields replaced; re-runs all validation."""
        try:
            return dataclasses.replace(self, **overrides)
        except TypeError as exc:
            raise ConfigError(f"invalid config override: {exc}") from exc

    @classmethod
    def from_json_file(cls, path) -> "StudyConfig":
        try:
            d = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(d, dict):
            raise ConfigError("config file must hold a JSON object")
        return cls.from_dict(d)

    # -- content addressing --------------------------------------------------

    def _stage_relevant(self, stage: str) -> dict:
        d = self.to_dict()
        relevant = {"bank": d["bank"], "seed": d["seed"]}
        if stage == "bank":
            return relevant
        relevant["frontends"] = d["frontends"]
        if stage == "embeddings":
            return relevant
        relevant["embedding_dirs"] = d["embedding_dirs"]
        relevant["models"] = d["models"]
        if stage == "rdms":
            return relevant
        relevant["alpha"] = d["alpha"]
        if stage in ("rsa", "figures"):
            return relevant
        raise ConfigError(f"unknown stage {stage!r}")

    def stage_hash(self, stage: str) -> str:
        blob = json.dumps(self._stage_relevant(stage), sort_keys=True,
                          separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]

    def stage_dir(self, stage: str) -> Path:
        return Path(self.out_dir) / f"{stage}-{self.stage_hash(stage)}"

    def study_hash(self) -> str:
        """Hash over every result-affecting field, for figure provenance."""
        return self.stage_hash("rsa")
