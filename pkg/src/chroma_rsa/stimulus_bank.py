"""Synthetic note bank: 30 instruments x 36 chromatic notes (octaves 4-6).

Additive synthesis stands in for recorded instrument notes. Three timbre
families (flute-like, guitar-like, keyboard-like) differ in partial count,
spectral rolloff, and envelope; every instrument gets its own sampled timbre,
a small fixed detune, and per-note random phases. Generation is a pure
function of (config, seed).
"""
from __future__ import annotations

import json
import wave
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import AudioError, ConfigError, MissingStageError

FAMILIES = ("flute", "guitar", "keyboard")

MANIFEST_NAME = "manifest.json"
MANIFEST_SCHEMA_VERSION = 1

_NOTE_NAMES = ("C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B")


def midi_to_freq(midi: int) -> float:
    """12-TET frequency of a MIDI note number (69 = A4 = 440 Hz)."""
    return 440.0 * 2.0 ** ((midi - 69) / 12.0)


def note_name(midi: int) -> str:
    """C4, C#4, ... style label for axis ticks and file naming."""
    return f"{_NOTE_NAMES[midi % 12]}{midi // 12 - 1}"


@dataclass(frozen=True)
class NoteSpec:
    """One stimulus: which note, played by which instrument."""

    midi: int
    instrument_id: str
    family: str

    def __post_init__(self):
        if not 60 <= self.midi <= 95:
            raise ConfigError(f"midi {self.midi} outside the bank range 60-95")
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}")


@dataclass(frozen=True)
class TimbreProfile:
    """Per-instrument synthesis recipe; shared by all 36 notes of the instrument."""

    harmonic_amplitudes: tuple  # relative gain of partial k at frequency k*f0
    attack_s: float
    decay_s: float
    sustain_level: float
    release_s: float
    detune_cents: float

    def __post_init__(self):
        if len(self.harmonic_amplitudes) == 0:
            raise AudioError("timbre needs at least one harmonic")
        if any(a < 0 for a in self.harmonic_amplitudes):
            raise AudioError("harmonic amplitudes must be nonnegative")
        if not 0.0 <= self.sustain_level <= 1.0:
            raise AudioError("sustain_level must lie in [0, 1]")
        if abs(self.detune_cents) > 10.0:
            raise AudioError("|detune_cents| must be <= 10")
        if min(self.attack_s, self.decay_s, self.release_s) < 0:
            raise AudioError("envelope times must be nonnegative")


@dataclass(frozen=True)
class AudioBuffer:
    """Mono sample sequence in [-1, 1] with its sample rate."""

    samples: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.float64)
        object.__setattr__(self, "samples", s)
        if s.ndim != 1 or s.size == 0:
            raise AudioError("buffer must be a non-empty 1-D sample sequence")
        if not np.all(np.isfinite(s)):
            raise AudioError("buffer contains non-finite samples")
        if float(np.max(np.abs(s))) > 1.0 + 1e-12:
            raise AudioError("buffer exceeds the [-1, 1] sample range")
        if self.sample_rate_hz <= 0:
            raise AudioError("sample rate must be positive")

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate_hz


def _adsr_envelope(n: int, timbre: TimbreProfile, sample_rate_hz: int) -> np.ndarray:
    na = round(timbre.attack_s * sample_rate_hz)
    nd = round(timbre.decay_s * sample_rate_hz)
    nr = round(timbre.release_s * sample_rate_hz)
    env = np.full(n, timbre.sustain_level)
    env[:na] = np.linspace(0.0, 1.0, na, endpoint=False)
    decay = np.linspace(1.0, timbre.sustain_level, nd, endpoint=False)
    decay = decay[: max(0, n - na)]
    env[na:na + decay.size] = decay
    if nr > 0:
        # release fades whatever level is left, so a short decay still closes cleanly
        env[n - nr:] *= np.linspace(1.0, 0.0, min(nr, n))
    return env


def synthesize_note(spec: NoteSpec, timbre: TimbreProfile, duration_s: float,
                    sample_rate_hz: int, seed: int) -> AudioBuffer:
    """Additive synthesis of one note, peak-normalized to 0.9.

    Partials sit at integer multiples of the detuned fundamental; any partial
    at or above Nyquist is dropped rather than aliased. The seed fixes the
    random partial phases, making the buffer bit-reproducible.
    """
    if duration_s < timbre.attack_s + timbre.release_s:
        raise AudioError("duration shorter than attack + release")
    n = round(duration_s * sample_rate_hz)
    if n <= 0:
        raise AudioError("duration too short for the sample rate")
    f0 = midi_to_freq(spec.midi) * 2.0 ** (timbre.detune_cents / 1200.0)
    rng = np.random.default_rng(seed)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=len(timbre.harmonic_amplitudes))
    t = np.arange(n) / sample_rate_hz
    x = np.zeros(n)
    for k, (amp, phase) in enumerate(zip(timbre.harmonic_amplitudes, phases), start=1):
        fk = k * f0
        if fk >= sample_rate_hz / 2:
            break
        if amp > 0:
            x += amp * np.sin(2.0 * np.pi * fk * t + phase)
    x *= _adsr_envelope(n, timbre, sample_rate_hz)
    peak = float(np.max(np.abs(x)))
    if peak == 0.0:
        raise AudioError("synthesized buffer is silent; cannot peak-normalize")
    x *= 0.9 / peak
    return AudioBuffer(samples=x, sample_rate_hz=sample_rate_hz)


@dataclass(frozen=True)
class BankConfig:
    """Shape of the stimulus bank; defaults mirror the standard 30x36 study."""

    families: tuple = FAMILIES
    instruments_per_family: int = 10
    octave_lo: int = 4
    octave_hi: int = 6
    duration_s: float = 2.5
    sample_rate_hz: int = 16000

    def __post_init__(self):
        if not self.families or any(f not in FAMILIES for f in self.families):
            raise ConfigError(f"families must be drawn from {FAMILIES}")
        if self.instruments_per_family < 1:
            raise ConfigError("instruments_per_family must be >= 1")
        if not (4 <= self.octave_lo <= self.octave_hi <= 6):
            raise ConfigError("octave range must lie within 4-6")
        if self.duration_s < 0.5:
            raise ConfigError("duration_s must be >= 0.5")
        if self.sample_rate_hz < 8000:
            raise ConfigError("sample_rate_hz must be >= 8000")

    @property
    def note_midis(self) -> tuple:
        # octave o spans MIDI 12*(o+1) .. 12*(o+1)+11 (C4 = 60)
        lo = 12 * (self.octave_lo + 1)
        hi = 12 * (self.octave_hi + 1) + 11
        return tuple(range(lo, hi + 1))


# Family parameter distributions. Partial counts, rolloff, and envelopes keep
# the families audibly distinct; the even-partial attenuation models pluck /
# strike-position comb filtering and controls how much spectrum octave pairs
# share (empirically required for the mel-vs-CQT chroma contrast).
_FAMILY_RANGES = {
    "flute": dict(n_partials=(4, 8), rolloff=(2.0, 3.0), attack=(0.08, 0.20),
                  decay=(0.05, 0.15), sustain=(0.70, 0.90), release=(0.10, 0.25)),
    "guitar": dict(n_partials=(10, 18), rolloff=(1.1, 1.6), attack=(0.003, 0.010),
                   decay=(0.40, 0.90), sustain=(0.05, 0.25), release=(0.05, 0.15)),
    "keyboard": dict(n_partials=(16, 28), rolloff=(0.8, 1.3), attack=(0.002, 0.008),
                     decay=(0.20, 0.50), sustain=(0.30, 0.60), release=(0.05, 0.15)),
}
_EVEN_PARTIAL_GAIN = (0.35, 0.65)
_PARTIAL_JITTER = (0.7, 1.3)
_DETUNE_CENTS = (-10.0, 10.0)


def sample_timbre(family: str, rng: np.random.Generator) -> TimbreProfile:
    """Draw one instrument's timbre from its family distribution."""
    r = _FAMILY_RANGES[family]
    n_partials = int(rng.integers(r["n_partials"][0], r["n_partials"][1] + 1))
    rolloff = rng.uniform(*r["rolloff"])
    k = np.arange(1, n_partials + 1, dtype=np.float64)
    amps = k ** (-rolloff) * rng.uniform(*_PARTIAL_JITTER, size=n_partials)
    amps[1::2] *= rng.uniform(*_EVEN_PARTIAL_GAIN)
    return TimbreProfile(
        harmonic_amplitudes=tuple(float(a) for a in amps),
        attack_s=float(rng.uniform(*r["attack"])),
        decay_s=float(rng.uniform(*r["decay"])),
        sustain_level=float(rng.uniform(*r["sustain"])),
        release_s=float(rng.uniform(*r["release"])),
        detune_cents=float(rng.uniform(*_DETUNE_CENTS)),
    )


@dataclass(frozen=True)
class BankEntry:
    spec: NoteSpec
    buffer: AudioBuffer


def _instrument_ids(config: BankConfig):
    for family in config.families:
        for i in range(config.instruments_per_family):
            yield f"{family}-{i:02d}", family


def build_bank(config: BankConfig, seed: int, out_dir=None) -> list:
    """Synthesize the whole bank in deterministic order.

    Returns the ordered list of BankEntry (instruments in id order, notes
    ascending by MIDI within each instrument). When out_dir is given, also
    writes one WAV per note plus a manifest describing the ordering.
    """
    ids = list(_instrument_ids(config))
    root = np.random.SeedSequence(seed)
    children = root.spawn(len(ids))
    midis = config.note_midis

    entries = []
    manifest_instruments = []
    out_path = Path(out_dir) if out_dir is not None else None
    for (instrument_id, family), child in zip(ids, children):
        rng = np.random.default_rng(child)
        timbre = sample_timbre(family, rng)
        note_seeds = rng.integers(0, 2**32 - 1, size=len(midis))
        wav_paths = []
        for midi, note_seed in zip(midis, note_seeds):
            spec = NoteSpec(midi=midi, instrument_id=instrument_id, family=family)
            buf = synthesize_note(spec, timbre, config.duration_s,
                                  config.sample_rate_hz, int(note_seed))
            entries.append(BankEntry(spec=spec, buffer=buf))
            if out_path is not None:
                rel = Path("wav") / instrument_id / f"{midi:03d}.wav"
                (out_path / rel).parent.mkdir(parents=True, exist_ok=True)
                write_wav(buf, out_path / rel)
                wav_paths.append(rel.as_posix())
        manifest_instruments.append({
            "instrument_id": instrument_id,
            "family": family,
            "wavs": wav_paths,
        })

    if out_path is not None:
        manifest = {
            "schema_version": MANIFEST_SCHEMA_VERSION,
            "seed": seed,
            "sample_rate_hz": config.sample_rate_hz,
            "duration_s": config.duration_s,
            "note_midis": list(midis),
            "instruments": manifest_instruments,
        }
        text = json.dumps(manifest, sort_keys=True, indent=2) + "\n"
        (out_path / MANIFEST_NAME).write_text(text, encoding="utf-8")
    return entries


def read_manifest(path) -> dict:
    path = Path(path)
    if not path.exists():
        raise MissingStageError(f"no bank manifest at {path}; run the synth stage first")
    manifest = json.loads(path.read_text(encoding="utf-8"))
    for key in ("schema_version", "seed", "sample_rate_hz", "note_midis", "instruments"):
        if key not in manifest:
            raise AudioError(f"manifest missing field {key!r}")
    return manifest


def write_wav(buffer: AudioBuffer, path) -> None:
    """16-bit PCM mono RIFF/WAVE."""
    pcm = np.round(buffer.samples * 32767.0).astype("<i2")
    with wave.open(str(path), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(buffer.sample_rate_hz)
        w.writeframes(pcm.tobytes())


def read_wav(path) -> AudioBuffer:
    """Read a mono 16-bit PCM WAV; anything else is an explicit error."""
    try:
        with wave.open(str(path), "rb") as w:
            channels = w.getnchannels()
            width = w.getsampwidth()
            rate = w.getframerate()
            nframes = w.getnframes()
            raw = w.readframes(nframes)
    except (wave.Error, EOFError) as exc:
        raise AudioError(f"malformed WAV file {path}: {exc}") from exc
    if channels != 1:
        raise AudioError(f"unsupported channel count {channels} (mono only)")
    if width != 2:
        raise AudioError(f"unsupported sample width {width * 8} bit (16-bit only)")
    if len(raw) != nframes * 2:
        raise AudioError(f"WAV payload truncated: header promises {nframes} frames")
    samples = np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32767.0
    np.clip(samples, -1.0, 1.0, out=samples)
    return AudioBuffer(samples=samples, sample_rate_hz=rate)
