"""Hypothesis model RDMs: pitch height and chroma equivalence.

The pitch-height model encodes purely spectral listening (distance grows
linearly with semitone separation); the chroma models encode octave
equivalence (notes 12 semitones apart are similar). The binary chroma model
is the study default; the circular variant exists for sensitivity checks only.
"""
from __future__ import annotations

import numpy as np

from .errors import DegenerateError
from .rdm_engine import RDM

MODEL_KINDS = ("pitch_height", "chroma_binary", "chroma_circular")
DEFAULT_MODELS = ("pitch_height", "chroma_binary")


def pitch_height_model(note_midis) -> RDM:
    """values[i][j] = |midi_i - midi_j| normalized so the largest distance is 1."""
    midis = np.asarray(tuple(note_midis), dtype=np.float64)
    if midis.size < 2:
        raise DegenerateError("need at least 2 notes")
    if np.unique(midis).size != midis.size:
        raise DegenerateError("duplicate notes in pitch-height model")
    d = np.abs(midis[:, None] - midis[None, :])
    d /= d.max()
    return RDM(values=d, labels=tuple(int(m) for m in note_midis))


def chroma_model(note_midis, kind: str = "chroma_binary") -> RDM:
    """Octave-equivalence distances.

    chroma_binary: 0 for the same pitch class, 1 otherwise.
    chroma_circular: min(d, 12-d)/6 for d = semitone difference mod 12.
    """
    midis = np.asarray(tuple(note_midis), dtype=np.int64)
    if midis.size < 2:
        raise DegenerateError("need at least 2 notes")
    diff = np.mod(midis[:, None] - midis[None, :], 12)
    if kind == "chroma_binary":
        values = (diff != 0).astype(np.float64)
    elif kind == "chroma_circular":
        values = np.minimum(diff, 12 - diff) / 6.0
    else:
        raise DegenerateError(f"unknown chroma model kind {kind!r}")
    np.fill_diagonal(values, 0.0)
    return RDM(values=values, labels=tuple(int(m) for m in note_midis))


def model_rdm(kind: str, note_midis) -> RDM:
    if kind == "pitch_height":
        return pitch_height_model(note_midis)
    if kind in ("chroma_binary", "chroma_circular"):
        return chroma_model(note_midis, kind)
    raise DegenerateError(f"unknown model kind {kind!r}")
