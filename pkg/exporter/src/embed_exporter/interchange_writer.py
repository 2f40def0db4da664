"""Writer for the .aemb embedding interchange format.

Implements the published byte layout directly (magic "AEMB", little-endian
u32 header fields, length-prefixed UTF-8 strings, u16 MIDI numbers, row-major
float32 payload) so this tool stays independent of any consumer library. The
file ends exactly at the last payload byte.
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import ModelSpecError

MAGIC = b"AEMB"
VERSION = 1


def _packed_str(s: str) -> bytes:
    raw = s.encode("utf-8")
    return struct.pack("<I", len(raw)) + raw


def write_embedding_file(representation_name: str, instrument_id: str,
                         note_midis, vectors, path) -> Path:
    """One instrument's embeddings: one float32 row per note, MIDI-tagged."""
    if not representation_name or not instrument_id:
        raise ModelSpecError("representation_name and instrument_id must be non-empty")
    midis = [int(m) for m in note_midis]
    if not midis or any(not 0 <= m <= 0xFFFF for m in midis):
        raise ModelSpecError("note MIDI numbers must fit in u16 and be non-empty")
    if any(b <= a for a, b in zip(midis, midis[1:])):
        raise ModelSpecError("note MIDI numbers must be strictly ascending")
    v = np.ascontiguousarray(vectors, dtype="<f4")
    if v.ndim != 2 or v.shape[0] != len(midis) or v.shape[1] < 1:
        raise ModelSpecError(
            f"vectors must be (n_notes, dim) with dim >= 1, got {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ModelSpecError("embedding payload contains non-finite values")

    blob = (MAGIC
            + struct.pack("<I", VERSION)
            + _packed_str(representation_name)
            + _packed_str(instrument_id)
            + struct.pack("<II", len(midis), v.shape[1])
            + struct.pack(f"<{len(midis)}H", *midis)
            + v.tobytes())
    path = Path(path)
    path.write_bytes(blob)
    return path
