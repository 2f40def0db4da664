"""Binary embedding interchange format.

One file holds the per-note embedding matrix for a single instrument under a
single representation (an internal front-end or an external network layer).
Keeping external activations and internal embeddings on one code path means
the RDM/RSA machinery never needs to know where vectors came from.

Byte layout (all integers little-endian):

    offset  size       field
    0       4          magic "AEMB"
    4       4          u32 format version (= 1)
    8       4 + L1     u32 length L1, then UTF-8 representation_name
    ...     4 + L2     u32 length L2, then UTF-8 instrument_id
    ...     4          u32 note count n
    ...     4          u32 embedding dimension d
    ...     2*n        u16 MIDI note numbers, ascending
    ...     4*n*d      float32 payload, row-major (note-major)

Payload precision is 32-bit because activations originate as float32;
statistics downstream are computed in 64-bit after load.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (BadMagicError, FormatError, NonFiniteError,
                     TruncatedFileError, VersionError)

MAGIC = b"AEMB"
FORMAT_VERSION = 1
FILE_SUFFIX = ".aemb"


@dataclass(frozen=True)
class EmbeddingSet:
    """Ordered per-note embeddings for one instrument under one representation."""

    representation_name: str
    instrument_id: str
    note_midis: tuple
    vectors: np.ndarray  # (notes, dim) float32

    def __post_init__(self):
        v = np.ascontiguousarray(self.vectors, dtype=np.float32)
        object.__setattr__(self, "vectors", v)
        object.__setattr__(self, "note_midis", tuple(int(m) for m in self.note_midis))
        if not self.representation_name or not self.instrument_id:
            raise FormatError("representation_name and instrument_id must be non-empty")
        if len(self.note_midis) == 0:
            raise FormatError("embedding set needs at least one note")
        if v.ndim != 2 or v.shape[0] != len(self.note_midis):
            raise FormatError("vectors must be (notes x dim) matching note_midis")
        if v.shape[1] < 1:
            raise FormatError("embedding dimension must be >= 1")
        if any(b <= a for a, b in zip(self.note_midis, self.note_midis[1:])):
            raise FormatError("note_midis must be strictly ascending")
        if any(not 0 <= m <= 0xFFFF for m in self.note_midis):
            raise FormatError("note_midis must fit in u16")
        if not np.all(np.isfinite(v)):
            raise NonFiniteError("embedding vectors contain non-finite values")

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])


def _encode(s: EmbeddingSet) -> bytes:
    name = s.representation_name.encode("utf-8")
    inst = s.instrument_id.encode("utf-8")
    head = [
        MAGIC,
        struct.pack("<I", FORMAT_VERSION),
        struct.pack("<I", len(name)), name,
        struct.pack("<I", len(inst)), inst,
        struct.pack("<I", len(s.note_midis)),
        struct.pack("<I", s.dim),
        np.asarray(s.note_midis, dtype="<u2").tobytes(),
        s.vectors.astype("<f4", copy=False).tobytes(),
    ]
    return b"".join(head)


def write_embeddings(s: EmbeddingSet, path) -> None:
    """Serialize; rewriting the same set produces byte-identical files."""
    Path(path).write_bytes(_encode(s))


class _Cursor:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if n < 0 or self.pos + n > len(self.data):
            raise TruncatedFileError(
                f"file ends at byte {len(self.data)} but {self.pos + n} were promised")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]


def read_embeddings(path) -> EmbeddingSet:
    """Parse and fully validate one embedding file."""
    data = Path(path).read_bytes()
    if len(data) < 4 or data[:4] != MAGIC:
        raise BadMagicError(f"{path}: not an embedding file (bad magic)")
    cur = _Cursor(data)
    cur.take(4)
    version = cur.u32()
    if version != FORMAT_VERSION:
        raise VersionError(f"{path}: unsupported format version {version}")
    try:
        name = cur.take(cur.u32()).decode("utf-8")
        inst = cur.take(cur.u32()).decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path}: string field is not valid UTF-8") from exc
    n_notes = cur.u32()
    dim = cur.u32()
    if n_notes == 0 or dim == 0:
        raise FormatError(f"{path}: zero note count or dimension")
    midis = np.frombuffer(cur.take(2 * n_notes), dtype="<u2")
    payload = np.frombuffer(cur.take(4 * n_notes * dim), dtype="<f4")
    if cur.pos != len(data):
        raise TruncatedFileError(
            f"{path}: {len(data) - cur.pos} trailing bytes beyond the declared payload")
    vectors = payload.reshape(n_notes, dim)
    # EmbeddingSet.__post_init__ re-validates ordering and finiteness
    return EmbeddingSet(representation_name=name, instrument_id=inst,
                        note_midis=tuple(int(m) for m in midis), vectors=vectors)


@dataclass(frozen=True)
class Study:
    """Validated, ordered collection of embedding sets for one representation."""

    representation_name: str
    note_midis: tuple
    sets: tuple  # EmbeddingSet, sorted by instrument_id

    @property
    def instrument_ids(self) -> tuple:
        return tuple(s.instrument_id for s in self.sets)


def validate_study(sets) -> Study:
    """Check cross-set consistency and return a canonically ordered study."""
    sets = list(sets)
    if len(sets) < 2:
        raise FormatError("a study needs at least 2 embedding sets")
    first = sets[0]
    seen = set()
    for s in sets:
        if s.representation_name != first.representation_name:
            raise FormatError(
                f"mixed representations in one study: {s.representation_name!r} "
                f"vs {first.representation_name!r}")
        if s.dim != first.dim:
            raise FormatError(
                f"dimension mismatch for {s.instrument_id}: {s.dim} vs {first.dim}")
        if s.note_midis != first.note_midis:
            raise FormatError(f"note ordering mismatch for {s.instrument_id}")
        if s.instrument_id in seen:
            raise FormatError(f"duplicate instrument {s.instrument_id!r}")
        seen.add(s.instrument_id)
    ordered = tuple(sorted(sets, key=lambda s: s.instrument_id))
    return Study(representation_name=first.representation_name,
                 note_midis=first.note_midis, sets=ordered)
