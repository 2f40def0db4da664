"""Representational dissimilarity matrices over note embeddings.

Dissimilarity is correlation distance, 1 - |Pearson r|, so an instrument's
RDM is invariant to any per-note affine transform of its embeddings. All math
runs in 64-bit regardless of the 32-bit interchange payload, and inner
products use exact (order-invariant) summation so that pairs which are equal
by construction, e.g. permuted one-hot embeddings, come out bitwise tied;
downstream rank statistics depend on that.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DegenerateError
from .interchange import EmbeddingSet


class DegeneratePairWarning(UserWarning):
    """A zero-variance embedding forced the maximal distance for its pairs."""


@dataclass(frozen=True)
class RDM:
    """Square symmetric dissimilarity matrix with zero diagonal, values in [0,1]."""

    values: np.ndarray
    labels: tuple  # note MIDI numbers, the row/column ordering

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "labels", tuple(int(x) for x in self.labels))
        n = len(self.labels)
        if v.shape != (n, n):
            raise DegenerateError(f"RDM shape {v.shape} does not match {n} labels")
        if n < 2:
            raise DegenerateError("RDM needs at least 2 notes")
        if not np.all(np.isfinite(v)):
            raise DegenerateError("RDM contains non-finite values")
        if np.max(np.abs(v - v.T)) > 1e-12:
            raise DegenerateError("RDM must be symmetric within 1e-12")
        if np.any(np.diag(v) != 0.0):
            raise DegenerateError("RDM diagonal must be exactly zero")
        if v.min() < 0.0 or v.max() > 1.0:
            raise DegenerateError("correlation-distance RDM values must lie in [0,1]")

    @property
    def n(self) -> int:
        return len(self.labels)


def _fsum(values: np.ndarray) -> float:
    # exact summation: result depends only on the multiset of addends
    return math.fsum(values.tolist())


def correlation_distance(a, b) -> float:
    """1 - |Pearson r|; a constant vector yields the maximal distance 1.0."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DegenerateError("vectors must have equal length")
    if a.ndim != 1 or a.size < 2:
        raise DegenerateError("vectors must be 1-D with length >= 2")
    ac = a - _fsum(a) / a.size
    bc = b - _fsum(b) / b.size
    na = math.sqrt(_fsum(ac * ac))
    nb = math.sqrt(_fsum(bc * bc))
    if na == 0.0 or nb == 0.0:
        warnings.warn("zero-variance embedding in correlation_distance",
                      DegeneratePairWarning, stacklevel=2)
        return 1.0
    r = _fsum(ac * bc) / (na * nb)
    return float(min(max(1.0 - abs(r), 0.0), 1.0))


def compute_rdm(s: EmbeddingSet) -> RDM:
    """Pairwise correlation distances between the set's note embeddings."""
    x = s.vectors.astype(np.float64)
    n = x.shape[0]
    if n < 2:
        raise DegenerateError("need at least 2 notes to form an RDM")
    xc = x - np.array([_fsum(row) for row in x])[:, None] / x.shape[1]
    sq = np.array([_fsum(row * row) for row in xc])
    dead = sq == 0.0
    if np.any(dead):
        warnings.warn(
            f"{s.instrument_id}: {int(dead.sum())} zero-variance embedding(s); "
            "their distances are set to the maximum 1.0",
            DegeneratePairWarning, stacklevel=2)
    norms = np.sqrt(np.where(dead, 1.0, sq))
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            if dead[i] or dead[j]:
                dij = 1.0
            else:
                r = _fsum(xc[i] * xc[j]) / (norms[i] * norms[j])
                dij = min(max(1.0 - abs(r), 0.0), 1.0)
            d[i, j] = dij
            d[j, i] = dij
    return RDM(values=d, labels=s.note_midis)


def average_rdms(rdms) -> RDM:
    """Element-wise mean of same-shaped, same-labeled RDMs."""
    rdms = list(rdms)
    if not rdms:
        raise DegenerateError("cannot average an empty RDM list")
    labels = rdms[0].labels
    for r in rdms[1:]:
        if r.labels != labels:
            raise DegenerateError("label mismatch in average_rdms")
    stack = np.stack([r.values for r in rdms])
    mean = stack.mean(axis=0)
    mean = 0.5 * (mean + mean.T)
    np.fill_diagonal(mean, 0.0)
    return RDM(values=mean, labels=labels)


def normalize_rdm(rdm: RDM) -> RDM:
    """Min-max scale the off-diagonal entries to [0, 1] for plotting.

    Never feeds the statistics path; Spearman is rank-based and would not care.
    """
    mask = ~np.eye(rdm.n, dtype=bool)
    off = rdm.values[mask]
    lo = float(off.min())
    hi = float(off.max())
    if hi <= lo:
        raise DegenerateError("constant off-diagonal RDM cannot be normalized")
    out = (rdm.values - lo) / (hi - lo)
    out[~mask] = 0.0
    out = 0.5 * (out + out.T)
    np.clip(out, 0.0, 1.0, out=out)
    return RDM(values=out, labels=rdm.labels)


def write_rdm_csv(rdm: RDM, path) -> None:
    """n header labels then n rows; floats printed with full round-trip precision."""
    lines = [",".join(str(l) for l in rdm.labels)]
    for row in rdm.values:
        lines.append(",".join(repr(float(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_rdm_csv(path) -> RDM:
    text = Path(path).read_text(encoding="utf-8").strip().split("\n")
    labels = tuple(int(x) for x in text[0].split(","))
    values = np.array([[float(v) for v in line.split(",")] for line in text[1:]])
    return RDM(values=values, labels=labels)
