"""From embeddings to dissimilarity matrices, and onto disk.

An RDM entry is 1 - |Pearson r| between two note embeddings, so any per-note
affine transform leaves it unchanged. Model RDMs encode competing hypotheses
about which notes should resemble each other: monotone pitch height versus
shared pitch class (chroma).
"""
import tempfile
from pathlib import Path

import numpy as np

from chroma_rsa import (EmbeddingSet, compute_rdm, model_rdm, note_name,
                        read_embeddings, spearman, vectorize,
                        write_embeddings, write_rdm_csv)

# a tritone-heavy scale plus one octave pair so both models have structure
midis = (60, 62, 64, 67, 69, 72)

# hand-made embeddings whose geometry follows pitch height
rng = np.random.default_rng(11)
base = np.array([[m, m ** 2, m ** 3] for m in midis], dtype=np.float64)
vectors = (base / base.max(axis=0)
           + rng.normal(scale=1e-4, size=base.shape))
s = EmbeddingSet(representation_name="demo/poly", instrument_id="synth-00",
                 note_midis=midis, vectors=vectors.astype(np.float32))
rdm = compute_rdm(s)
print("notes:", " ".join(note_name(m) for m in midis))
print("RDM row for C4:", np.array_str(rdm.values[0], precision=3))

# compare against both hypothesis models by rank correlation
for kind in ("pitch_height", "chroma_binary"):
    rho = spearman(vectorize(rdm), vectorize(model_rdm(kind, midis)))
    print(f"spearman vs {kind:13s} = {rho:+.3f}")

# embeddings travel between tools as .aemb files; payloads are float32 and
# survive a round trip bit-exactly
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "synth-00.aemb"
    write_embeddings(s, path)
    back = read_embeddings(path)
    assert np.array_equal(back.vectors, s.vectors)
    print(f"\n{path.name}: {path.stat().st_size} bytes, "
          f"{back.vectors.shape[0]} notes x {back.vectors.shape[1]} dims, "
          f"round trip exact")
    write_rdm_csv(rdm, Path(tmp) / "rdm.csv")
    print("rdm.csv header:",
          (Path(tmp) / "rdm.csv").read_text().splitlines()[0])
