"""Evaluate embeddings that were produced outside this package.

Any tool can join the comparison by dropping one .aemb file per instrument
into a directory and naming the representation consistently. Here we fake an
external system with a random projection of the mel frontend; real use cases
are hidden layers of pretrained audio networks.
"""
import tempfile
from pathlib import Path

import numpy as np

from chroma_rsa import (BankConfig, EmbeddingSet, StudyConfig, cmd_frontend,
                        cmd_rdm, cmd_rsa, cmd_synth, default_frontend_params,
                        mel_spectrogram, pool_time, read_manifest,
                        read_results_json, read_wav, write_embeddings)

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    cfg = StudyConfig(
        seed=7,
        out_dir=str(tmp / "out"),
        bank=BankConfig(instruments_per_family=1, octave_lo=5, octave_hi=6),
        frontends=(default_frontend_params("mel"),),
        workers=1,
        embedding_dirs=(str(tmp / "external"),),
    )

    # the bank must exist before the external tool can embed it
    cmd_synth(cfg)
    manifest = read_manifest(cfg.stage_dir("bank") / "manifest.json")

    # "external network": mel frontend -> fixed random projection to 24 dims
    rng = np.random.default_rng(99)
    proj = rng.normal(size=(128, 24)).astype(np.float32)
    params = default_frontend_params("mel", manifest["sample_rate_hz"])
    (tmp / "external").mkdir()
    for inst in manifest["instruments"]:
        rows = []
        for rel in inst["wavs"]:
            buf = read_wav(cfg.stage_dir("bank") / rel)
            rows.append(pool_time(mel_spectrogram(buf, params)) @ proj)
        s = EmbeddingSet(representation_name="extnet/layer-0",
                         instrument_id=inst["instrument_id"],
                         note_midis=tuple(manifest["note_midis"]),
                         vectors=np.stack(rows).astype(np.float32))
        write_embeddings(s, tmp / "external" / f"{inst['instrument_id']}.aemb")

    # remaining stages pick the external directory up alongside the frontends
    cmd_frontend(cfg)
    cmd_rdm(cfg)
    cmd_rsa(cfg)
    for r in read_results_json(cfg.stage_dir("rsa") / "rsa_results.json"):
        print(f"{r.representation_name:16s} {r.model_name:14s} "
              f"mean rho {r.mean_rho:+.3f}  p {r.p_vs_zero:.2e}")
