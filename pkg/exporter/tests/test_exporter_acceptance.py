"""Acceptance: a small checkpoint over the standard bank.

One test per criterion clause, so -v gives one PASSED/FAILED line each:
the exporter must produce 30 interchange files that pass the consumer's
validation, the embeddings must encode pitch height significantly, and for
a speech-style checkpoint chroma must not reach significance at alpha 0.01.
"""
import numpy as np
import pytest

from chroma_rsa import (compute_rdm, evaluate_representation, model_rdm,
                        read_embeddings, validate_study)
from embed_exporter import ModelSpec, export

ALPHA = 0.01


@pytest.fixture(scope="module")
def study(checkpoint, full_bank, tmp_path_factory):
    out = tmp_path_factory.mktemp("aemb")
    paths = export(full_bank, ModelSpec(model=checkpoint), out)
    sets = [read_embeddings(p) for p in paths]
    validate_study(sets)
    rdms = [compute_rdm(s) for s in sets]
    midis = sets[0].note_midis
    models = {kind: model_rdm(kind, midis)
              for kind in ("pitch_height", "chroma_binary")}
    results = evaluate_representation(sets[0].representation_name, rdms,
                                      models, alpha=ALPHA,
                                      n_comparisons=len(models))
    return paths, sets, {r.model_name: r for r in results}


def test_criterion_export_produces_30_validated_files(study):
    paths, sets, _ = study
    assert len(paths) == 30
    assert all(s.vectors.shape == (36, 32) for s in sets)
    assert len({s.representation_name for s in sets}) == 1
    print(f"\n  30 files, all pass consumer validation, "
          f"representation {sets[0].representation_name!r}")


def test_criterion_pitch_height_significantly_positive(study):
    _, _, res = study
    r = res["pitch_height"]
    assert r.mean_rho > 0
    assert r.sig_vs_zero
    print(f"\n  pitch height: mean rho {r.mean_rho:+.3f}, "
          f"p {r.p_vs_zero:.2e} < {ALPHA / 2:.4f}")


def test_criterion_chroma_not_significant_for_speech_style_checkpoint(study):
    _, _, res = study
    r = res["chroma_binary"]
    assert not (r.sig_vs_zero and r.mean_rho > 0)
    print(f"\n  chroma: mean rho {r.mean_rho:+.3f}, p {r.p_vs_zero:.2e} (n.s.)")
