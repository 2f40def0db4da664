"""Hypothesis model RDMs: exact values, metric properties, octave structure."""
import numpy as np
import pytest

from chroma_rsa import (DegenerateError, chroma_model, model_rdm,
                        pitch_height_model)

import oracles

SEED = 20260814
FULL_RANGE = tuple(range(60, 96))


def test_pitch_height_exact_values():
    rdm = pitch_height_model((60, 62, 65))
    expect = np.array([[0.0, 0.4, 1.0],
                       [0.4, 0.0, 0.6],
                       [1.0, 0.6, 0.0]])
    assert np.allclose(rdm.values, expect, rtol=0, atol=1e-15)
    assert rdm.labels == (60, 62, 65)


def test_pitch_height_rejects_duplicates():
    with pytest.raises(DegenerateError):
        pitch_height_model((60, 60, 62))
    with pytest.raises(DegenerateError):
        pitch_height_model((60,))


def test_chroma_binary_exact_values():
    rdm = chroma_model((60, 61, 72))
    expect = np.array([[0.0, 1.0, 0.0],
                       [1.0, 0.0, 1.0],
                       [0.0, 1.0, 0.0]])
    assert np.array_equal(rdm.values, expect)


def test_chroma_circular_exact_values():
    rdm = chroma_model((60, 63, 66), kind="chroma_circular")
    # pitch-class intervals 3, 6, 3 -> circular distances 3/6, 6/6, 3/6
    expect = np.array([[0.0, 0.5, 1.0],
                       [0.5, 0.0, 0.5],
                       [1.0, 0.5, 0.0]])
    assert np.allclose(rdm.values, expect, rtol=0, atol=1e-15)


def test_chroma_zero_pair_count_over_full_bank():
    rdm = chroma_model(FULL_RANGE)
    iu = np.triu_indices(36, k=1)
    zero_pairs = int(np.sum(rdm.values[iu] == 0.0))
    # octave (24) and double-octave (12) pairs inside MIDI 60..95
    assert zero_pairs == oracles.CHROMA_ZERO_PAIRS_60_95


def test_models_are_transposition_invariant():
    base = (60, 64, 67, 72, 79)
    shifted = tuple(m + 12 for m in base)
    for kind in ("pitch_height", "chroma_binary", "chroma_circular"):
        a = model_rdm(kind, base)
        b = model_rdm(kind, shifted)
        assert np.allclose(a.values, b.values, rtol=0, atol=1e-15)


def test_circular_chroma_triangle_inequality():
    rng = np.random.default_rng(SEED)
    for _ in range(200):
        n = int(rng.integers(3, 10))
        midis = tuple(sorted(rng.choice(np.arange(60, 96), size=n,
                                        replace=False).tolist()))
        for kind in ("chroma_circular", "chroma_binary", "pitch_height"):
            v = model_rdm(kind, midis).values
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        assert v[i, k] <= v[i, j] + v[j, k] + 1e-12


def test_model_rdm_dispatch_and_unknown_kind():
    assert np.array_equal(model_rdm("chroma_binary", (60, 61, 72)).values,
                          chroma_model((60, 61, 72)).values)
    with pytest.raises(DegenerateError):
        model_rdm("spectral", (60, 61))
