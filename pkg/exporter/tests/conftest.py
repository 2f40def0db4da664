"""Shared fixtures: a tiny deterministic local checkpoint and WAV banks.

The checkpoint is a miniature wav2vec2-style network with seeded random
weights, saved in the standard Hugging Face directory format, so every test
runs offline and reproducibly. Banks are synthesized with the analysis
library, which the exporter itself never imports; tests use it only to
produce inputs and to validate outputs through the published file contracts.
"""
import pytest
import torch
from transformers import Wav2Vec2Config, Wav2Vec2FeatureExtractor, Wav2Vec2Model

from chroma_rsa import BankConfig, build_bank

CHECKPOINT_SEED = 1234


def _make_checkpoint(path, sampling_rate):
    torch.manual_seed(CHECKPOINT_SEED)
    config = Wav2Vec2Config(
        vocab_size=32, hidden_size=32, num_hidden_layers=2,
        num_attention_heads=2, intermediate_size=64,
        conv_dim=(32, 32, 32, 32), conv_stride=(5, 4, 4, 4),
        conv_kernel=(10, 8, 8, 8), conv_bias=False,
        num_conv_pos_embeddings=16, num_conv_pos_embedding_groups=2,
    )
    model = Wav2Vec2Model(config)
    model.eval()
    model.save_pretrained(path)
    Wav2Vec2FeatureExtractor(sampling_rate=sampling_rate).save_pretrained(path)
    return str(path)


@pytest.fixture(scope="session")
def checkpoint(tmp_path_factory):
    return _make_checkpoint(tmp_path_factory.mktemp("ckpt") / "tinynet", 16000)


@pytest.fixture(scope="session")
def checkpoint_8k(tmp_path_factory):
    # same weights, but the extractor demands 8 kHz input
    return _make_checkpoint(tmp_path_factory.mktemp("ckpt8k") / "tinynet-8k", 8000)


@pytest.fixture(scope="session")
def mini_bank(tmp_path_factory):
    """3 instruments x 24 notes; returns the manifest path."""
    root = tmp_path_factory.mktemp("bank")
    build_bank(BankConfig(instruments_per_family=1, octave_lo=5, octave_hi=6),
               seed=7, out_dir=root)
    return root / "manifest.json"


@pytest.fixture(scope="session")
def full_bank(tmp_path_factory):
    """The standard 30-instrument, 36-note bank; returns the manifest path."""
    root = tmp_path_factory.mktemp("fullbank")
    build_bank(BankConfig(), seed=7, out_dir=root)
    return root / "manifest.json"
