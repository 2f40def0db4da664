"""Study configuration: validation, serialization, stage content addressing."""
import json
import re

import pytest

from chroma_rsa import BankConfig, ConfigError, StudyConfig

SEED = 20260814


def test_seed_is_mandatory():
    with pytest.raises(ConfigError):
        StudyConfig(seed=None)
    with pytest.raises(ConfigError):
        StudyConfig(seed="7")
    StudyConfig(seed=0)  # zero is a valid seed


def test_field_validation():
    with pytest.raises(ConfigError):
        StudyConfig(seed=1, alpha=0.0)
    with pytest.raises(ConfigError):
        StudyConfig(seed=1, alpha=1.0)
    with pytest.raises(ConfigError):
        StudyConfig(seed=1, workers=-1)
    with pytest.raises(ConfigError):
        StudyConfig(seed=1, models=())
    with pytest.raises(ConfigError):
        StudyConfig(seed=1, models=("pitch_height", "timbre"))


def test_default_frontends():
    cfg = StudyConfig(seed=1)
    assert [f.kind for f in cfg.frontends] == ["mel", "cqt", "cochleagram"]
    with pytest.raises(ConfigError):
        StudyConfig(seed=1, frontends=(cfg.frontends[0], cfg.frontends[0]))


def test_dict_roundtrip():
    cfg = StudyConfig(seed=SEED, alpha=0.05, workers=2,
                      bank=BankConfig(instruments_per_family=2),
                      models=("pitch_height", "chroma_circular"))
    back = StudyConfig.from_dict(cfg.to_dict())
    assert back == cfg
    assert back.to_dict() == cfg.to_dict()


def test_from_json_file(tmp_path):
    path = tmp_path / "study.json"
    path.write_text(json.dumps({"seed": 5, "alpha": 0.02,
                                "bank": {"octave_lo": 5, "octave_hi": 5}}))
    cfg = StudyConfig.from_json_file(path)
    assert cfg.seed == 5 and cfg.alpha == 0.02
    assert cfg.bank.note_midis == tuple(range(72, 84))
    with pytest.raises(ConfigError):
        StudyConfig.from_json_file(tmp_path / "absent.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        StudyConfig.from_json_file(bad)
    arr = tmp_path / "arr.json"
    arr.write_text("[1,2]")
    with pytest.raises(ConfigError):
        StudyConfig.from_json_file(arr)


def test_replace_revalidates():
    cfg = StudyConfig(seed=1)
    assert cfg.replace(alpha=0.05).alpha == 0.05
    assert cfg.replace(alpha=0.05).seed == 1
    with pytest.raises(ConfigError):
        cfg.replace(alpha=2.0)
    with pytest.raises(ConfigError):
        cfg.replace(nonsense=1)


def test_stage_hash_scoping():
    base = StudyConfig(seed=1, out_dir="o")
    # alpha only affects rsa and figures
    other_alpha = base.replace(alpha=0.05)
    assert base.stage_hash("bank") == other_alpha.stage_hash("bank")
    assert base.stage_hash("embeddings") == other_alpha.stage_hash("embeddings")
    assert base.stage_hash("rdms") == other_alpha.stage_hash("rdms")
    assert base.stage_hash("rsa") != other_alpha.stage_hash("rsa")
    # seed changes everything from the bank down
    other_seed = base.replace(seed=2)
    for stage in ("bank", "embeddings", "rdms", "rsa", "figures"):
        assert base.stage_hash(stage) != other_seed.stage_hash(stage)
    # model list first matters at the rdm stage
    other_models = base.replace(models=("pitch_height",))
    assert base.stage_hash("embeddings") == other_models.stage_hash("embeddings")
    assert base.stage_hash("rdms") != other_models.stage_hash("rdms")
    # out_dir and workers never affect content hashes
    moved = base.replace(out_dir="elsewhere", workers=8)
    for stage in ("bank", "embeddings", "rdms", "rsa", "figures"):
        assert base.stage_hash(stage) == moved.stage_hash(stage)
    with pytest.raises(ConfigError):
        base.stage_hash("train")


def test_stage_dir_shape():
    cfg = StudyConfig(seed=1, out_dir="out")
    d = cfg.stage_dir("bank")
    assert re.fullmatch(r"bank-[0-9a-f]{12}", d.name)
    assert d.parent.name == "out"
    assert cfg.study_hash() == cfg.stage_hash("rsa")
    assert cfg.stage_hash("figures") == cfg.stage_hash("rsa")
