"""Pipeline stages: synth -> frontend -> rdm -> rsa -> report.

Each stage reads only the previous stage's hashed directory and writes only
its own, so reruns are idempotent and mixed-configuration artifacts are
impossible by construction. Per-instrument work inside the frontend stage can
fan out to a process pool; every output is byte-deterministic regardless of
worker count.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import frontends as fe
from . import rdm_engine as re_
from .config import StudyConfig
from .errors import ConfigError, DegenerateError, MissingStageError
from .hypothesis_models import model_rdm
from .interchange import (FILE_SUFFIX, EmbeddingSet, read_embeddings,
                          validate_study, write_embeddings)
from .report import FigureSpec, read_results_json, render_rdm_heatmap, \
    render_rsa_bars, write_tables
from .rsa_stats import evaluate_representation
from .stimulus_bank import MANIFEST_NAME, build_bank, read_manifest, read_wav

RDM_INDEX_NAME = "index.json"
AVERAGE_RDM_NAME = "_average.csv"
RESULTS_BASENAME = "rsa_results"


def _workers(config: StudyConfig) -> int:
    return config.workers if config.workers > 0 else (os.cpu_count() or 1)


def cmd_synth(config: StudyConfig) -> Path:
    """Build the stimulus bank: WAV files plus ordering manifest."""
    out = config.stage_dir("bank")
    out.mkdir(parents=True, exist_ok=True)
    entries = build_bank(config.bank, config.seed, out_dir=out)
    print(f"synth: wrote {len(entries)} notes under {out}")
    return out


def _frontend_instrument(args):
    """Worker: one instrument through every front-end. Top level for pickling."""
    bank_dir, inst, note_midis, sample_rate_hz, params_list, out_root = args
    buffers = [read_wav(Path(bank_dir) / w) for w in inst["wavs"]]
    written = []
    for params in params_list:
        vectors = np.stack([fe.pool_time(fe.compute_frontend(buf, params))
                            for buf in buffers])
        es = EmbeddingSet(representation_name=params.kind,
                          instrument_id=inst["instrument_id"],
                          note_midis=tuple(note_midis),
                          vectors=vectors.astype(np.float32))
        path = Path(out_root) / params.kind / f"{inst['instrument_id']}{FILE_SUFFIX}"
        write_embeddings(es, path)
        written.append(path)
    return [str(p) for p in written]


def cmd_frontend(config: StudyConfig) -> Path:
    """Run every configured front-end over the bank; write interchange files."""
    bank_dir = config.stage_dir("bank")
    manifest = read_manifest(bank_dir / MANIFEST_NAME)
    out = config.stage_dir("embeddings")
    for params in config.frontends:
        (out / params.kind).mkdir(parents=True, exist_ok=True)
    tasks = [(str(bank_dir), inst, manifest["note_midis"],
              manifest["sample_rate_hz"], tuple(config.frontends), str(out))
             for inst in manifest["instruments"]]
    n_workers = min(_workers(config), len(tasks))
    total = 0
    if n_workers > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            for written in pool.map(_frontend_instrument, tasks):
                total += len(written)
    else:
        for task in tasks:
            total += len(_frontend_instrument(task))
    print(f"frontend: wrote {total} embedding sets under {out}")
    return out


def _iter_representation_dirs(config: StudyConfig):
    """Internal embedding subdirectories plus any configured external ones."""
    emb = config.stage_dir("embeddings")
    if emb.is_dir():
        for sub in sorted(p for p in emb.iterdir() if p.is_dir()):
            yield sub
    for extra in config.embedding_dirs:
        p = Path(extra)
        if not p.is_dir():
            raise ConfigError(f"embedding_dirs entry is not a directory: {extra}")
        yield p


def _safe_dirname(name: str) -> str:
    return "".join(c if (c.isalnum() or c in "-_.") else "_" for c in name)


def cmd_rdm(config: StudyConfig) -> Path:
    """Per-instrument and averaged RDMs for every representation, plus model RDMs."""
    rep_dirs = list(_iter_representation_dirs(config))
    if not rep_dirs:
        raise MissingStageError(
            "no embedding directories found; run the frontend stage first "
            "or configure embedding_dirs")
    out = config.stage_dir("rdms")
    index = {"schema_version": 1, "representations": {}, "note_midis": None}
    for rep_dir in rep_dirs:
        files = sorted(rep_dir.glob(f"*{FILE_SUFFIX}"))
        if not files:
            raise MissingStageError(f"no embedding files in {rep_dir}")
        study = validate_study([read_embeddings(f) for f in files])
        if index["note_midis"] is None:
            index["note_midis"] = list(study.note_midis)
        elif index["note_midis"] != list(study.note_midis):
            raise DegenerateError(
                f"representation {study.representation_name!r} uses a different "
                "note ordering than the rest of the study")
        sub = _safe_dirname(study.representation_name)
        if sub in index["representations"]:
            raise ConfigError(
                f"two representations collapse to directory name {sub!r}")
        index["representations"][sub] = study.representation_name
        rep_out = out / sub
        rep_out.mkdir(parents=True, exist_ok=True)
        rdms = []
        for s in study.sets:
            rdm = re_.compute_rdm(s)
            rdms.append(rdm)
            re_.write_rdm_csv(rdm, rep_out / f"{_safe_dirname(s.instrument_id)}.csv")
        re_.write_rdm_csv(re_.average_rdms(rdms), rep_out / AVERAGE_RDM_NAME)
    models_dir = out / "models"
    models_dir.mkdir(parents=True, exist_ok=True)
    for kind in config.models:
        re_.write_rdm_csv(model_rdm(kind, index["note_midis"]),
                          models_dir / f"{kind}.csv")
    (out / RDM_INDEX_NAME).write_text(
        json.dumps(index, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    n_reps = len(index["representations"])
    print(f"rdm: wrote RDMs for {n_reps} representations under {out}")
    return out


def _load_rdm_index(config: StudyConfig) -> dict:
    rdm_dir = config.stage_dir("rdms")
    index_path = rdm_dir / RDM_INDEX_NAME
    if not index_path.exists():
        raise MissingStageError(
            f"no RDM index at {index_path}; run the rdm stage first")
    return json.loads(index_path.read_text(encoding="utf-8"))


def cmd_rsa(config: StudyConfig) -> Path:
    """Spearman comparisons, noise ceilings, t-tests; writes CSV + JSON tables."""
    rdm_dir = config.stage_dir("rdms")
    index = _load_rdm_index(config)
    models = {}
    for kind in config.models:
        path = rdm_dir / "models" / f"{kind}.csv"
        if not path.exists():
            raise MissingStageError(f"model RDM missing: {path}; rerun the rdm stage")
        models[kind] = re_.read_rdm_csv(path)
    reps = sorted(index["representations"].items())
    n_comparisons = len(reps) * len(models)
    results = []
    for sub, rep_name in reps:
        rep_dir = rdm_dir / sub
        inst_files = sorted(p for p in rep_dir.glob("*.csv")
                            if p.name != AVERAGE_RDM_NAME)
        if not inst_files:
            raise MissingStageError(f"no instrument RDMs in {rep_dir}")
        rdms = [re_.read_rdm_csv(p) for p in inst_files]
        results.extend(evaluate_representation(
            rep_name, rdms, models, config.alpha, n_comparisons))
    out = config.stage_dir("rsa")
    out.mkdir(parents=True, exist_ok=True)
    write_tables(results, out / f"{RESULTS_BASENAME}.csv",
                 out / f"{RESULTS_BASENAME}.json")
    print(f"rsa: wrote {len(results)} results under {out}")
    return out


def cmd_report(config: StudyConfig) -> Path:
    """Render averaged-RDM heatmaps, model heatmaps, and the RSA bar figure."""
    rdm_dir = config.stage_dir("rdms")
    index = _load_rdm_index(config)
    rsa_dir = config.stage_dir("rsa")
    results_path = rsa_dir / f"{RESULTS_BASENAME}.json"
    if not results_path.exists():
        raise MissingStageError(
            f"no RSA results at {results_path}; run the rsa stage first")
    out = config.stage_dir("figures")
    out.mkdir(parents=True, exist_ok=True)
    written = []
    study_hash = config.study_hash()
    for sub, rep_name in sorted(index["representations"].items()):
        rdm = re_.read_rdm_csv(rdm_dir / sub / AVERAGE_RDM_NAME)
        spec = FigureSpec(kind="rdm_heatmap",
                          title=f"Average RDM: {rep_name} (normalized)",
                          inputs=(f"rdms/{sub}/{AVERAGE_RDM_NAME}",),
                          config_hash=study_hash)
        svg = render_rdm_heatmap(re_.normalize_rdm(rdm), spec)
        path = out / f"rdm-{sub}.svg"
        path.write_text(svg, encoding="utf-8")
        written.append(path)
    for kind in config.models:
        rdm = re_.read_rdm_csv(rdm_dir / "models" / f"{kind}.csv")
        spec = FigureSpec(kind="rdm_heatmap",
                          title=f"Model RDM: {kind} (normalized)",
                          inputs=(f"rdms/models/{kind}.csv",),
                          config_hash=study_hash)
        try:
            normalized = re_.normalize_rdm(rdm)
        except DegenerateError as exc:
            raise DegenerateError(
                f"model {kind!r} RDM is constant over this note range; "
                "remove it from models or widen the octave range") from exc
        svg = render_rdm_heatmap(normalized, spec)
        path = out / f"model-{kind}.svg"
        path.write_text(svg, encoding="utf-8")
        written.append(path)
    results = read_results_json(results_path)
    spec = FigureSpec(kind="rsa_bars", title="RSA: representations vs hypothesis models",
                      inputs=(f"rsa/{RESULTS_BASENAME}.json",),
                      size_px=(900, 560), config_hash=study_hash)
    path = out / "rsa-bars.svg"
    path.write_text(render_rsa_bars(results, spec), encoding="utf-8")
    written.append(path)
    print(f"report: wrote {len(written)} figures under {out}")
    return out


def cmd_all(config: StudyConfig) -> Path:
    cmd_synth(config)
    cmd_frontend(config)
    cmd_rdm(config)
    cmd_rsa(config)
    return cmd_report(config)
