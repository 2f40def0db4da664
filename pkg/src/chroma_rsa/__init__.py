"""Representational similarity analysis of auditory front-ends.

A synthetic instrument bank is rendered by additive synthesis, passed
through mel, constant-Q, and cochleagram front-ends, summarized as
correlation-distance representational dissimilarity matrices, and compared
against pitch-height and chroma hypothesis models with Spearman rank
correlation, noise ceilings, and Bonferroni-corrected t-tests.
"""
from .config import STAGES, StudyConfig
from .errors import (AudioError, BadMagicError, ChromaRsaError, ConfigError,
                     DegenerateError, FormatError, FrontendError,
                     MissingStageError, NonFiniteError, ReportError,
                     TruncatedFileError, VersionError)
from .frontends import (FRONTEND_KINDS, FrontendParams, TimeFreqMatrix,
                        cochleagram, compute_frontend, cqt, cqt_q_factor,
                        default_frontend_params, erb_center_frequencies,
                        mel_spectrogram, pool_time)
from .hypothesis_models import (DEFAULT_MODELS, MODEL_KINDS, chroma_model,
                                model_rdm, pitch_height_model)
from .interchange import (EmbeddingSet, Study, read_embeddings,
                          validate_study, write_embeddings)
from .pipeline import (cmd_all, cmd_frontend, cmd_rdm, cmd_report, cmd_rsa,
                       cmd_synth)
from .rdm_engine import (RDM, average_rdms, compute_rdm, correlation_distance,
                         normalize_rdm, read_rdm_csv, write_rdm_csv)
from .report import (FigureSpec, read_results_json, render_rdm_heatmap,
                     render_rsa_bars, write_tables)
from .rsa_stats import (RsaResult, bonferroni, compare_study,
                        evaluate_representation, noise_ceiling,
                        one_sample_ttest, sem, spearman, vectorize)
from .stimulus_bank import (FAMILIES, MANIFEST_NAME, BankConfig, AudioBuffer,
                            NoteSpec, TimbreProfile, build_bank, midi_to_freq,
                            note_name, read_manifest, read_wav, sample_timbre,
                            synthesize_note, write_wav)

__version__ = "0.1.0"

__all__ = [
    "AudioBuffer", "AudioError", "BadMagicError", "BankConfig",
    "ChromaRsaError", "ConfigError", "DEFAULT_MODELS", "DegenerateError",
    "EmbeddingSet", "FAMILIES", "FigureSpec", "FormatError", "FRONTEND_KINDS",
    "FrontendError", "FrontendParams", "MANIFEST_NAME", "MissingStageError",
    "MODEL_KINDS", "NonFiniteError", "NoteSpec", "RDM", "ReportError",
    "RsaResult", "STAGES", "Study", "StudyConfig", "TimbreProfile",
    "TimeFreqMatrix", "TruncatedFileError", "VersionError", "average_rdms",
    "bonferroni", "build_bank", "chroma_model", "cmd_all", "cmd_frontend",
    "cmd_rdm", "cmd_report", "cmd_rsa", "cmd_synth", "cochleagram",
    "compare_study", "compute_frontend", "compute_rdm",
    "correlation_distance", "cqt", "cqt_q_factor", "default_frontend_params",
    "erb_center_frequencies", "evaluate_representation", "mel_spectrogram",
    "midi_to_freq", "model_rdm", "noise_ceiling", "normalize_rdm", "note_name",
    "one_sample_ttest", "pitch_height_model", "pool_time", "read_embeddings",
    "read_manifest", "read_rdm_csv", "read_results_json", "read_wav",
    "render_rdm_heatmap", "render_rsa_bars", "sample_timbre", "sem",
    "spearman", "synthesize_note", "validate_study", "vectorize",
    "write_embeddings", "write_rdm_csv", "write_tables", "write_wav",
]
