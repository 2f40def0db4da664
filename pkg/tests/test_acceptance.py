"""Acceptance gate: one test per acceptance criterion.

Run with -v to get one PASSED/FAILED line per criterion. Criterion names:

  1  significance pattern on the full synthetic bank, runtime < 5 minutes
  2a quadratic (midi, midi^2) embeddings vs pitch-height oracle  [known red]
  2b one-hot pitch-class embeddings reproduce the binary chroma model
  3  statistics match brute-force oracles on 1000 random instances
  4  invariant suite (RDM properties, affine/monotone invariance, CQT octave)
  5  format suite (round trip, corruption errors, pipeline determinism)
"""
import json
import math
import time

import numpy as np
import pytest

from chroma_rsa import (AudioBuffer, BadMagicError, BankConfig, EmbeddingSet,
                        NoteSpec, RDM, StudyConfig, TimbreProfile,
                        TruncatedFileError, cmd_all, compare_study,
                        compute_rdm, cqt, default_frontend_params, model_rdm,
                        noise_ceiling, one_sample_ttest, pool_time,
                        read_embeddings, sem, spearman, synthesize_note,
                        vectorize, write_embeddings)
from chroma_rsa.rsa_stats import student_t_p_two_sided

import oracles

ACCEPTANCE_SEED = 7
ALPHA = 0.01
RUNTIME_BUDGET_S = 300.0
FULL_MIDIS = tuple(range(60, 96))


@pytest.fixture(scope="module")
def full_study(tmp_path_factory):
    """The complete default study: 30 instruments x 36 notes, all stages."""
    root = tmp_path_factory.mktemp("study")
    cfg = StudyConfig(seed=ACCEPTANCE_SEED, out_dir=str(root), workers=1)
    t0 = time.monotonic()
    cmd_all(cfg)
    elapsed = time.monotonic() - t0
    doc = json.loads((cfg.stage_dir("rsa") / "rsa_results.json").read_text())
    results = {(r["representation_name"], r["model_name"]): r
               for r in doc["results"]}
    return cfg, results, elapsed


def _sig_positive(r):
    return bool(r["sig_vs_zero"]) and r["mean_rho"] is not None and r["mean_rho"] > 0


def test_criterion_1_significance_pattern_and_runtime(full_study):
    _, res, elapsed = full_study
    lines = []

    def check(name, ok):
        lines.append(f"  [{'ok' if ok else 'FAIL'}] {name}")
        return ok

    checks = []
    for rep in ("mel", "cochleagram"):
        pitch = res[(rep, "pitch_height")]
        chroma = res[(rep, "chroma_binary")]
        checks.append(check(
            f"{rep}: pitch-height significantly > 0 "
            f"(mean={pitch['mean_rho']:+.3f}, p={pitch['p_vs_zero']:.2e})",
            _sig_positive(pitch)))
        checks.append(check(
            f"{rep}: chroma NOT significantly > 0 "
            f"(mean={chroma['mean_rho']:+.3f}, p={chroma['p_vs_zero']:.2e})",
            not _sig_positive(chroma)))
    cqt_chroma = res[("cqt", "chroma_binary")]
    mel_chroma = res[("mel", "chroma_binary")]
    checks.append(check(
        f"cqt: chroma significantly > 0 "
        f"(mean={cqt_chroma['mean_rho']:+.3f}, p={cqt_chroma['p_vs_zero']:.2e})",
        _sig_positive(cqt_chroma)))
    checks.append(check(
        f"cqt chroma strictly above mel chroma "
        f"({cqt_chroma['mean_rho']:+.3f} > {mel_chroma['mean_rho']:+.3f})",
        cqt_chroma["mean_rho"] > mel_chroma["mean_rho"]))
    checks.append(check(f"runtime {elapsed:.1f}s < {RUNTIME_BUDGET_S:.0f}s",
                        elapsed < RUNTIME_BUDGET_S))
    print("\n" + "\n".join(lines))
    assert all(checks), "\n".join(lines)


def quadratic_set(powers=(1, 2)):
    vectors = np.array([[float(m) ** p for p in powers] for m in FULL_MIDIS],
                       dtype=np.float32)
    return EmbeddingSet(representation_name="oracle", instrument_id="i",
                        note_midis=FULL_MIDIS, vectors=vectors)


def test_criterion_2a_quadratic_embeddings_recover_pitch_height():
    """KNOWN RED. Two-dimensional embeddings cannot carry this signal: the
    Pearson correlation between any two non-constant 2-vectors is exactly
    +-1, so every correlation distance is 0 up to a single ulp of round-off.
    The rank correlation against the pitch-height model is therefore either
    undefined or pure rounding noise, never > 0.95. The assertion is kept in
    its stated form rather than weakened; see the companion test with
    three-dimensional embeddings for the recoverable variant of the same
    construction.
    """
    rdm = compute_rdm(quadratic_set(powers=(1, 2)))
    model = model_rdm("pitch_height", FULL_MIDIS)
    rho = spearman(vectorize(rdm), vectorize(model))
    want = oracles.brute_spearman(vectorize(rdm).tolist(),
                                  vectorize(model).tolist())
    assert not math.isnan(rho)
    assert abs(rho - want) < 1e-12
    assert rho > 0.95


def test_criterion_2a_companion_cubic_embeddings_recover_pitch_height():
    # three non-collinear moments per note make the distances informative
    rdm = compute_rdm(quadratic_set(powers=(1, 2, 3)))
    model = model_rdm("pitch_height", FULL_MIDIS)
    rho = spearman(vectorize(rdm), vectorize(model))
    want = oracles.brute_spearman(vectorize(rdm).tolist(),
                                  vectorize(model).tolist())
    assert not math.isnan(want)
    assert abs(rho - want) < 1e-12
    assert rho > 0.95
    print(f"\n  cubic-embedding pitch-height rho = {rho:.4f}")


def test_criterion_2b_one_hot_pitch_class_matches_chroma_model():
    vectors = np.zeros((36, 12), dtype=np.float32)
    for i, m in enumerate(FULL_MIDIS):
        vectors[i, m % 12] = 1.0
    s = EmbeddingSet(representation_name="oracle", instrument_id="i",
                     note_midis=FULL_MIDIS, vectors=vectors)
    rdm = compute_rdm(s)
    model = model_rdm("chroma_binary", FULL_MIDIS)
    # identical rank pattern: same-class pairs minimal, all others tied above
    from chroma_rsa.rsa_stats import average_ranks
    assert np.array_equal(average_ranks(vectorize(rdm)),
                          average_ranks(vectorize(model)))
    rho = spearman(vectorize(rdm), vectorize(model))
    assert abs(rho - 1.0) < 1e-12


def test_criterion_3_statistics_match_oracles():
    rng = np.random.default_rng(ACCEPTANCE_SEED)
    for trial in range(1000):
        n = int(rng.integers(3, 51))
        if trial % 2:
            x, y = rng.normal(size=n), rng.normal(size=n)
        else:  # integer draws force ties
            x = rng.integers(0, 8, size=n).astype(float)
            y = rng.integers(0, 8, size=n).astype(float)
        want = oracles.brute_spearman(x.tolist(), y.tolist())
        got = spearman(x, y)
        if math.isnan(want):
            assert math.isnan(got)
        else:
            assert abs(got - want) < 1e-10

    for _ in range(1000):
        n = int(rng.integers(3, 51))
        v = rng.normal(loc=rng.uniform(-1, 1), size=n)
        mu = float(rng.uniform(-1, 1))
        t, p = one_sample_ttest(v, mu)
        wt, wp = oracles.brute_ttest(v.tolist(), mu)
        assert abs(t - wt) < 1e-10 and abs(p - wp) < 1e-10
        assert abs(sem(v) - oracles.brute_sem(v.tolist())) < 1e-10

    def random_plain_rdm(n):
        v = rng.uniform(0.02, 0.98, size=(n, n))
        v = 0.5 * (v + v.T)
        np.fill_diagonal(v, 0.0)
        return RDM(values=v, labels=tuple(range(60, 60 + n)))

    for _ in range(1000):
        study = [random_plain_rdm(int(rng.integers(3, 13)))
                 for _ in range(int(rng.integers(2, 11)))]
        # all RDMs in one study must share a note count
        study = [r for r in study if r.n == study[0].n]
        if len(study) < 2:
            continue
        lo, up = noise_ceiling(study)
        wlo, wup = oracles.brute_noise_ceiling(
            [vectorize(r).tolist() for r in study])
        assert abs(lo - wlo) < 1e-10 and abs(up - wup) < 1e-10

    for df, table in oracles.T_P_TABLE.items():
        for t, p in table.items():
            assert abs(student_t_p_two_sided(t, df) - p) < 1e-10
    for _ in range(300):
        df = int(rng.choice([4, 29]))
        t = float(rng.uniform(-12, 12))
        assert abs(student_t_p_two_sided(t, df)
                   - oracles.mp_t_p_two_sided(t, df)) < 1e-10


def test_criterion_4_invariant_suite():
    rng = np.random.default_rng(ACCEPTANCE_SEED)
    from chroma_rsa import correlation_distance

    for _ in range(1000):
        n = int(rng.integers(3, 12))
        s = EmbeddingSet(representation_name="r", instrument_id="i",
                         note_midis=tuple(range(60, 60 + n)),
                         vectors=rng.normal(size=(n, int(rng.integers(2, 20))))
                         .astype(np.float32))
        v = compute_rdm(s).values
        assert np.array_equal(v, v.T)
        assert np.all(np.diag(v) == 0.0)
        assert v.min() >= 0.0 and v.max() <= 1.0

    for _ in range(300):
        n = int(rng.integers(2, 30))
        a, b = rng.normal(size=n), rng.normal(size=n)
        alpha = float(rng.uniform(0.1, 5.0)) * float(rng.choice([-1.0, 1.0]))
        beta = float(rng.uniform(-10.0, 10.0))
        assert abs(correlation_distance(alpha * a + beta, b)
                   - correlation_distance(a, b)) < 1e-9

    for _ in range(300):
        n = int(rng.integers(3, 40))
        x, y = rng.normal(size=n), rng.normal(size=n)
        base = spearman(x, y)
        assert abs(spearman(np.exp(x), y) - base) < 1e-12
        assert abs(spearman(x, 2.0 * y + 1.0) - base) < 1e-12

    for _ in range(1000):
        n = int(rng.integers(3, 12))
        rdms = []
        for _ in range(int(rng.integers(2, 11))):
            s = EmbeddingSet(representation_name="r", instrument_id="i",
                             note_midis=tuple(range(60, 60 + n)),
                             vectors=rng.normal(size=(n, 6)).astype(np.float32))
            rdms.append(compute_rdm(s))
        lo, up = noise_ceiling(rdms)
        if not (math.isnan(lo) or math.isnan(up)):
            assert lo <= up + 1e-12

    # CQT octave shift: 12 semitones displace the profile by bins_per_octave
    params = default_frontend_params("cqt", 16000)
    timbre = TimbreProfile(harmonic_amplitudes=(1.0, 0.5, 0.25),
                           attack_s=0.01, decay_s=0.1, sustain_level=0.8,
                           release_s=0.05, detune_cents=0.0)
    profiles = {}
    for midi in (60, 72, 84):
        spec = NoteSpec(midi=midi, instrument_id="t", family="flute")
        buf = synthesize_note(spec, timbre, 2.5, 16000, seed=11)
        profiles[midi] = pool_time(cqt(buf, params))
    assert (int(np.argmax(profiles[72])) - int(np.argmax(profiles[60]))
            == params.bins_per_octave)
    assert (int(np.argmax(profiles[84])) - int(np.argmax(profiles[72]))
            == params.bins_per_octave)


def test_criterion_5_format_suite(tmp_path):
    rng = np.random.default_rng(ACCEPTANCE_SEED)
    for i in range(50):
        n = int(rng.integers(1, 40))
        s = EmbeddingSet(
            representation_name=f"rep{i}", instrument_id=f"i{i}",
            note_midis=tuple(sorted(rng.choice(128, size=n, replace=False)
                                    .tolist())),
            vectors=rng.normal(size=(n, int(rng.integers(1, 64))))
            .astype(np.float32))
        path = tmp_path / f"s{i}.aemb"
        write_embeddings(s, path)
        back = read_embeddings(path)
        assert back.note_midis == s.note_midis
        assert np.array_equal(back.vectors, s.vectors)

    data = bytearray((tmp_path / "s0.aemb").read_bytes())
    data[:4] = b"RIFF"
    (tmp_path / "bad.aemb").write_bytes(bytes(data))
    with pytest.raises(BadMagicError):
        read_embeddings(tmp_path / "bad.aemb")
    good = (tmp_path / "s0.aemb").read_bytes()
    (tmp_path / "cut.aemb").write_bytes(good[:len(good) // 2])
    with pytest.raises(TruncatedFileError):
        read_embeddings(tmp_path / "cut.aemb")

    # full-pipeline determinism for a fixed (config, seed)
    bank = BankConfig(instruments_per_family=1, octave_lo=5, octave_hi=6)
    trees = []
    for sub in ("a", "b"):
        cfg = StudyConfig(seed=ACCEPTANCE_SEED, out_dir=str(tmp_path / sub),
                          bank=bank, workers=1)
        cmd_all(cfg)
        trees.append({str(p.relative_to(tmp_path / sub)): p.read_bytes()
                      for p in sorted((tmp_path / sub).rglob("*"))
                      if p.is_file()})
    assert trees[0] == trees[1]
