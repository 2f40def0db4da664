"""Run the whole five-stage study on a compact configuration.

Stages write to content-addressed directories under out/, so reruns with the
same (config, seed) are free to skip nothing yet produce byte-identical
results, and any config change lands in a fresh directory instead of
silently mixing with stale outputs.
"""
import tempfile
from pathlib import Path

from chroma_rsa import BankConfig, StudyConfig, cmd_all, read_results_json

with tempfile.TemporaryDirectory() as tmp:
    cfg = StudyConfig(
        seed=7,
        out_dir=tmp,
        bank=BankConfig(instruments_per_family=1, octave_lo=5, octave_hi=6),
        workers=1,
    )
    cmd_all(cfg)

    for stage in ("bank", "embeddings", "rdms", "rsa", "figures"):
        d = cfg.stage_dir(stage)
        n = sum(1 for p in d.rglob("*") if p.is_file())
        print(f"{stage:10s} {d.name}: {n} files")

    results = read_results_json(cfg.stage_dir("rsa") / "rsa_results.json")
    first = results[0]
    print(f"\nalpha {first.alpha}, {first.n_comparisons} comparisons, "
          f"Bonferroni threshold {first.alpha / first.n_comparisons:.5f}")
    print(f"{'representation':14s} {'model':14s} {'mean rho':>9s} "
          f"{'p':>9s}  flags")
    for r in results:
        flags = []
        if r.sig_vs_zero:
            flags.append("sig>0")
        if r.sig_below_ceiling:
            flags.append("below-ceiling")
        print(f"{r.representation_name:14s} {r.model_name:14s} "
              f"{r.mean_rho:+9.3f} {r.p_vs_zero:9.2e}  {' '.join(flags)}")
