"""Push one note through all three time-frequency frontends.

The mel spectrogram and cochleagram tile frequency on perceptual scales with
fixed analysis windows; the constant-Q transform tiles it geometrically at 48
bins per octave, so transposing a note by an octave slides its pattern up by
exactly 48 channels. That shift-invariance is what lets octave structure
survive into the CQT's RDMs.
"""
import numpy as np

from chroma_rsa import (NoteSpec, TimbreProfile, compute_frontend,
                        default_frontend_params, midi_to_freq, note_name,
                        pool_time, synthesize_note)

timbre = TimbreProfile(harmonic_amplitudes=(1.0, 0.5, 0.33, 0.25),
                       attack_s=0.02, decay_s=0.2, sustain_level=0.6,
                       release_s=0.1, detune_cents=0.0)


def embed(midi, kind):
    spec = NoteSpec(midi=midi, instrument_id="probe", family="flute")
    buf = synthesize_note(spec, timbre, duration_s=2.5, sample_rate_hz=16000,
                          seed=3)
    params = default_frontend_params(kind, 16000)
    tfm = compute_frontend(buf, params)
    return pool_time(tfm), tfm, params


for kind in ("mel", "cqt", "cochleagram"):
    vec, tfm, _ = embed(60, kind)
    print(f"{kind:12s} {tfm.values.shape[0]:3d} channels x "
          f"{tfm.values.shape[1]:3d} frames at {tfm.frame_rate_hz:5.1f} fps, "
          f"pooled dim {vec.size}")

# CQT shift property: one octave up = bins_per_octave channels up
lo, _, params = embed(60, "cqt")
hi, _, _ = embed(72, "cqt")
shift = int(np.argmax(hi)) - int(np.argmax(lo))
print(f"\nC4 peak bin {int(np.argmax(lo))}, C5 peak bin {int(np.argmax(hi))}"
      f" -> shift {shift} (bins_per_octave = {params.bins_per_octave})")

# each pooled profile peaks near the fundamental
for midi in (60, 67, 76):
    vec, tfm, _ = embed(midi, "mel")
    peak_hz = tfm.channel_freqs_hz[int(np.argmax(vec))]
    print(f"{note_name(midi)}: f0 {midi_to_freq(midi):7.1f} Hz, "
          f"mel peak channel at {peak_hz:7.1f} Hz")
