"""Spectral front-ends: mel spectrogram, constant-Q transform, cochleagram.

All three map an AudioBuffer to a nonnegative (channels x frames) matrix on a
shared 10 ms frame grid, then pool_time collapses frames to one embedding per
note. Everything is magnitude-based: outputs are invariant to polarity flips,
and scaling the input by a > 0 scales mel/CQT outputs by a and the cochleagram
by a**0.3 (compression exponent).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .errors import FrontendError
from .stimulus_bank import AudioBuffer

FRONTEND_KINDS = ("mel", "cqt", "cochleagram")

C1_HZ = 32.703  # lowest CQT bin center, one octave below C2


@dataclass(frozen=True)
class TimeFreqMatrix:
    """Nonnegative channels x frames matrix with channel center frequencies."""

    values: np.ndarray
    channel_freqs_hz: np.ndarray
    frame_rate_hz: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        f = np.asarray(self.channel_freqs_hz, dtype=np.float64)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "channel_freqs_hz", f)
        if v.ndim != 2 or v.shape[1] < 1:
            raise FrontendError("time-frequency matrix must be 2-D with >= 1 frame")
        if v.shape[0] != f.size:
            raise FrontendError("row count must match channel_freqs_hz length")
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise FrontendError("matrix values must be finite and nonnegative")
        if np.any(np.diff(f) <= 0):
            raise FrontendError("channel_freqs_hz must be strictly increasing")
        if self.frame_rate_hz <= 0:
            raise FrontendError("frame_rate_hz must be positive")


@dataclass(frozen=True)
class FrontendParams:
    kind: str
    n_channels: int
    fmin_hz: float
    fmax_hz: float
    bins_per_octave: int = 0  # CQT only
    window_s: float = 0.025
    hop_s: float = 0.010

    def __post_init__(self):
        if self.kind not in FRONTEND_KINDS:
            raise FrontendError(f"unknown front-end kind {self.kind!r}")
        if self.n_channels < 2:
            raise FrontendError("n_channels must be >= 2")
        if not self.fmin_hz < self.fmax_hz:
            raise FrontendError("fmin_hz must be < fmax_hz")
        if self.fmin_hz < 0:
            raise FrontendError("fmin_hz must be >= 0")
        if self.window_s <= 0 or self.hop_s <= 0:
            raise FrontendError("window_s and hop_s must be positive")
        if self.kind == "cqt":
            if self.bins_per_octave < 1:
                raise FrontendError("cqt requires bins_per_octave >= 1")
            if self.n_channels % self.bins_per_octave != 0:
                raise FrontendError("n_channels must be a multiple of bins_per_octave")
            if self.fmin_hz <= 0:
                raise FrontendError("cqt fmin_hz must be > 0")


def default_frontend_params(kind: str, sample_rate_hz: int = 16000) -> FrontendParams:
    """Standard study parameters: mel 128 bands, CQT 48x7 = 336 bins, 128 ERB filters."""
    nyquist = sample_rate_hz / 2.0
    if kind == "mel":
        return FrontendParams(kind="mel", n_channels=128, fmin_hz=0.0, fmax_hz=nyquist)
    if kind == "cqt":
        n_octaves = 7
        return FrontendParams(kind="cqt", n_channels=48 * n_octaves, fmin_hz=C1_HZ,
                              fmax_hz=C1_HZ * 2.0 ** n_octaves, bins_per_octave=48)
    if kind == "cochleagram":
        return FrontendParams(kind="cochleagram", n_channels=128, fmin_hz=50.0,
                              fmax_hz=min(8000.0, nyquist))
    raise FrontendError(f"unknown front-end kind {kind!r}")


def _check_audio(audio: AudioBuffer, params: FrontendParams) -> None:
    if params.fmax_hz > audio.sample_rate_hz / 2.0 + 1e-9:
        raise FrontendError(
            f"fmax {params.fmax_hz} Hz above Nyquist for {audio.sample_rate_hz} Hz audio")


def _frame_starts(n: int, win: int, hop: int) -> np.ndarray:
    if n < win:
        raise FrontendError(f"audio ({n} samples) shorter than one window ({win})")
    return hop * np.arange((n - win) // hop + 1)


# ---------------------------------------------------------------------------
# mel spectrogram


def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


_MEL_CACHE = {}


def _mel_filterbank(params: FrontendParams, sample_rate_hz: int, nfft: int):
    key = (params, sample_rate_hz, nfft)
    hit = _MEL_CACHE.get(key)
    if hit is not None:
        return hit
    pts = mel_to_hz(np.linspace(hz_to_mel(params.fmin_hz), hz_to_mel(params.fmax_hz),
                                params.n_channels + 2))
    freqs = np.arange(nfft // 2 + 1) * (sample_rate_hz / nfft)
    fb = np.zeros((params.n_channels, freqs.size))
    for i in range(params.n_channels):
        lo, center, hi = pts[i], pts[i + 1], pts[i + 2]
        rising = (freqs - lo) / (center - lo)
        falling = (hi - freqs) / (hi - center)
        tri = np.maximum(0.0, np.minimum(rising, falling))
        fb[i] = tri * (2.0 / (hi - lo))  # area normalization
    out = (fb, pts[1:-1].copy())
    _MEL_CACHE[key] = out
    return out


def mel_spectrogram(audio: AudioBuffer, params: FrontendParams) -> TimeFreqMatrix:
    """Magnitude STFT (Hann window) through a triangular mel filterbank."""
    if params.kind != "mel":
        raise FrontendError("params.kind must be 'mel'")
    _check_audio(audio, params)
    fs = audio.sample_rate_hz
    win = round(params.window_s * fs)
    hop = round(params.hop_s * fs)
    nfft = 1 << (win - 1).bit_length()
    starts = _frame_starts(audio.samples.size, win, hop)
    frames = np.lib.stride_tricks.sliding_window_view(audio.samples, win)[::hop]
    spectra = np.abs(sfft.rfft(frames * np.hanning(win), n=nfft, axis=1))
    fb, centers = _mel_filterbank(params, fs, nfft)
    assert frames.shape[0] == starts.size
    return TimeFreqMatrix(values=fb @ spectra.T, channel_freqs_hz=centers,
                          frame_rate_hz=fs / hop)


# ---------------------------------------------------------------------------
# constant-Q transform


def cqt_q_factor(bins_per_octave: int) -> float:
    return 1.0 / (2.0 ** (1.0 / bins_per_octave) - 1.0)


_CQT_CACHE = {}


def _cqt_kernels(params: FrontendParams, sample_rate_hz: int):
    """Per-octave cos/sin kernel matrices, each bin centered in its group window.

    Bin k: center f_k = fmin * 2^(k/b), window length N_k = ceil(Q * fs / f_k),
    Hann-windowed complex exponential, normalized by 1/N_k. Grouping by octave
    keeps the kernel matrices dense and small enough to apply as two GEMMs.
    """
    key = (params, sample_rate_hz)
    hit = _CQT_CACHE.get(key)
    if hit is not None:
        return hit
    b = params.bins_per_octave
    q = cqt_q_factor(b)
    k = np.arange(params.n_channels)
    fks = params.fmin_hz * 2.0 ** (k / b)
    nks = np.ceil(q * sample_rate_hz / fks).astype(int)
    n0 = int(nks[0])
    groups = []
    for g in range(params.n_channels // b):
        bins = np.arange(g * b, (g + 1) * b)
        ng = int(nks[bins[0]])  # longest window in the group (lowest bin)
        cos_k = np.zeros((b, ng))
        sin_k = np.zeros((b, ng))
        for row, kk in enumerate(bins):
            nk = int(nks[kk])
            off = (ng - nk) // 2
            w = np.hanning(nk) / nk
            phase = 2.0 * np.pi * fks[kk] * np.arange(nk) / sample_rate_hz
            cos_k[row, off:off + nk] = w * np.cos(phase)
            sin_k[row, off:off + nk] = w * np.sin(phase)
        groups.append(((n0 - ng) // 2, ng, cos_k, sin_k))
    out = (fks, int(n0), tuple(groups))
    _CQT_CACHE[key] = out
    return out


def cqt(audio: AudioBuffer, params: FrontendParams) -> TimeFreqMatrix:
    """Constant-Q magnitude via time-domain windowed inner products.

    Frames are emitted only where the longest (lowest-bin) window fits; all
    bins of a frame share that window's center, so channels stay time-aligned.
    """
    if params.kind != "cqt":
        raise FrontendError("params.kind must be 'cqt'")
    _check_audio(audio, params)
    fs = audio.sample_rate_hz
    fks, n0, groups = _cqt_kernels(params, fs)
    if fks[-1] >= fs / 2.0:
        raise FrontendError("top CQT bin center reaches Nyquist; lower fmax or n_channels")
    n = audio.samples.size
    if n < n0:
        raise FrontendError(
            f"fmin too low for buffer length: need {n0} samples, got {n}")
    hop = round(params.hop_s * fs)
    starts = hop * np.arange((n - n0) // hop + 1)
    out = np.empty((params.n_channels, starts.size))
    b = params.bins_per_octave
    x = audio.samples
    for g, (goff, ng, cos_k, sin_k) in enumerate(groups):
        idx = (starts + goff)[:, None] + np.arange(ng)[None, :]
        frames = x[idx]
        re = cos_k @ frames.T
        im = sin_k @ frames.T
        out[g * b:(g + 1) * b] = np.sqrt(re * re + im * im)
    return TimeFreqMatrix(values=out, channel_freqs_hz=fks, frame_rate_hz=fs / hop)


# ---------------------------------------------------------------------------
# cochleagram


def erb_number(f):
    """ERB-number scale: ERBn(f) = 21.4 * log10(1 + 0.00437 f)."""
    return 21.4 * np.log10(1.0 + 0.00437 * np.asarray(f, dtype=np.float64))


def erb_number_inverse(e):
    return (10.0 ** (np.asarray(e, dtype=np.float64) / 21.4) - 1.0) / 0.00437


def erb_bandwidth(f):
    """Equivalent rectangular bandwidth at center frequency f."""
    return 24.7 * (1.0 + 0.00437 * np.asarray(f, dtype=np.float64))


def erb_center_frequencies(n: int, fmin_hz: float, fmax_hz: float) -> np.ndarray:
    """n frequencies equally spaced on the ERB-number scale, endpoints included."""
    if n < 2:
        raise FrontendError("need at least 2 center frequencies")
    if not fmin_hz < fmax_hz:
        raise FrontendError("fmin_hz must be < fmax_hz")
    centers = erb_number_inverse(np.linspace(erb_number(fmin_hz), erb_number(fmax_hz), n))
    centers[0] = fmin_hz   # pin endpoints exactly; the inverse map is float-noisy
    centers[-1] = fmax_hz
    return centers


_GAMMATONE_CACHE = {}


def _gammatone_filters(params: FrontendParams, sample_rate_hz: int, n: int):
    key = (params, sample_rate_hz, n)
    hit = _GAMMATONE_CACHE.get(key)
    if hit is not None:
        return hit
    centers = erb_center_frequencies(params.n_channels, params.fmin_hz, params.fmax_hz)
    bw = 1.019 * erb_bandwidth(centers)
    freqs = np.arange(n // 2 + 1) * (sample_rate_hz / n)
    # 4th-order gammatone magnitude response, unit gain at the center frequency
    h = 1.0 / (1.0 + 1j * (freqs[None, :] - centers[:, None]) / bw[:, None]) ** 4
    out = (centers, h)
    _GAMMATONE_CACHE[key] = out
    return out


def cochleagram(audio: AudioBuffer, params: FrontendParams) -> TimeFreqMatrix:
    """ERB-spaced 4th-order gammatone filterbank, analytic-magnitude envelope,
    power-law compression (exponent 0.3), frame-averaged.

    The filterbank is applied in the frequency domain. Inverse-transforming
    only the positive-frequency half of the product spectrum yields the
    analytic signal sampled at half rate; gammatone envelopes are band-limited
    well below that rate, so |z| is exact at the retained samples.
    """
    if params.kind != "cochleagram":
        raise FrontendError("params.kind must be 'cochleagram'")
    _check_audio(audio, params)
    fs = audio.sample_rate_hz
    x = audio.samples
    if x.size % 2:
        x = np.concatenate([x, [0.0]])  # the half-spectrum fold needs even length
    n = x.size
    win = round(params.window_s * fs)
    if audio.samples.size < win:
        raise FrontendError(
            f"audio ({audio.samples.size} samples) shorter than one window ({win})")
    centers, h = _gammatone_filters(params, fs, n)
    product = h * sfft.rfft(x)
    half = n // 2
    spectra = product[:, :half].copy()
    spectra[:, 0] = 0.5 * (product[:, 0] + product[:, half])
    analytic = sfft.ifft(spectra, axis=1)  # analytic signal at fs/2
    compressed = np.abs(analytic) ** 0.3
    win2 = round(params.window_s * fs / 2)
    hop2 = round(params.hop_s * fs / 2)
    starts = _frame_starts(half, win2, hop2)
    csum = np.concatenate([np.zeros((compressed.shape[0], 1)),
                           np.cumsum(compressed, axis=1)], axis=1)
    values = (csum[:, starts + win2] - csum[:, starts]) / win2
    np.maximum(values, 0.0, out=values)  # guard fp round-off below zero
    return TimeFreqMatrix(values=values, channel_freqs_hz=centers,
                          frame_rate_hz=fs / round(params.hop_s * fs))


# ---------------------------------------------------------------------------


def pool_time(m: TimeFreqMatrix) -> np.ndarray:
    """Arithmetic mean across frames: one embedding value per channel."""
    if m.values.shape[1] < 1:
        raise FrontendError("cannot pool an empty matrix")
    return m.values.mean(axis=1)


_FRONTEND_FNS = {
    "mel": mel_spectrogram,
    "cqt": cqt,
    "cochleagram": cochleagram,
}


def compute_frontend(audio: AudioBuffer, params: FrontendParams) -> TimeFreqMatrix:
    """Dispatch on params.kind."""
    return _FRONTEND_FNS[params.kind](audio, params)
