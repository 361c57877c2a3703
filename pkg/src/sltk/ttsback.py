"""Parametric synthesis runtime: tree-predicted parameter streams, pulse/noise
excitation and mel-log-spectral-approximation filtering into 16-bit WAV.

The filter realizes H(z) = exp(b(0)) * exp(F1(z)) * exp(F2(z)) where F1 and F2
are warped all-pass structures over the mel-cepstrum, and each exponential is
replaced by its order-5 Pade approximant R(F) = N(F) / N(-F).  The numerator
coefficients of the [5/5] Pade approximant of e^x are
(2L-l)! L! / ((2L)! l! (L-l)!) for L = 5:
1, 1/2, 1/9, 1/72, 1/1008, 1/30240.
"""

from __future__ import annotations

import io
import math
import wave
from dataclasses import dataclass

import numpy as np

from sltk.errors import ToolkitError
from sltk.learners.regtree import RegTree
from sltk.ttsfront import ContextLabel

PADE5 = np.array([1.0, 1.0 / 2, 1.0 / 9, 1.0 / 72, 1.0 / 1008, 1.0 / 30240])
PD = 5

UNVOICED = float("nan")


@dataclass
class VoiceModel:
    duration: RegTree
    lf0: RegTree
    mgc: RegTree
    sample_rate: int = 16_000
    frame_shift_ms: int = 5
    alpha: float = 0.42
    order: int = 24

    @property
    def samples_per_frame(self) -> int:
        return self.sample_rate * self.frame_shift_ms // 1000


@dataclass
class ParameterTrack:
    mgc: np.ndarray          # frames x (order + 1)
    lf0: np.ndarray          # frames; NaN on unvoiced frames
    voiced: np.ndarray       # frames, bool

    @property
    def frames(self) -> int:
        return self.mgc.shape[0]


def predict_streams(voice: VoiceModel, labels: list[ContextLabel]) -> ParameterTrack:
    """One state per label: duration round(max(1, mean)) frames, voicing from
    the leaf voiced fraction, spectrum held constant per state, log-F0
    interpolated linearly across each maximal voiced run."""
    state_dur: list[int] = []
    state_lf0: list[float] = []
    state_voiced: list[bool] = []
    state_mgc: list[np.ndarray] = []
    for label in labels:
        if label.state is None:
            raise ToolkitError("E_LABEL_MODE", "state-mode labels required")
        bag = frozenset(label.features)
        dur_leaf = voice.duration.predict(bag)
        state_dur.append(int(max(1.0, float(dur_leaf.mean[0])) + 0.5))
        lf0_leaf = voice.lf0.predict(bag)
        voiced = (lf0_leaf.voiced_fraction or 0.0) > 0.5
        state_voiced.append(voiced)
        state_lf0.append(float(lf0_leaf.mean[0]))
        state_mgc.append(np.asarray(voice.mgc.predict(bag).mean, dtype=np.float64))

    frames = sum(state_dur)
    mgc = np.empty((frames, voice.order + 1))
    lf0 = np.full(frames, UNVOICED)
    voiced_mask = np.zeros(frames, dtype=bool)
    offset = 0
    starts = []
    for dur, vec in zip(state_dur, state_mgc):
        if vec.shape[0] != voice.order + 1:
            raise ToolkitError(
                "E_DIM_MISMATCH",
                f"cepstrum order {vec.shape[0] - 1}, voice expects {voice.order}")
        mgc[offset:offset + dur] = vec
        starts.append(offset)
        offset += dur

    # voiced runs of consecutive states; anchor each state's value evenly
    # across the run's frames, then interpolate frame-by-frame
    i = 0
    while i < len(state_dur):
        if not state_voiced[i]:
            i += 1
            continue
        j = i
        while j + 1 < len(state_dur) and state_voiced[j + 1]:
            j += 1
        run_start = starts[i]
        run_frames = sum(state_dur[i:j + 1])
        values = state_lf0[i:j + 1]
        if len(values) == 1 or run_frames == 1:
            lf0[run_start:run_start + run_frames] = values[0]
        else:
            anchors = np.linspace(0, run_frames - 1, num=len(values))
            lf0[run_start:run_start + run_frames] = np.interp(
                np.arange(run_frames), anchors, values)
        voiced_mask[run_start:run_start + run_frames] = True
        i = j + 1
    return ParameterTrack(mgc, lf0, voiced_mask)


def generate_excitation(track: ParameterTrack, sample_rate: int,
                        frame_shift_ms: int, seed: int = 0) -> np.ndarray:
    """Unit pulses at round(sample_rate / f0) spacing on voiced frames (pulse
    phase carried across frames), seeded unit-variance noise elsewhere."""
    spf = sample_rate * frame_shift_ms // 1000
    rng = np.random.default_rng(seed)
    out = np.zeros(track.frames * spf)
    until_pulse = 0
    for k in range(track.frames):
        lo = k * spf
        if track.voiced[k]:
            f0 = math.exp(track.lf0[k])
            if not f0 > 0 or math.isinf(f0):
                raise ToolkitError("E_BAD_F0", f"frame {k}: f0 = {f0!r}")
            period = round(sample_rate / f0)
            for s in range(spf):
                if until_pulse <= 0:
                    out[lo + s] = 1.0
                    until_pulse = period
                until_pulse -= 1
        else:
            out[lo:lo + spf] = rng.standard_normal(spf)
    return out


# --- the filter ---

def cepstrum_to_b(mgc: np.ndarray, alpha: float) -> np.ndarray:
    """Mel-cepstrum to filter coefficients: b(M) = c(M),
    b(m) = c(m) - alpha * b(m+1)."""
    b = np.array(mgc, dtype=np.float64, copy=True)
    for m in range(b.shape[-1] - 2, -1, -1):
        b[..., m] = mgc[..., m] - alpha * b[..., m + 1]
    return b


def _mlsa_run(x, b_frames, alpha, spf, pade):  # pragma: no cover - jit body
    n = x.shape[0]
    frames, width = b_frames.shape
    m = width - 1
    aa = 1.0 - alpha * alpha
    d1 = np.zeros(2 * (PD + 1))
    d2 = np.zeros(PD * (m + 2) + PD + 1)
    pt2 = PD * (m + 2)
    b = np.empty(width)
    y = np.empty(n)
    half = spf * 0.5
    for s in range(n):
        # linear interpolation between frame centers, clamped at the edges
        pos = (s - half) / spf
        if pos <= 0.0:
            for q in range(width):
                b[q] = b_frames[0, q]
        elif pos >= frames - 1:
            for q in range(width):
                b[q] = b_frames[frames - 1, q]
        else:
            k = int(pos)
            frac = pos - k
            for q in range(width):
                b[q] = b_frames[k, q] * (1.0 - frac) + b_frames[k + 1, q] * frac

        v = x[s] * math.exp(b[0])

        # first stage: exp(b(1) * warped unit delay)
        out = 0.0
        for i in range(PD, 0, -1):
            d1[i] = aa * d1[PD + 1 + i - 1] + alpha * d1[i]
            d1[PD + 1 + i] = d1[i] * b[1]
            t = d1[PD + 1 + i] * pade[i]
            if i & 1:
                v += t
            else:
                v -= t
            out += t
        d1[PD + 1] = v
        out += v
        v = out

        # second stage: exp(sum of b(m) over the warped FIR basis, m >= 2)
        out = 0.0
        for i in range(PD, 0, -1):
            base = (i - 1) * (m + 2)
            xin = d2[pt2 + i - 1]
            d2[base] = xin
            d2[base + 1] = aa * d2[base] + alpha * d2[base + 1]
            fir = 0.0
            for q in range(2, m + 1):
                d2[base + q] += alpha * (d2[base + q + 1] - d2[base + q - 1])
            for q in range(2, m + 1):
                fir += d2[base + q] * b[q]
            for q in range(m + 1, 1, -1):
                d2[base + q] = d2[base + q - 1]
            d2[pt2 + i] = fir
            t = fir * pade[i]
            if i & 1:
                v += t
            else:
                v -= t
            out += t
        d2[pt2] = v
        out += v
        y[s] = out
    return y


try:
    from numba import njit

    _mlsa_run_jit = njit(cache=True)(_mlsa_run)
except Exception:  # pragma: no cover
    _mlsa_run_jit = _mlsa_run


def mlsa_filter(excitation: np.ndarray, mgc: np.ndarray, alpha: float = 0.42,
                samples_per_frame: int | None = None,
                order: int | None = None) -> np.ndarray:
    mgc = np.atleast_2d(np.asarray(mgc, dtype=np.float64))
    if order is not None and mgc.shape[1] != order + 1:
        raise ToolkitError(
            "E_DIM_MISMATCH",
            f"cepstrum order {mgc.shape[1] - 1}, expected {order}")
    x = np.asarray(excitation, dtype=np.float64)
    if samples_per_frame is None:
        if x.shape[0] % mgc.shape[0]:
            raise ToolkitError(
                "E_DIM_MISMATCH",
                f"{x.shape[0]} samples over {mgc.shape[0]} frames")
        samples_per_frame = x.shape[0] // mgc.shape[0]
    elif x.shape[0] != mgc.shape[0] * samples_per_frame:
        raise ToolkitError(
            "E_DIM_MISMATCH",
            f"{x.shape[0]} samples != {mgc.shape[0]} x {samples_per_frame}")
    b_frames = cepstrum_to_b(mgc, alpha)
    return _mlsa_run_jit(x, b_frames, alpha, samples_per_frame, PADE5)


def wav_bytes(samples: np.ndarray, sample_rate: int) -> bytes:
    peak = float(np.max(np.abs(samples))) if samples.size else 0.0
    if peak > 0:
        samples = samples * (0.9 / peak)
    pcm = np.clip(np.round(samples * 32767.0), -32768, 32767).astype("<i2")
    buf = io.BytesIO()
    with wave.open(buf, "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(sample_rate)
        w.writeframes(pcm.tobytes())
    return buf.getvalue()


def synthesize(voice: VoiceModel, labels: list[ContextLabel], seed: int = 0) -> bytes:
    track = predict_streams(voice, labels)
    excitation = generate_excitation(
        track, voice.sample_rate, voice.frame_shift_ms, seed)
    speech = mlsa_filter(excitation, track.mgc, voice.alpha,
                         voice.samples_per_frame, voice.order)
    return wav_bytes(speech, voice.sample_rate)


# --- voice files ---

def voice_to_bytes(voice: VoiceModel) -> bytes:
    from sltk.learners.model_io import (MAGIC, VERSION, KIND_VOICE, ByteWriter,
                                        encode_regtree)
    body = ByteWriter()
    body.u32(voice.sample_rate)
    body.u32(voice.frame_shift_ms)
    body.f64(voice.alpha)
    body.u32(voice.order)
    for tree in (voice.duration, voice.lf0, voice.mgc):
        encode_regtree(body, tree)
    payload = body.getvalue()
    head = ByteWriter()
    head.parts.append(MAGIC)
    head.u8(VERSION)
    head.u8(KIND_VOICE)
    head.u32(len(payload))
    return head.getvalue() + payload


def voice_from_bytes(data: bytes) -> VoiceModel:
    from sltk.learners.model_io import (MAGIC, VERSION, KIND_VOICE, ByteReader,
                                        decode_regtree)
    if data[:4] != MAGIC:
        raise ToolkitError("E_MODEL_FORMAT", "bad magic at byte 0")
    r = ByteReader(data, 4)
    if r.u8() != VERSION:
        raise ToolkitError("E_MODEL_FORMAT", "unsupported version at byte 4")
    if r.u8() != KIND_VOICE:
        raise ToolkitError("E_MODEL_FORMAT", "not a voice file (byte 5)")
    length = r.u32()
    if r.offset + length > len(data):
        raise ToolkitError("E_MODEL_FORMAT", f"truncated at byte {r.offset}")
    sample_rate = r.u32()
    frame_shift = r.u32()
    alpha = r.f64()
    order = r.u32()
    duration = decode_regtree(r)
    lf0 = decode_regtree(r)
    mgc = decode_regtree(r)
    return VoiceModel(duration, lf0, mgc, sample_rate, frame_shift, alpha, order)


def save_voice(voice: VoiceModel, path) -> None:
    with open(path, "wb") as f:
        f.write(voice_to_bytes(voice))


def load_voice(path) -> VoiceModel:
    with open(path, "rb") as f:
        return voice_from_bytes(f.read())
