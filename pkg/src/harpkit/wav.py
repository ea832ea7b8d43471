"""RIFF/WAVE decoding and encoding.

Supported sample formats: PCM 16-bit, PCM 24-bit, IEEE float 32-bit, each
either as a plain fmt chunk or wrapped in WAVE_FORMAT_EXTENSIBLE. Integer
samples are scaled by 1 / 2^(bits-1); full-scale negative maps exactly to
-1.0. Encoding rounds half away from zero and clamps to full scale, so the
float32 path round-trips bit-exactly.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import ErrorCode, HarpError

WAVE_FORMAT_PCM = 0x0001
WAVE_FORMAT_IEEE_FLOAT = 0x0003
WAVE_FORMAT_EXTENSIBLE = 0xFFFE


@dataclass(frozen=True)
class AudioBuffer:
    """Decoded audio: one float64 vector per channel, nominal range [-1, 1]."""

    sample_rate: int
    channels: tuple[np.ndarray, ...]

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        if not self.channels:
            raise ValueError("at least one channel required")
        n = len(self.channels[0])
        if any(len(c) != n for c in self.channels):
            raise ValueError("all channels must have equal length")

    @property
    def num_frames(self) -> int:
        return len(self.channels[0])

    @property
    def duration_s(self) -> float:
        return self.num_frames / self.sample_rate

    def __eq__(self, other) -> bool:
        if not isinstance(other, AudioBuffer):
            return NotImplemented
        return (
            self.sample_rate == other.sample_rate
            and len(self.channels) == len(other.channels)
            and all(np.array_equal(a, b) for a, b in zip(self.channels, other.channels))
        )


def _decode_err(detail: str) -> HarpError:
    return HarpError(ErrorCode.E150_MediaDecode, "Could not read the audio file.", detail)


def decode_wav(data: bytes) -> AudioBuffer:
    if len(data) < 12 or data[0:4] != b"RIFF":
        raise _decode_err("missing RIFF magic")
    if data[8:12] != b"WAVE":
        raise _decode_err("RIFF form type is not WAVE")

    fmt = None
    payload = None
    pos = 12
    while pos + 8 <= len(data):
        cid = data[pos : pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        body = data[pos + 8 : pos + 8 + size]
        if cid == b"fmt ":
            fmt = body
        elif cid == b"data":
            if len(body) < size:
                raise _decode_err("data chunk truncated")
            payload = body
        pos += 8 + size + (size & 1)  # chunks are word-aligned

    if fmt is None or len(fmt) < 16:
        raise _decode_err("fmt chunk missing or short")
    if payload is None:
        raise _decode_err("data chunk missing")

    tag, n_channels, sample_rate, _, block_align, bits = struct.unpack_from("<HHIIHH", fmt, 0)
    if tag == WAVE_FORMAT_EXTENSIBLE:
        if len(fmt) < 40:
            raise _decode_err("extensible fmt chunk too short")
        # first two bytes of the SubFormat GUID carry the real format tag
        (tag,) = struct.unpack_from("<H", fmt, 24)
    if n_channels < 1:
        raise _decode_err("zero channels")

    if tag == WAVE_FORMAT_PCM and bits == 16:
        if len(payload) % (2 * n_channels):
            raise _decode_err("data chunk truncated mid-frame")
        raw = np.frombuffer(payload, dtype="<i2").astype(np.float64)
        samples = raw / 32768.0
    elif tag == WAVE_FORMAT_PCM and bits == 24:
        if len(payload) % (3 * n_channels):
            raise _decode_err("data chunk truncated mid-frame")
        b = np.frombuffer(payload, dtype=np.uint8).reshape(-1, 3)
        raw = (
            b[:, 0].astype(np.int32)
            | (b[:, 1].astype(np.int32) << 8)
            | (b[:, 2].astype(np.int32) << 16)
        )
        raw = np.where(raw >= 1 << 23, raw - (1 << 24), raw)
        samples = raw.astype(np.float64) / float(1 << 23)
    elif tag == WAVE_FORMAT_IEEE_FLOAT and bits == 32:
        if len(payload) % (4 * n_channels):
            raise _decode_err("data chunk truncated mid-frame")
        samples = np.frombuffer(payload, dtype="<f4").astype(np.float64)
    else:
        raise _decode_err(f"unsupported format tag {tag:#06x} / {bits}-bit")

    frames = samples.reshape(-1, n_channels)
    channels = tuple(np.ascontiguousarray(frames[:, ch]) for ch in range(n_channels))
    return AudioBuffer(sample_rate=sample_rate, channels=channels)


def encode_wav(buffer: AudioBuffer, bit_depth: str = "f32") -> bytes:
    """Encode to canonical RIFF/WAVE. bit_depth is one of "16", "24", "f32"."""
    if buffer.num_frames == 0:
        raise HarpError(
            ErrorCode.E151_MediaEncode, "Cannot export empty audio.", "buffer has zero frames"
        )
    frames = np.stack(buffer.channels, axis=1)

    if bit_depth == "f32":
        tag, bits = WAVE_FORMAT_IEEE_FLOAT, 32
        payload = frames.astype("<f4").tobytes()
    elif bit_depth in ("16", "24"):
        bits = int(bit_depth)
        tag = WAVE_FORMAT_PCM
        full = float(1 << (bits - 1))
        # round half away from zero, then clamp to representable range
        scaled = np.where(frames >= 0, np.floor(frames * full + 0.5), np.ceil(frames * full - 0.5))
        ints = np.clip(scaled, -full, full - 1).astype(np.int32)
        if bits == 16:
            payload = ints.astype("<i2").tobytes()
        else:
            flat = ints.ravel()
            out = np.empty((len(flat), 3), dtype=np.uint8)
            out[:, 0] = flat & 0xFF
            out[:, 1] = (flat >> 8) & 0xFF
            out[:, 2] = (flat >> 16) & 0xFF
            payload = out.tobytes()
    else:
        raise HarpError(
            ErrorCode.E151_MediaEncode, "Unsupported export depth.", f"bit_depth={bit_depth!r}"
        )

    n_channels = len(buffer.channels)
    block_align = n_channels * (bits // 8)
    fmt = struct.pack(
        "<HHIIHH", tag, n_channels, buffer.sample_rate, buffer.sample_rate * block_align,
        block_align, bits,
    )
    body = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt
    body += b"data" + struct.pack("<I", len(payload)) + payload
    if len(payload) & 1:
        body += b"\x00"
    return b"RIFF" + struct.pack("<I", len(body)) + body
