"""Min/max downsampling of audio for waveform display."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .wav import AudioBuffer


@dataclass(frozen=True)
class WaveformBins:
    bins: tuple[tuple[float, float], ...]
    samples_per_bin: int


def waveform_minmax(buffer: AudioBuffer, bin_count: int) -> WaveformBins:
    """Channel-merged (min, max) per contiguous bin; last bin may be short."""
    if bin_count < 1:
        raise ValueError("bin_count must be >= 1")
    n = buffer.num_frames
    if n == 0:
        return WaveformBins(bins=(), samples_per_bin=1)
    samples_per_bin = -(-n // bin_count)  # ceil division
    frames = np.stack(buffer.channels, axis=1)
    bins = []
    for start in range(0, n, samples_per_bin):
        chunk = frames[start : start + samples_per_bin]
        bins.append((float(chunk.min()), float(chunk.max())))
    return WaveformBins(bins=tuple(bins), samples_per_bin=samples_per_bin)
