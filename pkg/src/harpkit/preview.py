"""Offline MIDI preview rendering: one sine oscillator per note.

Deliberately naive; deterministic output matters more than fidelity. Each
note gets amplitude velocity/127 * 0.2 with a 10 ms linear attack/release
(shortened to half the note for very short notes). If the summed peak
exceeds 0.9 the whole buffer is normalized down to 0.9.
"""

from __future__ import annotations

import numpy as np

from .midi import MidiSequence, ticks_to_seconds
from .wav import AudioBuffer

RAMP_S = 0.01
NOTE_GAIN = 0.2
PEAK_LIMIT = 0.9


def render_midi_preview(seq: MidiSequence, sample_rate: int = 44100) -> AudioBuffer:
    total_s = ticks_to_seconds(seq, seq.end_tick)
    n = max(int(round(total_s * sample_rate)), 1)
    out = np.zeros(n, dtype=np.float64)

    for note in seq.notes:
        start_s = ticks_to_seconds(seq, note.start_tick)
        end_s = ticks_to_seconds(seq, note.end_tick)
        i0 = int(round(start_s * sample_rate))
        i1 = min(int(round(end_s * sample_rate)), n)
        if i1 <= i0:
            continue
        t = np.arange(i1 - i0) / sample_rate
        freq = 440.0 * 2.0 ** ((note.pitch - 69) / 12.0)
        tone = np.sin(2 * np.pi * freq * t) * (note.velocity / 127.0 * NOTE_GAIN)
        ramp = min(RAMP_S, (end_s - start_s) / 2)
        env = np.minimum.reduce(
            [
                np.ones_like(t),
                t / ramp if ramp > 0 else np.ones_like(t),
                ((end_s - start_s) - t) / ramp if ramp > 0 else np.ones_like(t),
            ]
        )
        out[i0:i1] += tone * np.clip(env, 0.0, 1.0)

    peak = float(np.max(np.abs(out))) if n else 0.0
    if peak > PEAK_LIMIT:
        out *= PEAK_LIMIT / peak
    return AudioBuffer(sample_rate=sample_rate, channels=(out,))
