"""Audio-to-labels example: mark RMS threshold crossings as onset labels."""

import math
import sys

import numpy as np
from scipy.io import wavfile

from harpserve import CardBuilder, OutputLabel, serve_endpoint

WINDOW = 512
HOP = 256


def build_card() -> CardBuilder:
    return (
        CardBuilder("Onsets",
                    description="Marks RMS threshold crossings with time-stamped labels.",
                    author="harpserve examples", tags=["demo", "labels"])
        .audio_in()
        .labels_out()
        .slider("threshold", minimum=0.01, maximum=1.0, step=0.01, default=0.1)
    )


def run(media_path, controls):
    rate, samples = wavfile.read(media_path)
    if samples.dtype == np.int16:
        samples = samples.astype(np.float64) / 32768.0
    else:
        samples = samples.astype(np.float64)
    if samples.ndim > 1:
        samples = samples.mean(axis=1)
    threshold = controls["threshold"]

    labels = []
    prev = 0.0
    for start in range(0, len(samples) - WINDOW + 1, HOP):
        frame = samples[start : start + WINDOW]
        rms = math.sqrt(float(np.mean(frame * frame)))
        if prev < threshold <= rms:
            labels.append(OutputLabel(t=start / rate, text="onset",
                                      amplitude=min(rms, 1.0)))
        prev = rms
    return None, labels


def main():
    port = int(sys.argv[1]) if len(sys.argv) > 1 else 7863
    handle = serve_endpoint(build_card(), run, port=port)
    print(f"onsets endpoint on {handle.url}", file=sys.stderr)
    handle.serve_forever()


if __name__ == "__main__":
    main()
