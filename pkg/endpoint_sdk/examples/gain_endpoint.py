"""Audio-to-audio example: scale every sample by a constant gain."""

import sys
import tempfile
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from harpserve import CardBuilder, serve_endpoint


def build_card() -> CardBuilder:
    return (
        CardBuilder("Gain", description="Scales every sample by a constant factor.",
                    author="harpserve examples", tags=["demo", "audio"])
        .audio_in()
        .audio_out()
        .slider("gain", minimum=0.0, maximum=2.0, step=0.01, default=1.0)
    )


def _to_float(samples: np.ndarray) -> np.ndarray:
    if samples.dtype == np.int16:
        return samples.astype(np.float64) / 32768.0
    if samples.dtype == np.int32:
        return samples.astype(np.float64) / 2147483648.0
    return samples.astype(np.float64)


def run(media_path, controls):
    rate, samples = wavfile.read(media_path)
    out = np.clip(_to_float(samples) * controls["gain"], -1.0, 1.0)
    out_path = str(Path(tempfile.mkdtemp()) / "out.wav")
    wavfile.write(out_path, rate, out.astype(np.float32))
    return out_path, []


def main():
    port = int(sys.argv[1]) if len(sys.argv) > 1 else 7861
    handle = serve_endpoint(build_card(), run, port=port)
    print(f"gain endpoint on {handle.url}", file=sys.stderr)
    handle.serve_forever()


if __name__ == "__main__":
    main()
