"""harpserve: wrap a processing function as a HARP-protocol endpoint.

Declare a card, attach controls, hand over a function that maps a media
file to an output media file and/or a list of time-stamped labels, then
serve it:

    card = (CardBuilder("Gain", description="Scale samples")
            .audio_in().audio_out()
            .slider("gain", minimum=0, maximum=2, step=0.01, default=1))

    def run(media_path, controls):
        ...
        return out_path, []

    serve_endpoint(card, run, port=7860)
"""

from .card import CardBuilder, OutputLabel
from .server import serve_endpoint, validate_values

__all__ = ["CardBuilder", "OutputLabel", "serve_endpoint", "validate_values"]
__version__ = "0.1.0"
