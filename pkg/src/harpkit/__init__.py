"""harpkit: hosted asynchronous remote processing for audio and MIDI."""

from .errors import ErrorCode, HarpError

__all__ = ["ErrorCode", "HarpError"]
__version__ = "2.0.0"
