"""Time-stamped annotation model: wire parsing, colors, and layout geometry.

A label sits at time ``t`` with an optional duration. Vertical placement uses
the amplitude anchor on waveform displays and the pitch anchor on piano
rolls; when the relevant anchor is absent the label lands on the midline.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional

from .errors import ErrorCode, HarpError


@dataclass(frozen=True)
class RGBA:
    r: int
    g: int
    b: int
    a: int = 255

    def __post_init__(self):
        for v in (self.r, self.g, self.b, self.a):
            if not 0 <= v <= 255:
                raise ValueError("RGBA component out of range")


@dataclass(frozen=True)
class Label:
    t: float
    text: str
    duration: Optional[float] = None
    description: Optional[str] = None
    amplitude: Optional[float] = None
    pitch: Optional[int] = None
    color: Optional[RGBA] = None
    link: Optional[str] = None


LabelSet = tuple[Label, ...]

# Deterministic fallback palette, assigned by label index when color is absent.
DEFAULT_PALETTE = (
    RGBA(230, 57, 70),
    RGBA(244, 162, 97),
    RGBA(233, 196, 106),
    RGBA(42, 157, 143),
    RGBA(38, 70, 83),
    RGBA(106, 76, 147),
    RGBA(58, 134, 255),
    RGBA(255, 0, 110),
)


def label_color(label: Label, index: int) -> RGBA:
    return label.color if label.color is not None else DEFAULT_PALETTE[index % len(DEFAULT_PALETTE)]


def parse_color(text: str) -> RGBA:
    """Accepts exactly #RRGGBB (alpha 255) and #RRGGBBAA, case-insensitive."""
    if not isinstance(text, str) or not text.startswith("#") or len(text) not in (7, 9):
        raise ValueError(f"unsupported color form: {text!r}")
    try:
        values = [int(text[i : i + 2], 16) for i in range(1, len(text), 2)]
    except ValueError:
        raise ValueError(f"invalid hex digits in color: {text!r}") from None
    if len(values) == 3:
        values.append(255)
    return RGBA(*values)


def format_color(color: RGBA) -> str:
    return f"#{color.r:02x}{color.g:02x}{color.b:02x}{color.a:02x}"


def _parse_err(index: int, fld: str, reason: str) -> HarpError:
    return HarpError(
        ErrorCode.E140_RemoteJobError,
        "The endpoint returned malformed labels.",
        f"labels[{index}].{fld}: {reason}",
    )


def _number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def parse_labels(fragment: list) -> LabelSet:
    if not isinstance(fragment, list):
        raise _parse_err(-1, "labels", "not an array")
    out = []
    for i, entry in enumerate(fragment):
        if not isinstance(entry, dict):
            raise _parse_err(i, "entry", "not an object")
        t = entry.get("t")
        if not _number(t) or t < 0 or t != t:
            raise _parse_err(i, "t", "must be a non-negative number")
        text = entry.get("label")
        if not isinstance(text, str):
            raise _parse_err(i, "label", "must be a string")
        duration = entry.get("duration")
        if duration is not None and (not _number(duration) or duration < 0):
            raise _parse_err(i, "duration", "must be a non-negative number")
        description = entry.get("description")
        if description is not None and not isinstance(description, str):
            raise _parse_err(i, "description", "must be a string")
        amplitude = entry.get("amplitude")
        if amplitude is not None and (not _number(amplitude) or not -1 <= amplitude <= 1):
            raise _parse_err(i, "amplitude", "must be a number in [-1, 1]")
        pitch = entry.get("pitch")
        if pitch is not None and (not isinstance(pitch, int) or isinstance(pitch, bool) or not 0 <= pitch <= 127):
            raise _parse_err(i, "pitch", "must be an integer in [0, 127]")
        color_text = entry.get("color")
        color = None
        if color_text is not None:
            try:
                color = parse_color(color_text)
            except ValueError as e:
                raise _parse_err(i, "color", str(e)) from None
        link = entry.get("link")
        if link is not None and not isinstance(link, str):
            raise _parse_err(i, "link", "must be a string")
        out.append(
            Label(
                t=float(t),
                text=text,
                duration=float(duration) if duration is not None else None,
                description=description,
                amplitude=float(amplitude) if amplitude is not None else None,
                pitch=pitch,
                color=color,
                link=link,
            )
        )
    return tuple(out)


def serialize_labels(labels: LabelSet) -> list:
    return [
        {
            "t": lb.t,
            "duration": lb.duration,
            "label": lb.text,
            "description": lb.description,
            "amplitude": lb.amplitude,
            "pitch": lb.pitch,
            "color": format_color(lb.color) if lb.color is not None else None,
            "link": lb.link,
        }
        for lb in labels
    ]


@dataclass(frozen=True)
class Viewport:
    start_s: float
    duration_s: float
    width_px: int
    height_px: int
    mode: str  # "waveform" | "pianoroll"
    pitch_min: Optional[int] = None
    pitch_max: Optional[int] = None

    def __post_init__(self):
        if self.duration_s <= 0:
            raise ValueError("duration_s must be positive")
        if self.width_px <= 0 or self.height_px <= 0:
            raise ValueError("viewport size must be positive")
        if self.mode not in ("waveform", "pianoroll"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "pianoroll":
            if self.pitch_min is None or self.pitch_max is None or self.pitch_min > self.pitch_max:
                raise ValueError("pianoroll viewport needs a valid pitch range")


@dataclass(frozen=True)
class LabelGeometry:
    x_px: float
    width_px: float
    y_px: float
    visible: bool


def layout_label(label: Label, vp: Viewport) -> LabelGeometry:
    x = (label.t - vp.start_s) / vp.duration_s * vp.width_px
    width = (label.duration or 0.0) / vp.duration_s * vp.width_px
    if vp.mode == "waveform":
        amplitude = label.amplitude if label.amplitude is not None else 0.0
        y = (1.0 - amplitude) / 2.0 * vp.height_px
    else:
        rows = vp.pitch_max - vp.pitch_min + 1
        pitch = label.pitch if label.pitch is not None else (vp.pitch_min + vp.pitch_max) / 2.0
        y = (vp.pitch_max - pitch + 0.5) / rows * vp.height_px
    t0, t1 = label.t, label.t + (label.duration or 0.0)
    visible = t1 >= vp.start_s and t0 <= vp.start_s + vp.duration_s
    return LabelGeometry(x_px=x, width_px=width, y_px=y, visible=visible)
