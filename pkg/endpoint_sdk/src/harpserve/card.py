"""Card and label declarations, serialized to the protocol wire formats."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


class CardBuilder:
    """Fluent declaration of an endpoint's identity, media kinds, and controls."""

    def __init__(self, name: str, description: str = "", author: str = "",
                 tags: Optional[list[str]] = None):
        if not name:
            raise ValueError("card name must be non-empty")
        self.name = name
        self.description_text = description
        self.author_text = author
        self.tags = list(tags or [])
        self.media_in = "audio"
        self.media_out = "audio"
        self.controls: list[dict] = []

    # -- media kinds ----------------------------------------------------------

    def audio_in(self) -> "CardBuilder":
        self.media_in = "audio"
        return self

    def midi_in(self) -> "CardBuilder":
        self.media_in = "midi"
        return self

    def audio_out(self, with_labels: bool = False) -> "CardBuilder":
        self.media_out = "audio+labels" if with_labels else "audio"
        return self

    def midi_out(self, with_labels: bool = False) -> "CardBuilder":
        self.media_out = "midi+labels" if with_labels else "midi"
        return self

    def labels_out(self) -> "CardBuilder":
        self.media_out = "labels"
        return self

    # -- controls -------------------------------------------------------------

    def _add(self, spec: dict) -> "CardBuilder":
        if any(c["label"] == spec["label"] for c in self.controls):
            raise ValueError(f"duplicate control label {spec['label']!r}")
        self.controls.append(spec)
        return self

    def slider(self, label: str, minimum: float, maximum: float,
               step: float, default: float) -> "CardBuilder":
        if not minimum < maximum:
            raise ValueError("slider requires minimum < maximum")
        if step <= 0:
            raise ValueError("slider step must be positive")
        if not minimum <= default <= maximum:
            raise ValueError("slider default outside range")
        return self._add({"type": "slider", "label": label, "min": minimum,
                          "max": maximum, "step": step, "default": default})

    def number(self, label: str, default: float) -> "CardBuilder":
        return self._add({"type": "number", "label": label, "default": default})

    def text(self, label: str, default: str = "") -> "CardBuilder":
        return self._add({"type": "text", "label": label, "default": default})

    def dropdown(self, label: str, options: list[str], default: str) -> "CardBuilder":
        if not options:
            raise ValueError("dropdown needs at least one option")
        if default not in options:
            raise ValueError("dropdown default must be among options")
        return self._add({"type": "dropdown", "label": label,
                          "options": list(options), "default": default})

    def toggle(self, label: str, default: bool = False) -> "CardBuilder":
        return self._add({"type": "toggle", "label": label, "default": bool(default)})

    # -- serialization --------------------------------------------------------

    def to_wire(self) -> dict:
        return {
            "schema_version": 2,
            "card": {
                "name": self.name,
                "description": self.description_text,
                "author": self.author_text,
                "tags": self.tags,
            },
            "media_in": self.media_in,
            "media_out": self.media_out,
            "controls": list(self.controls),
        }


@dataclass
class OutputLabel:
    """One time-stamped annotation created inside a processing function."""

    t: float
    text: str
    duration: Optional[float] = None
    description: Optional[str] = None
    amplitude: Optional[float] = None
    pitch: Optional[int] = None
    color: Optional[str] = None  # "#RRGGBB" or "#RRGGBBAA"
    link: Optional[str] = None

    def __post_init__(self):
        if self.t < 0:
            raise ValueError("label time must be non-negative")
        if self.duration is not None and self.duration < 0:
            raise ValueError("label duration must be non-negative")
        if self.amplitude is not None and not -1 <= self.amplitude <= 1:
            raise ValueError("amplitude anchor must be in [-1, 1]")
        if self.pitch is not None and not 0 <= self.pitch <= 127:
            raise ValueError("pitch anchor must be in [0, 127]")

    def to_wire(self) -> dict:
        return {
            "t": self.t,
            "duration": self.duration,
            "label": self.text,
            "description": self.description,
            "amplitude": self.amplitude,
            "pitch": self.pitch,
            "color": self.color,
            "link": self.link,
        }
