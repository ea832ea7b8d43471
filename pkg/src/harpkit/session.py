"""Document model behind the interactive loop.

A Session holds the current Document (media + labels + provenance) plus
bounded undo/redo stacks of full snapshots, the selected endpoint, and the
user-facing status/info lines. Documents are immutable; every mutation
replaces the current Document wholesale, which makes snapshots free and
mutating operations trivially atomic.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Optional, Union

from . import labels as labels_mod
from . import midi as midi_mod
from . import protocol
from . import wav as wav_mod
from .errors import ErrorCode, HarpError

MAX_HISTORY = 32

Media = Union[wav_mod.AudioBuffer, midi_mod.MidiSequence]


@dataclass(frozen=True)
class Document:
    media: Optional[Media] = None
    media_kind: Optional[str] = None  # "audio" | "midi"
    labels: labels_mod.LabelSet = ()
    source_name: str = ""

    def __post_init__(self):
        if self.media is None and self.media_kind is not None:
            raise ValueError("media_kind set without media")
        if isinstance(self.media, wav_mod.AudioBuffer) and self.media_kind != "audio":
            raise ValueError("audio media requires media_kind 'audio'")
        if isinstance(self.media, midi_mod.MidiSequence) and self.media_kind != "midi":
            raise ValueError("MIDI media requires media_kind 'midi'")


def document_hash(doc: Document) -> str:
    """Stable digest over a canonical serialization; defines Document equality."""
    h = hashlib.sha256()
    h.update((doc.media_kind or "none").encode())
    h.update(b"\x00")
    if isinstance(doc.media, wav_mod.AudioBuffer):
        h.update(wav_mod.encode_wav(doc.media, "f32") if doc.media.num_frames else b"empty")
    elif isinstance(doc.media, midi_mod.MidiSequence):
        h.update(midi_mod.serialize_midi(doc.media))
    h.update(b"\x00")
    h.update(json.dumps(labels_mod.serialize_labels(doc.labels), sort_keys=True).encode())
    h.update(b"\x00")
    h.update(doc.source_name.encode())
    return h.hexdigest()


def detect_media_kind(data: bytes, filename: str = "") -> str:
    """Magic bytes decide; the extension only breaks ties when magic is absent."""
    if data[:4] == b"RIFF":
        return "audio"
    if data[:4] == b"MThd":
        return "midi"
    lower = filename.lower()
    if lower.endswith((".mid", ".midi", ".smf")):
        return "midi"
    if lower.endswith((".wav", ".wave")):
        return "audio"
    raise HarpError(
        ErrorCode.E150_MediaDecode,
        "Unrecognized media file (expected WAV or MIDI).",
        f"no RIFF/MThd magic and unhelpful filename {filename!r}",
    )


def decode_media(data: bytes, kind: str) -> Media:
    return wav_mod.decode_wav(data) if kind == "audio" else midi_mod.parse_midi(data)


def encode_media(media: Media) -> bytes:
    if isinstance(media, wav_mod.AudioBuffer):
        return wav_mod.encode_wav(media, "f32")
    return midi_mod.serialize_midi(media)


@dataclass
class Session:
    current: Document = field(default_factory=Document)
    undo_stack: list[Document] = field(default_factory=list)
    redo_stack: list[Document] = field(default_factory=list)
    endpoint: Optional[protocol.EndpointAddress] = None
    card: Optional[protocol.ModelCard] = None
    status_line: str = ""
    info_line: str = ""
    last_error: Optional[HarpError] = None

    # -- internal helpers -----------------------------------------------------

    def _push_undo(self, doc: Document) -> None:
        self.undo_stack.append(doc)
        if len(self.undo_stack) > MAX_HISTORY:
            del self.undo_stack[0 : len(self.undo_stack) - MAX_HISTORY]
        self.redo_stack.clear()

    # -- operations -----------------------------------------------------------

    def load_media(self, data: bytes, filename: str = "") -> None:
        kind = detect_media_kind(data, filename)
        media = decode_media(data, kind)  # raises before any state change
        self._push_undo(self.current)
        self.current = Document(media=media, media_kind=kind, labels=(), source_name=filename)
        self.status_line = f"Loaded media: {filename or kind}"

    def set_endpoint(self, address: protocol.EndpointAddress) -> protocol.ModelCard:
        card = protocol.fetch_card(address)  # prior endpoint kept on failure
        self.endpoint = address
        self.card = card
        self.status_line = f"Loaded: {card.name}"
        if self.current.media_kind and self.current.media_kind != card.media_in:
            self.info_line = (
                f"Note: {card.name} expects {card.media_in} input but the loaded "
                f"media is {self.current.media_kind}."
            )
        else:
            self.info_line = card.description
        return card

    def apply_result(self, result: protocol.ProcessResult, source_name: str = "") -> None:
        if result.media_bytes is not None:
            media = decode_media(result.media_bytes, result.media_kind)
            kind = result.media_kind
        else:
            media, kind = self.current.media, self.current.media_kind
        new_doc = Document(
            media=media,
            media_kind=kind,
            labels=result.labels,
            source_name=source_name or self.current.source_name,
        )
        self._push_undo(self.current)
        self.current = new_doc
        self.status_line = "Processing complete."

    def undo(self) -> bool:
        if not self.undo_stack:
            return False
        self.redo_stack.append(self.current)
        self.current = self.undo_stack.pop()
        self.status_line = "Undo."
        return True

    def redo(self) -> bool:
        if not self.redo_stack:
            return False
        self.undo_stack.append(self.current)
        self.current = self.redo_stack.pop()
        self.status_line = "Redo."
        return True

    def report_error(self, err: HarpError) -> None:
        self.last_error = err
        self.status_line = f"{err.code.value}: {err.user_message}"
