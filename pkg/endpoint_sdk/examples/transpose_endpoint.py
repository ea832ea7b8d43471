"""MIDI-to-MIDI example: shift note pitches by rewriting SMF event bytes.

Walks every track's event stream (handling running status, meta events,
and sysex) and adds the semitone offset to the pitch byte of note-on and
note-off messages, clamping to [0, 127]. Everything else is preserved
byte for byte.
"""

import struct
import sys
import tempfile
from pathlib import Path

from harpserve import CardBuilder, serve_endpoint


def build_card() -> CardBuilder:
    return (
        CardBuilder("Transpose", description="Shifts every note by a number of semitones.",
                    author="harpserve examples", tags=["demo", "midi"])
        .midi_in()
        .midi_out()
        .slider("semitones", minimum=-12.0, maximum=12.0, step=1.0, default=0.0)
    )


def _skip_vlq(data: bytearray, pos: int) -> int:
    while data[pos] & 0x80:
        pos += 1
    return pos + 1


def _read_vlq(data: bytearray, pos: int) -> tuple[int, int]:
    value = 0
    while True:
        b = data[pos]
        pos += 1
        value = (value << 7) | (b & 0x7F)
        if not b & 0x80:
            return value, pos


def transpose_track(body: bytearray, semitones: int) -> None:
    pos = 0
    running = None
    while pos < len(body):
        pos = _skip_vlq(body, pos)
        status = body[pos]
        if status >= 0x80:
            pos += 1
        else:
            if running is None:
                raise ValueError("running status without prior status")
            status = running
        if status == 0xFF:
            pos += 1  # meta type
            length, pos = _read_vlq(body, pos)
            pos += length
            continue
        if status in (0xF0, 0xF7):
            length, pos = _read_vlq(body, pos)
            pos += length
            running = None
            continue
        running = status
        kind = status & 0xF0
        if kind in (0x80, 0x90):
            body[pos] = min(max(body[pos] + semitones, 0), 127)
            pos += 2
        elif kind in (0xA0, 0xB0, 0xE0):
            pos += 2
        else:  # program change, channel pressure
            pos += 1


def transpose_file(data: bytes, semitones: int) -> bytes:
    if data[:4] != b"MThd":
        raise ValueError("not a standard MIDI file")
    (header_len,) = struct.unpack_from(">I", data, 4)
    out = bytearray(data[: 8 + header_len])
    pos = 8 + header_len
    while pos + 8 <= len(data):
        cid = data[pos : pos + 4]
        (size,) = struct.unpack_from(">I", data, pos + 4)
        body = bytearray(data[pos + 8 : pos + 8 + size])
        if cid == b"MTrk":
            transpose_track(body, semitones)
        out += data[pos : pos + 8] + body
        pos += 8 + size
    return bytes(out)


def run(media_path, controls):
    data = Path(media_path).read_bytes()
    shifted = transpose_file(data, int(controls["semitones"]))
    out_path = str(Path(tempfile.mkdtemp()) / "out.mid")
    Path(out_path).write_bytes(shifted)
    return out_path, []


def main():
    port = int(sys.argv[1]) if len(sys.argv) > 1 else 7862
    handle = serve_endpoint(build_card(), run, port=port)
    print(f"transpose endpoint on {handle.url}", file=sys.stderr)
    handle.serve_forever()


if __name__ == "__main__":
    main()
