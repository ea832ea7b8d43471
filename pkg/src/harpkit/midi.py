"""Standard MIDI File parsing, serialization, and tempo-map time conversion.

Formats 0 and 1 only; tracks merge onto one shared tick timeline. SMPTE time
division and format 2 are rejected. Only notes and tempo are modeled: other
channel messages and meta events are dropped on parse.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from .errors import ErrorCode, HarpError

DEFAULT_US_PER_QUARTER = 500000


@dataclass(frozen=True, order=True)
class Note:
    start_tick: int
    end_tick: int
    pitch: int
    velocity: int
    channel: int

    def __post_init__(self):
        if not 0 <= self.pitch <= 127:
            raise ValueError("pitch out of range")
        if not 1 <= self.velocity <= 127:
            raise ValueError("velocity out of range")
        if not 0 <= self.channel <= 15:
            raise ValueError("channel out of range")
        if self.end_tick <= self.start_tick:
            raise ValueError("note must have positive length")


@dataclass(frozen=True)
class TempoEvent:
    tick: int
    us_per_quarter: int


@dataclass(frozen=True)
class MidiSequence:
    ticks_per_quarter: int
    tempo_events: tuple[TempoEvent, ...] = (TempoEvent(0, DEFAULT_US_PER_QUARTER),)
    notes: tuple[Note, ...] = ()
    end_tick: int = 0

    def __post_init__(self):
        if self.ticks_per_quarter <= 0:
            raise ValueError("ticks_per_quarter must be positive")
        ticks = [e.tick for e in self.tempo_events]
        if not ticks or ticks[0] != 0:
            raise ValueError("tempo map must start at tick 0")
        if any(b <= a for a, b in zip(ticks, ticks[1:])):
            raise ValueError("tempo events must be strictly increasing in tick")
        if any(e.us_per_quarter <= 0 for e in self.tempo_events):
            raise ValueError("tempo must be positive")
        max_end = max((n.end_tick for n in self.notes), default=0)
        if self.end_tick < max_end:
            raise ValueError("end_tick precedes last note end")


def _err(detail: str) -> HarpError:
    return HarpError(ErrorCode.E150_MediaDecode, "Could not read the MIDI file.", detail)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def remaining(self) -> int:
        return len(self.data) - self.pos

    def take(self, n: int) -> bytes:
        if self.remaining() < n:
            raise _err("unexpected end of track data")
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def byte(self) -> int:
        return self.take(1)[0]

    def varlen(self) -> int:
        value = 0
        for _ in range(4):
            b = self.byte()
            value = (value << 7) | (b & 0x7F)
            if not b & 0x80:
                return value
        raise _err("variable-length quantity longer than 4 bytes")


def parse_midi(data: bytes) -> MidiSequence:
    if len(data) < 14 or data[0:4] != b"MThd":
        raise _err("missing MThd header")
    (header_len,) = struct.unpack_from(">I", data, 4)
    if header_len < 6:
        raise _err("short MThd chunk")
    fmt, n_tracks, division = struct.unpack_from(">HHH", data, 8)
    if fmt not in (0, 1):
        raise _err(f"unsupported SMF format {fmt}")
    if division & 0x8000:
        raise _err("SMPTE time division not supported")
    if division == 0:
        raise _err("zero ticks per quarter")
    tpq = division

    tempos: dict[int, int] = {}
    notes: list[Note] = []
    end_tick = 0
    pos = 8 + header_len
    tracks_seen = 0
    while tracks_seen < n_tracks:
        if pos + 8 > len(data):
            raise _err("track chunk missing")
        cid = data[pos : pos + 4]
        (size,) = struct.unpack_from(">I", data, pos + 4)
        body = data[pos + 8 : pos + 8 + size]
        pos += 8 + size
        if cid != b"MTrk":
            continue  # alien chunks are skipped per the SMF spec
        if len(body) < size:
            raise _err("track chunk truncated")
        tracks_seen += 1
        track_end = _parse_track(_Reader(body), tempos, notes)
        end_tick = max(end_tick, track_end)

    tempos.setdefault(0, DEFAULT_US_PER_QUARTER)
    tempo_events = tuple(TempoEvent(t, us) for t, us in sorted(tempos.items()))
    notes.sort(key=lambda n: (n.start_tick, n.pitch, n.channel, n.end_tick))
    return MidiSequence(
        ticks_per_quarter=tpq,
        tempo_events=tempo_events,
        notes=tuple(notes),
        end_tick=max(end_tick, max((n.end_tick for n in notes), default=0)),
    )


def _parse_track(r: _Reader, tempos: dict[int, int], notes: list[Note]) -> int:
    tick = 0
    running = None
    # FIFO queues of (start_tick, velocity) keyed by (channel, pitch)
    open_notes: dict[tuple[int, int], list[tuple[int, int]]] = {}

    def close(channel: int, pitch: int, at: int):
        queue = open_notes.get((channel, pitch))
        if not queue:
            return
        start, velocity = queue.pop(0)
        if at > start:
            notes.append(Note(start, at, pitch, velocity, channel))

    while r.remaining():
        tick += r.varlen()
        status = r.byte()
        if status < 0x80:
            if running is None:
                raise _err("running status without prior status byte")
            r.pos -= 1
            status = running
        if status == 0xFF:
            meta = r.byte()
            length = r.varlen()
            body = r.take(length)
            if meta == 0x51:
                if length != 3:
                    raise _err("tempo meta event must be 3 bytes")
                tempos[tick] = (body[0] << 16) | (body[1] << 8) | body[2]
            elif meta == 0x2F:
                break
            continue
        if status in (0xF0, 0xF7):
            r.take(r.varlen())
            running = None
            continue
        if status >= 0xF0:
            raise _err(f"unexpected system message {status:#04x}")
        running = status
        kind = status & 0xF0
        channel = status & 0x0F
        if kind in (0x80, 0x90, 0xA0, 0xB0, 0xE0):
            d1, d2 = r.byte(), r.byte()
        else:  # program change, channel pressure
            d1, d2 = r.byte(), 0
        if kind == 0x90 and d2 > 0:
            open_notes.setdefault((channel, d1), []).append((tick, d2))
        elif kind == 0x80 or (kind == 0x90 and d2 == 0):
            close(channel, d1, tick)

    for (channel, pitch), queue in open_notes.items():
        for start, velocity in queue:
            if tick > start:
                notes.append(Note(start, tick, pitch, velocity, channel))
    return tick


def _varlen_bytes(value: int) -> bytes:
    out = [value & 0x7F]
    value >>= 7
    while value:
        out.append(0x80 | (value & 0x7F))
        value >>= 7
    return bytes(reversed(out))


def serialize_midi(seq: MidiSequence) -> bytes:
    """Emit format 0, one track. At equal ticks: tempo, then offs, then ons."""
    events: list[tuple[int, int, bytes]] = []  # (tick, order_class, payload)
    for e in seq.tempo_events:
        us = e.us_per_quarter
        events.append((e.tick, 0, bytes([0xFF, 0x51, 3, us >> 16 & 0xFF, us >> 8 & 0xFF, us & 0xFF])))
    for n in seq.notes:
        events.append((n.start_tick, 2, bytes([0x90 | n.channel, n.pitch, n.velocity])))
        events.append((n.end_tick, 1, bytes([0x80 | n.channel, n.pitch, 0])))
    events.sort(key=lambda e: (e[0], e[1]))

    track = bytearray()
    prev = 0
    for tick, _, payload in events:
        track += _varlen_bytes(tick - prev)
        track += payload
        prev = tick
    track += _varlen_bytes(max(seq.end_tick - prev, 0))
    track += bytes([0xFF, 0x2F, 0])

    header = struct.pack(">4sIHHH", b"MThd", 6, 0, 1, seq.ticks_per_quarter)
    return header + b"MTrk" + struct.pack(">I", len(track)) + bytes(track)


def ticks_to_seconds(seq: MidiSequence, tick: int) -> float:
    """Piecewise accumulation over the tempo map; monotone in tick."""
    seconds = 0.0
    events = seq.tempo_events
    for i, ev in enumerate(events):
        seg_end = events[i + 1].tick if i + 1 < len(events) else None
        if seg_end is None or tick <= seg_end:
            return seconds + (tick - ev.tick) * ev.us_per_quarter / (seq.ticks_per_quarter * 1e6)
        seconds += (seg_end - ev.tick) * ev.us_per_quarter / (seq.ticks_per_quarter * 1e6)
    return seconds


def extract_notes(seq: MidiSequence) -> list[dict]:
    """Notes in seconds, ordered by start then pitch; durations strictly positive."""
    out = []
    for n in seq.notes:
        start = ticks_to_seconds(seq, n.start_tick)
        end = ticks_to_seconds(seq, n.end_tick)
        out.append(
            {
                "pitch": n.pitch,
                "velocity": n.velocity,
                "start_s": start,
                "duration_s": end - start,
                "channel": n.channel,
            }
        )
    out.sort(key=lambda d: (d["start_s"], d["pitch"]))
    return out
