import struct

import numpy as np
import pytest

from harpkit import mock_endpoint, protocol, wav


def vlq(value: int) -> bytes:
    """Independent variable-length-quantity encoder for handcrafted fixtures."""
    out = [value & 0x7F]
    value >>= 7
    while value:
        out.append(0x80 | (value & 0x7F))
        value >>= 7
    return bytes(reversed(out))


def smf(tracks: list[bytes], fmt: int = 0, tpq: int = 480, division: int = None) -> bytes:
    """Handcrafted SMF assembly, independent of harpkit.midi.serialize_midi."""
    div = division if division is not None else tpq
    data = struct.pack(">4sIHHH", b"MThd", 6, fmt, len(tracks), div)
    for body in tracks:
        data += b"MTrk" + struct.pack(">I", len(body)) + body
    return data


def track(events: list[tuple[int, bytes]], end_delta: int = 0) -> bytes:
    """events: (delta, raw message bytes); end-of-track appended."""
    body = b"".join(vlq(delta) + msg for delta, msg in events)
    return body + vlq(end_delta) + bytes([0xFF, 0x2F, 0])


def simple_note_file(pitch=60, velocity=100, start=0, end=480, tpq=480) -> bytes:
    return smf(
        [
            track(
                [
                    (start, bytes([0x90, pitch, velocity])),
                    (end - start, bytes([0x80, pitch, 0])),
                ]
            )
        ],
        tpq=tpq,
    )


def make_buffer(samples, sample_rate=44100) -> wav.AudioBuffer:
    return wav.AudioBuffer(sample_rate, (np.asarray(samples, dtype=np.float64),))


def random_buffer(rng, n=1000, channels=1, sample_rate=44100) -> wav.AudioBuffer:
    chans = tuple(rng.uniform(-1.0, 1.0, n).astype(np.float32).astype(np.float64)
                  for _ in range(channels))
    return wav.AudioBuffer(sample_rate, chans)


@pytest.fixture(scope="session")
def gain_server():
    with mock_endpoint.run_mock_endpoint(mock_endpoint.MockBehavior("gain")) as h:
        yield h


@pytest.fixture(scope="session")
def transpose_server():
    with mock_endpoint.run_mock_endpoint(mock_endpoint.MockBehavior("transpose")) as h:
        yield h


@pytest.fixture(scope="session")
def onsets_server():
    with mock_endpoint.run_mock_endpoint(mock_endpoint.MockBehavior("onsets")) as h:
        yield h


@pytest.fixture(scope="session")
def slow_gain_server():
    behavior = mock_endpoint.MockBehavior("gain", artificial_delay=1.0)
    with mock_endpoint.run_mock_endpoint(behavior) as h:
        yield h


def addr(server) -> protocol.EndpointAddress:
    return protocol.EndpointAddress.parse(server.url)
