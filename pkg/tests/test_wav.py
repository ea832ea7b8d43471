import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from harpkit import wav
from harpkit.errors import ErrorCode, HarpError

from conftest import make_buffer


def handmade_wav_16(samples_le: bytes, channels=1, rate=44100) -> bytes:
    """Canonical 16-bit WAV assembled by hand, independent of encode_wav."""
    block = channels * 2
    fmt = struct.pack("<HHIIHH", 1, channels, rate, rate * block, block, 16)
    body = b"WAVE" + b"fmt " + struct.pack("<I", 16) + fmt
    body += b"data" + struct.pack("<I", len(samples_le)) + samples_le
    if len(samples_le) & 1:
        body += b"\x00"
    return b"RIFF" + struct.pack("<I", len(body)) + body


class TestDecode:
    def test_full_scale_negative(self):
        data = handmade_wav_16(struct.pack("<h", -32768))
        buf = wav.decode_wav(data)
        assert buf.channels[0][0] == -1.0

    def test_positive_full_scale(self):
        data = handmade_wav_16(struct.pack("<h", 32767))
        buf = wav.decode_wav(data)
        # scaling oracle: 32767 / 32768
        assert buf.channels[0][0] == pytest.approx(32767 / 32768, abs=0)

    def test_rifx_rejected(self):
        data = b"RIFX" + handmade_wav_16(b"\x00\x00")[4:]
        with pytest.raises(HarpError) as e:
            wav.decode_wav(data)
        assert e.value.code is ErrorCode.E150_MediaDecode

    def test_truncated_data_chunk(self):
        data = handmade_wav_16(struct.pack("<hh", 1, 2))
        with pytest.raises(HarpError):
            wav.decode_wav(data[:-3])

    def test_compressed_format_rejected(self):
        fmt = struct.pack("<HHIIHH", 0x55, 1, 44100, 44100, 1, 16)  # MP3 tag
        body = b"WAVE" + b"fmt " + struct.pack("<I", 16) + fmt
        body += b"data" + struct.pack("<I", 2) + b"\x00\x00"
        with pytest.raises(HarpError) as e:
            wav.decode_wav(b"RIFF" + struct.pack("<I", len(body)) + body)
        assert e.value.code is ErrorCode.E150_MediaDecode

    def test_extensible_pcm16(self):
        sub = struct.pack("<H", 1) + b"\x00\x00" + b"\x00\x00\x10\x00\x80\x00\x00\xaa\x00\x38\x9b\x71"
        fmt = struct.pack("<HHIIHH", 0xFFFE, 1, 44100, 88200, 2, 16)
        fmt += struct.pack("<HHI", 22, 16, 0x4) + sub
        body = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt
        body += b"data" + struct.pack("<I", 2) + struct.pack("<h", 16384)
        buf = wav.decode_wav(b"RIFF" + struct.pack("<I", len(body)) + body)
        assert buf.channels[0][0] == pytest.approx(0.5)

    def test_24_bit(self):
        # hand-packed 24-bit sample: -2^23 -> -1.0; 2^22 -> 0.5
        payload = b"\x00\x00\x80" + b"\x00\x00\x40"
        fmt = struct.pack("<HHIIHH", 1, 1, 44100, 44100 * 3, 3, 24)
        body = b"WAVE" + b"fmt " + struct.pack("<I", 16) + fmt
        body += b"data" + struct.pack("<I", len(payload)) + payload
        buf = wav.decode_wav(b"RIFF" + struct.pack("<I", len(body)) + body)
        assert buf.channels[0][0] == -1.0
        assert buf.channels[0][1] == 0.5


class TestEncode:
    def test_zero_maps_to_zero_bytes(self):
        data = wav.encode_wav(make_buffer([0.0]), "16")
        assert data[-2:] == b"\x00\x00"

    def test_clamp_above_full_scale(self):
        data = wav.encode_wav(make_buffer([1.5]), "16")
        assert struct.unpack("<h", data[-2:])[0] == 32767

    def test_empty_buffer_rejected(self):
        with pytest.raises(HarpError) as e:
            wav.encode_wav(make_buffer([]), "16")
        assert e.value.code is ErrorCode.E151_MediaEncode

    def test_round_half_away_from_zero(self):
        buf = make_buffer([0.5 / 32768, -0.5 / 32768])
        decoded = wav.decode_wav(wav.encode_wav(buf, "16"))
        assert decoded.channels[0][0] == 1 / 32768
        assert decoded.channels[0][1] == -1 / 32768

    def test_f32_round_trip_stereo(self):
        rng = np.random.default_rng(7)
        chans = tuple(rng.uniform(-1, 1, 333).astype(np.float32).astype(np.float64)
                      for _ in range(2))
        buf = wav.AudioBuffer(48000, chans)
        assert wav.decode_wav(wav.encode_wav(buf, "f32")) == buf

    def test_16_bit_encode_decode_encode_stable(self):
        rng = np.random.default_rng(8)
        buf = make_buffer(rng.uniform(-1, 1, 500))
        once = wav.encode_wav(buf, "16")
        again = wav.encode_wav(wav.decode_wav(once), "16")
        assert once == again

    def test_24_bit_round_trip(self):
        buf = make_buffer([-1.0, 0.5, 0.25, -0.125])
        decoded = wav.decode_wav(wav.encode_wav(buf, "24"))
        assert np.allclose(decoded.channels[0], buf.channels[0], atol=1 / (1 << 23))


@settings(max_examples=50, deadline=None)
@given(
    data=st.lists(st.floats(min_value=-1.0, max_value=1.0, width=32), min_size=1, max_size=200),
    rate=st.integers(min_value=1, max_value=192000),
)
def test_property_f32_identity(data, rate):
    buf = wav.AudioBuffer(rate, (np.array(data, dtype=np.float64),))
    assert wav.decode_wav(wav.encode_wav(buf, "f32")) == buf
