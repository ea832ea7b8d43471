import socket
import time

import numpy as np
import pytest

from harpkit import midi, mock_endpoint, protocol, wav
from harpkit.errors import ErrorCode, HarpError

from conftest import addr, make_buffer, random_buffer, simple_note_file


def free_unused_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


class TestEndpointAddress:
    def test_trailing_slash_stripped(self):
        a = protocol.EndpointAddress.parse("http://example.com:8000/")
        assert a.base_url == "http://example.com:8000"

    def test_bad_scheme(self):
        with pytest.raises(HarpError):
            protocol.EndpointAddress.parse("ftp://example.com")

    def test_no_host(self):
        with pytest.raises(HarpError):
            protocol.EndpointAddress.parse("http://")


class TestFetchCard:
    def test_gain_card(self, gain_server):
        card = protocol.fetch_card(addr(gain_server))
        assert card.name == "Gain"
        assert card.media_in == "audio"
        assert len(card.controls) == 1
        assert card.controls[0].label == "gain"
        assert card == mock_endpoint.GAIN_CARD

    def test_unreachable(self):
        dead = protocol.EndpointAddress(f"http://127.0.0.1:{free_unused_port()}")
        with pytest.raises(HarpError) as e:
            protocol.fetch_card(dead, timeout=2)
        assert e.value.code is ErrorCode.E100_ConnectionFailed


class TestJobLifecycle:
    def test_submit_poll_result(self, gain_server):
        buf = random_buffer(np.random.default_rng(1))
        a = addr(gain_server)
        card = protocol.fetch_card(a)
        values = protocol.validate_control_values(card, {"gain": 0.5})
        handle = protocol.submit_job(a, card, wav.encode_wav(buf, "f32"), "audio", values)
        assert handle.job_id

        deadline = time.time() + 5
        while True:
            status = protocol.poll_status(handle)
            assert status.state in ("queued", "running", "complete")
            if status.state == "complete":
                assert status.progress == 1.0
                break
            assert time.time() < deadline

        # terminal state is absorbing
        assert protocol.poll_status(handle).state == "complete"
        result = protocol.fetch_result(handle)
        assert result.media_kind == "audio"
        assert result.labels == ()

    def test_media_type_mismatch_is_client_side(self, gain_server):
        a = addr(gain_server)
        card = protocol.fetch_card(a)
        with pytest.raises(HarpError) as e:
            protocol.submit_job(a, card, simple_note_file(), "midi", {"gain": 1.0})
        assert e.value.code is ErrorCode.E120_MediaTypeMismatch

    def test_unknown_job_id(self, gain_server):
        handle = protocol.JobHandle(endpoint=addr(gain_server), job_id="nope")
        with pytest.raises(HarpError) as e:
            protocol.poll_status(handle)
        assert e.value.code is ErrorCode.E141_JobNotFound
        with pytest.raises(HarpError) as e:
            protocol.cancel_job(handle)
        assert e.value.code is ErrorCode.E141_JobNotFound

    def test_bad_media_gives_job_error(self, gain_server):
        a = addr(gain_server)
        card = protocol.fetch_card(a)
        handle = protocol.submit_job(a, card, b"RIFFgarbage", "audio", {"gain": 1.0})
        deadline = time.time() + 5
        while True:
            status = protocol.poll_status(handle)
            if status.terminal:
                break
            assert time.time() < deadline
        assert status.state == "error"
        with pytest.raises(HarpError) as e:
            protocol.fetch_result(handle)
        assert e.value.code is ErrorCode.E140_RemoteJobError

    def test_cancel_queued_job(self, slow_gain_server):
        a = addr(slow_gain_server)
        card = protocol.fetch_card(a)
        data = wav.encode_wav(make_buffer([0.1] * 64), "f32")
        # first job occupies the worker; second stays queued and is cancellable
        blocker = protocol.submit_job(a, card, data, "audio", {"gain": 1.0})
        queued = protocol.submit_job(a, card, data, "audio", {"gain": 1.0})
        status = protocol.cancel_job(queued)
        assert status.state == "cancelled"
        assert protocol.poll_status(queued).state == "cancelled"
        # cancelling a terminal job is a no-op
        assert protocol.cancel_job(queued).state == "cancelled"
        protocol.cancel_job(blocker)

    def test_cancel_completed_is_noop(self, gain_server):
        a = addr(gain_server)
        card = protocol.fetch_card(a)
        data = wav.encode_wav(make_buffer([0.1] * 64), "f32")
        result = protocol.process(a, data, "audio", {}, timeout=10)
        assert result.media_kind == "audio"


class TestProcess:
    def test_gain_half(self, gain_server):
        rng = np.random.default_rng(5)
        buf = random_buffer(rng, n=2000)
        statuses = []
        result = protocol.process(
            addr(gain_server), wav.encode_wav(buf, "f32"), "audio", {"gain": 0.5},
            on_progress=statuses.append, timeout=15,
        )
        out = wav.decode_wav(result.media_bytes)
        # oracle: elementwise multiply before re-quantization
        assert np.max(np.abs(out.channels[0] - buf.channels[0] * 0.5)) < 1e-4
        assert statuses and statuses[-1].state == "complete"
        states = [s.state for s in statuses]
        assert states == sorted(states, key=["queued", "running", "complete"].index)

    def test_gain_identity_bit_exact(self, gain_server):
        buf = random_buffer(np.random.default_rng(6), n=500)
        result = protocol.process(addr(gain_server), wav.encode_wav(buf, "f32"),
                                  "audio", {"gain": 1.0}, timeout=15)
        assert wav.decode_wav(result.media_bytes) == buf

    def test_timeout_budget(self, slow_gain_server):
        data = wav.encode_wav(make_buffer([0.1] * 64), "f32")
        with pytest.raises(HarpError) as e:
            protocol.process(addr(slow_gain_server), data, "audio", {}, timeout=0.3)
        assert e.value.code is ErrorCode.E101_Timeout

    def test_labels_only_result(self, onsets_server):
        silence = wav.encode_wav(make_buffer([0.0] * 4096), "f32")
        result = protocol.process(addr(onsets_server), silence, "audio",
                                  {"threshold": 0.1}, timeout=15)
        assert result.media_bytes is None and result.media_kind is None
        assert result.labels == ()

    def test_validation_error_propagates(self, gain_server):
        data = wav.encode_wav(make_buffer([0.1]), "f32")
        with pytest.raises(HarpError) as e:
            protocol.process(addr(gain_server), data, "audio", {"gain": 99}, timeout=15)
        assert e.value.code is ErrorCode.E130_ControlValidation
