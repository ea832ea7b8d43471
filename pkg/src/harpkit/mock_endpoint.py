"""Reference endpoint server with three deterministic behaviors.

gain (audio -> audio), transpose (MIDI -> MIDI), onsets (audio -> labels).
Jobs execute FIFO on one worker thread; the job table is lock-guarded for
concurrent status reads. Useful both as a test double and as a runnable
demo server (``harp mock``).
"""

from __future__ import annotations

import json
import math
import queue
import threading
import time
import uuid
from dataclasses import dataclass, field
from http.server import ThreadingHTTPServer
from typing import Optional

import numpy as np

from . import labels as labels_mod
from . import midi as midi_mod
from . import protocol
from . import wav as wav_mod
from .httpserver import JsonRequestHandler, ServerHandle, parse_multipart

ONSET_WINDOW = 512
ONSET_HOP = 256

GAIN_CARD = protocol.ModelCard(
    name="Gain",
    description="Scales every sample by a constant factor.",
    author="harpkit",
    tags=("demo", "audio"),
    media_in="audio",
    media_out="audio",
    controls=(protocol.Slider(label="gain", min=0.0, max=2.0, step=0.01, default=1.0),),
)

TRANSPOSE_CARD = protocol.ModelCard(
    name="Transpose",
    description="Shifts every note by a number of semitones.",
    author="harpkit",
    tags=("demo", "midi"),
    media_in="midi",
    media_out="midi",
    controls=(protocol.Slider(label="semitones", min=-12.0, max=12.0, step=1.0, default=0.0),),
)

ONSETS_CARD = protocol.ModelCard(
    name="Onsets",
    description="Marks RMS threshold crossings with time-stamped labels.",
    author="harpkit",
    tags=("demo", "labels"),
    media_in="audio",
    media_out="labels",
    controls=(protocol.Slider(label="threshold", min=0.01, max=1.0, step=0.01, default=0.1),),
)

CARDS = {"gain": GAIN_CARD, "transpose": TRANSPOSE_CARD, "onsets": ONSETS_CARD}


def behavior_gain(buffer: wav_mod.AudioBuffer, gain: float) -> wav_mod.AudioBuffer:
    return wav_mod.AudioBuffer(
        sample_rate=buffer.sample_rate,
        channels=tuple(np.clip(c * gain, -1.0, 1.0) for c in buffer.channels),
    )


def behavior_transpose(seq: midi_mod.MidiSequence, semitones: int) -> midi_mod.MidiSequence:
    notes = tuple(
        midi_mod.Note(
            start_tick=n.start_tick,
            end_tick=n.end_tick,
            pitch=min(max(n.pitch + semitones, 0), 127),
            velocity=n.velocity,
            channel=n.channel,
        )
        for n in seq.notes
    )
    return midi_mod.MidiSequence(
        ticks_per_quarter=seq.ticks_per_quarter,
        tempo_events=seq.tempo_events,
        notes=notes,
        end_tick=seq.end_tick,
    )


def behavior_onsets(buffer: wav_mod.AudioBuffer, threshold: float) -> labels_mod.LabelSet:
    """RMS over full 512-sample windows at 256-sample hops; label each upward crossing."""
    mono = np.mean(np.stack(buffer.channels), axis=0)
    out = []
    prev = 0.0
    for start in range(0, len(mono) - ONSET_WINDOW + 1, ONSET_HOP):
        frame = mono[start : start + ONSET_WINDOW]
        rms = math.sqrt(float(np.mean(frame * frame)))
        if prev < threshold <= rms:
            out.append(
                labels_mod.Label(
                    t=start / buffer.sample_rate,
                    text="onset",
                    amplitude=min(rms, 1.0),
                )
            )
        prev = rms
    return tuple(out)


@dataclass
class MockBehavior:
    variant: str  # "gain" | "transpose" | "onsets"
    artificial_delay: float = 0.0

    def __post_init__(self):
        if self.variant not in CARDS:
            raise ValueError(f"unknown behavior {self.variant!r}")
        if self.artificial_delay < 0:
            raise ValueError("delay must be >= 0")


@dataclass
class _Job:
    media: bytes
    values: dict
    state: str = "queued"
    progress: float = 0.0
    message: str = ""
    out_media: Optional[bytes] = None
    out_labels: list = field(default_factory=list)


class _MockState:
    def __init__(self, behavior: MockBehavior):
        self.behavior = behavior
        self.card = CARDS[behavior.variant]
        self.jobs: dict[str, _Job] = {}
        self.lock = threading.Lock()
        self.queue: queue.Queue[str] = queue.Queue()
        worker = threading.Thread(target=self._worker, daemon=True)
        worker.start()

    def submit(self, media: bytes, values: dict) -> str:
        job_id = uuid.uuid4().hex
        with self.lock:
            self.jobs[job_id] = _Job(media=media, values=values)
        self.queue.put(job_id)
        return job_id

    def _worker(self) -> None:
        while True:
            job_id = self.queue.get()
            with self.lock:
                job = self.jobs[job_id]
                if job.state == "cancelled":
                    continue
                job.state = "running"
                job.progress = 0.5
            if self.behavior.artificial_delay:
                time.sleep(self.behavior.artificial_delay)
                with self.lock:
                    if job.state == "cancelled":
                        continue
            try:
                out_media, out_labels = self._run(job.media, job.values)
                with self.lock:
                    if job.state == "cancelled":
                        continue
                    job.out_media = out_media
                    job.out_labels = out_labels
                    job.state = "complete"
                    job.progress = 1.0
            except Exception as e:  # job errors must not kill the worker
                with self.lock:
                    if job.state != "cancelled":
                        job.state = "error"
                        job.message = str(e)

    def _run(self, media: bytes, values: dict):
        variant = self.behavior.variant
        if variant == "gain":
            out = behavior_gain(wav_mod.decode_wav(media), values["gain"])
            return wav_mod.encode_wav(out, "f32"), []
        if variant == "transpose":
            out = behavior_transpose(midi_mod.parse_midi(media), int(values["semitones"]))
            return midi_mod.serialize_midi(out), []
        found = behavior_onsets(wav_mod.decode_wav(media), values["threshold"])
        return None, labels_mod.serialize_labels(found)


def _make_handler(state: _MockState):
    media_content_type = "audio/wav" if state.card.media_in == "audio" else "audio/midi"

    class Handler(JsonRequestHandler):
        def do_GET(self):
            if self.path == "/harp/card":
                self.reply_bytes(
                    200, protocol.serialize_model_card(state.card).encode(), "application/json"
                )
                return
            if self.path.startswith("/harp/jobs/"):
                rest = self.path[len("/harp/jobs/") :]
                if rest.endswith("/result"):
                    self._result(rest[: -len("/result")])
                    return
                if rest.endswith("/media"):
                    self._media(rest[: -len("/media")])
                    return
                self._status(rest)
                return
            self.reply_json(404, {"error": {"code": "not_found", "message": self.path}})

        def do_POST(self):
            body = self.read_body()
            if self.path == "/harp/process":
                self._process(body)
                return
            if self.path.startswith("/harp/jobs/") and self.path.endswith("/cancel"):
                self._cancel(self.path[len("/harp/jobs/") : -len("/cancel")])
                return
            self.reply_json(404, {"error": {"code": "not_found", "message": self.path}})

        def _process(self, body: bytes):
            try:
                parts = parse_multipart(self.headers.get("Content-Type", ""), body)
                media = parts["media"][1]
                values = json.loads(parts["controls"][1])
                values = protocol.validate_control_values(state.card, values)
            except Exception as e:
                self.reply_json(400, {"error": {"code": "bad_request", "message": str(e)}})
                return
            job_id = state.submit(media, values)
            self.reply_json(202, {"job_id": job_id})

        def _lookup(self, job_id: str) -> Optional[_Job]:
            with state.lock:
                return state.jobs.get(job_id)

        def _status(self, job_id: str):
            job = self._lookup(job_id)
            if job is None:
                self.reply_json(404, {"error": {"code": "unknown_job", "message": job_id}})
                return
            with state.lock:
                self.reply_json(
                    200, {"state": job.state, "progress": job.progress, "message": job.message}
                )

        def _result(self, job_id: str):
            job = self._lookup(job_id)
            if job is None:
                self.reply_json(404, {"error": {"code": "unknown_job", "message": job_id}})
                return
            with state.lock:
                if job.state != "complete":
                    self.reply_json(
                        409, {"error": {"code": "not_complete", "message": job.state}}
                    )
                    return
                has_media = job.out_media is not None
                self.reply_json(
                    200,
                    {
                        "media_route": f"/harp/jobs/{job_id}/media" if has_media else None,
                        "media_kind": state.card.output_media_kind() if has_media else None,
                        "labels": job.out_labels,
                    },
                )

        def _media(self, job_id: str):
            job = self._lookup(job_id)
            if job is None or job.out_media is None:
                self.reply_json(404, {"error": {"code": "unknown_job", "message": job_id}})
                return
            self.reply_bytes(200, job.out_media, media_content_type)

        def _cancel(self, job_id: str):
            job = self._lookup(job_id)
            if job is None:
                self.reply_json(404, {"error": {"code": "unknown_job", "message": job_id}})
                return
            with state.lock:
                if job.state in ("queued", "running"):
                    job.state = "cancelled"
                    job.message = "cancelled by client"
                self.reply_json(
                    200, {"state": job.state, "progress": job.progress, "message": job.message}
                )

    return Handler


def run_mock_endpoint(behavior: MockBehavior, port: int = 0, host: str = "127.0.0.1") -> ServerHandle:
    state = _MockState(behavior)
    server = ThreadingHTTPServer((host, port), _make_handler(state))
    return ServerHandle(server)
