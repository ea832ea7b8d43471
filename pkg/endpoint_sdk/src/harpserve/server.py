"""HTTP server implementing the HARP endpoint protocol around a process_fn.

process_fn signature: (media_path: str, controls: dict) ->
    (output_media_path | None, list[OutputLabel])

Jobs run one at a time on a single worker (FIFO); status reads are safe
while a job is in flight. A raising process_fn marks the job errored with
the exception text in the status message.
"""

from __future__ import annotations

import json
import queue
import tempfile
import threading
import uuid
from dataclasses import dataclass, field
from email.parser import BytesParser
from email.policy import HTTP as HTTP_POLICY
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Callable, Optional

from .card import CardBuilder, OutputLabel


def _parse_multipart(content_type: str, body: bytes) -> dict:
    if not content_type.lower().startswith("multipart/form-data"):
        raise ValueError("expected multipart/form-data")
    msg = BytesParser(policy=HTTP_POLICY).parsebytes(
        b"Content-Type: " + content_type.encode("latin-1") + b"\r\n\r\n" + body
    )
    parts = {}
    for part in msg.iter_parts():
        name = part.get_param("name", header="content-disposition")
        if name:
            parts[name] = (part.get_filename(), part.get_payload(decode=True) or b"")
    return parts


def validate_values(card: CardBuilder, given: dict) -> dict:
    """Server-side twin of the client's control validation rules."""
    known = {c["label"]: c for c in card.controls}
    for label in given:
        if label not in known:
            raise ValueError(f"unknown control {label!r}")
    out = {}
    for spec in card.controls:
        label = spec["label"]
        if label not in given:
            out[label] = spec["default"]
            continue
        value = given[label]
        kind = spec["type"]
        is_num = isinstance(value, (int, float)) and not isinstance(value, bool)
        if kind == "slider":
            if not is_num or not spec["min"] <= value <= spec["max"]:
                raise ValueError(f"{label}: out of range [{spec['min']}, {spec['max']}]")
            out[label] = float(value)
        elif kind == "number":
            if not is_num:
                raise ValueError(f"{label}: expected a number")
            out[label] = float(value)
        elif kind == "text":
            if not isinstance(value, str):
                raise ValueError(f"{label}: expected text")
            out[label] = value
        elif kind == "dropdown":
            if value not in spec["options"]:
                raise ValueError(f"{label}: must be one of {spec['options']}")
            out[label] = value
        else:
            if not isinstance(value, bool):
                raise ValueError(f"{label}: expected true or false")
            out[label] = value
    return out


@dataclass
class _Job:
    media: bytes
    filename: str
    values: dict
    state: str = "queued"
    progress: float = 0.0
    message: str = ""
    out_media: Optional[bytes] = None
    out_labels: list = field(default_factory=list)


class _EndpointState:
    def __init__(self, card: CardBuilder, process_fn: Callable):
        self.card = card
        self.process_fn = process_fn
        self.jobs: dict[str, _Job] = {}
        self.lock = threading.Lock()
        self.queue: queue.Queue[str] = queue.Queue()
        threading.Thread(target=self._worker, daemon=True).start()

    def submit(self, media: bytes, filename: str, values: dict) -> str:
        job_id = uuid.uuid4().hex
        with self.lock:
            self.jobs[job_id] = _Job(media=media, filename=filename, values=values)
        self.queue.put(job_id)
        return job_id

    def _worker(self):
        while True:
            job_id = self.queue.get()
            with self.lock:
                job = self.jobs[job_id]
                if job.state == "cancelled":
                    continue
                job.state = "running"
                job.progress = 0.5
            try:
                suffix = Path(job.filename or "media.bin").suffix or ".bin"
                with tempfile.TemporaryDirectory() as tmp:
                    media_path = str(Path(tmp) / f"input{suffix}")
                    Path(media_path).write_bytes(job.media)
                    out_path, labels = self.process_fn(media_path, dict(job.values))
                    out_media = Path(out_path).read_bytes() if out_path else None
                with self.lock:
                    if job.state == "cancelled":
                        continue
                    job.out_media = out_media
                    job.out_labels = [
                        lb.to_wire() if isinstance(lb, OutputLabel) else dict(lb)
                        for lb in labels
                    ]
                    job.state = "complete"
                    job.progress = 1.0
            except Exception as e:
                with self.lock:
                    if job.state != "cancelled":
                        job.state = "error"
                        job.message = str(e)


def _make_handler(state: _EndpointState):
    out_kind = state.card.media_out.split("+")[0]
    media_type = "audio/wav" if out_kind == "audio" else "audio/midi"

    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, *args):
            pass

        def _json(self, status: int, doc):
            payload = json.dumps(doc).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)

        def _job(self, job_id: str) -> Optional[_Job]:
            with state.lock:
                return state.jobs.get(job_id)

        def do_GET(self):
            if self.path == "/harp/card":
                self._json(200, state.card.to_wire())
                return
            if self.path.startswith("/harp/jobs/"):
                rest = self.path[len("/harp/jobs/") :]
                if rest.endswith("/result"):
                    job_id = rest[: -len("/result")]
                    job = self._job(job_id)
                    if job is None:
                        self._json(404, {"error": {"code": "unknown_job", "message": job_id}})
                        return
                    with state.lock:
                        if job.state != "complete":
                            self._json(409, {"error": {"code": "not_complete",
                                                       "message": job.state}})
                            return
                        has_media = job.out_media is not None
                        self._json(200, {
                            "media_route": f"/harp/jobs/{job_id}/media" if has_media else None,
                            "media_kind": out_kind if has_media and out_kind != "labels" else None,
                            "labels": job.out_labels,
                        })
                    return
                if rest.endswith("/media"):
                    job = self._job(rest[: -len("/media")])
                    if job is None or job.out_media is None:
                        self._json(404, {"error": {"code": "unknown_job", "message": rest}})
                        return
                    self.send_response(200)
                    self.send_header("Content-Type", media_type)
                    self.send_header("Content-Length", str(len(job.out_media)))
                    self.end_headers()
                    self.wfile.write(job.out_media)
                    return
                job = self._job(rest)
                if job is None:
                    self._json(404, {"error": {"code": "unknown_job", "message": rest}})
                    return
                with state.lock:
                    self._json(200, {"state": job.state, "progress": job.progress,
                                     "message": job.message})
                return
            self._json(404, {"error": {"code": "not_found", "message": self.path}})

        def do_POST(self):
            length = int(self.headers.get("Content-Length", "0") or "0")
            body = self.rfile.read(length) if length else b""
            if self.path == "/harp/process":
                try:
                    parts = _parse_multipart(self.headers.get("Content-Type", ""), body)
                    filename, media = parts["media"]
                    values = validate_values(state.card, json.loads(parts["controls"][1]))
                except Exception as e:
                    self._json(400, {"error": {"code": "bad_request", "message": str(e)}})
                    return
                self._json(202, {"job_id": state.submit(media, filename or "", values)})
                return
            if self.path.startswith("/harp/jobs/") and self.path.endswith("/cancel"):
                job = self._job(self.path[len("/harp/jobs/") : -len("/cancel")])
                if job is None:
                    self._json(404, {"error": {"code": "unknown_job", "message": self.path}})
                    return
                with state.lock:
                    if job.state in ("queued", "running"):
                        job.state = "cancelled"
                        job.message = "cancelled by client"
                    self._json(200, {"state": job.state, "progress": job.progress,
                                     "message": job.message})
                return
            self._json(404, {"error": {"code": "not_found", "message": self.path}})

    return Handler


class EndpointHandle:
    def __init__(self, server: ThreadingHTTPServer):
        self.server = server
        self.thread = threading.Thread(target=server.serve_forever, daemon=True)
        self.thread.start()

    @property
    def port(self) -> int:
        return self.server.server_address[1]

    @property
    def url(self) -> str:
        return f"http://127.0.0.1:{self.port}"

    def close(self):
        self.server.shutdown()
        self.server.server_close()
        self.thread.join(timeout=5)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def serve_forever(self):
        self.thread.join()


def serve_endpoint(card: CardBuilder, process_fn: Callable, port: int = 0,
                   host: str = "127.0.0.1") -> EndpointHandle:
    labels = [c["label"] for c in card.controls]
    if len(labels) != len(set(labels)):
        raise ValueError("card has duplicate control labels")
    state = _EndpointState(card, process_fn)
    server = ThreadingHTTPServer((host, port), _make_handler(state))
    return EndpointHandle(server)
