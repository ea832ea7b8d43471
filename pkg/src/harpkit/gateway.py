"""Local HTTP gateway wrapping one Session for the companion UI.

Binds loopback by default. All session mutations funnel through one lock
(single writer); progress reads come from a snapshot guarded by the same
lock. At most one processing job is active at a time.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from http.server import ThreadingHTTPServer
from pathlib import Path
from typing import Optional
from urllib.parse import parse_qs, urlparse

from . import display, labels as labels_mod, midi as midi_mod, preview, protocol, session as session_mod, wav as wav_mod
from .errors import ErrorCode, HarpError
from .httpserver import JsonRequestHandler, ServerHandle, parse_multipart

DEFAULT_PORT = 8787


@dataclass(frozen=True)
class RegistryEntry:
    name: str
    url: str


def parse_registry(text: str) -> list[RegistryEntry]:
    """One ``name = url`` per line; blank lines and ``#`` comments allowed."""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, url = line.partition("=")
        if not sep or not name.strip() or not url.strip():
            raise ValueError(f"registry line {lineno}: expected 'name = url', got {raw!r}")
        entries.append(RegistryEntry(name=name.strip(), url=url.strip()))
    return entries


def load_registry(path: Optional[str]) -> list[RegistryEntry]:
    if not path or not os.path.exists(path):
        return []
    return parse_registry(Path(path).read_text())


class GatewayState:
    def __init__(self, registry: list[RegistryEntry], ui_asset_dir: Optional[str] = None):
        self.session = session_mod.Session()
        self.registry = registry
        self.ui_asset_dir = ui_asset_dir
        self.lock = threading.Lock()
        self.active_handle: Optional[protocol.JobHandle] = None
        self.progress: Optional[protocol.JobStatus] = None
        self.worker: Optional[threading.Thread] = None

    # -- snapshots ------------------------------------------------------------

    def state_doc(self) -> dict:
        with self.lock:
            s = self.session
            doc = s.current
            duration = None
            if isinstance(doc.media, wav_mod.AudioBuffer):
                duration = doc.media.duration_s
            elif isinstance(doc.media, midi_mod.MidiSequence):
                duration = midi_mod.ticks_to_seconds(doc.media, doc.media.end_tick)
            endpoint = None
            if s.endpoint is not None and s.card is not None:
                endpoint = {
                    "url": s.endpoint.base_url,
                    "card": json.loads(protocol.serialize_model_card(s.card)),
                }
            return {
                "media_kind": doc.media_kind,
                "source_name": doc.source_name,
                "duration_s": duration,
                "can_undo": bool(s.undo_stack),
                "can_redo": bool(s.redo_stack),
                "endpoint": endpoint,
                "registry": [{"name": e.name, "url": e.url} for e in self.registry],
                "status": s.status_line,
                "info": s.info_line,
                "labels": labels_mod.serialize_labels(doc.labels),
            }

    def progress_doc(self) -> dict:
        with self.lock:
            if self.progress is None:
                return {"state": "idle", "progress": 0.0, "message": ""}
            p = self.progress
            return {"state": p.state, "progress": p.progress, "message": p.message}

    # -- processing -----------------------------------------------------------

    def start_process(self, given: dict) -> tuple[int, dict]:
        with self.lock:
            if self.worker is not None and self.worker.is_alive():
                return 409, {"code": "busy", "message": "a job is already running"}
            s = self.session
            if s.current.media is None:
                return 409, {"code": ErrorCode.E120_MediaTypeMismatch.value,
                             "message": "no media loaded"}
            if s.endpoint is None or s.card is None:
                return 409, {"code": ErrorCode.E120_MediaTypeMismatch.value,
                             "message": "no endpoint selected"}
            try:
                values = protocol.validate_control_values(s.card, given)
            except HarpError as e:
                return 422, {"code": e.code.value, "message": e.user_message}
            if s.current.media_kind != s.card.media_in:
                return 409, {"code": ErrorCode.E120_MediaTypeMismatch.value,
                             "message": f"endpoint expects {s.card.media_in} input"}
            media_bytes = session_mod.encode_media(s.current.media)
            endpoint, card, kind = s.endpoint, s.card, s.current.media_kind
            self.progress = protocol.JobStatus(state="queued", progress=0.0)
            self.worker = threading.Thread(
                target=self._run_job, args=(endpoint, card, media_bytes, kind, values),
                daemon=True,
            )
            self.worker.start()
        return 202, {"ok": True}

    def _run_job(self, endpoint, card, media_bytes, kind, values):
        def on_progress(status: protocol.JobStatus):
            with self.lock:
                self.progress = status
                self.session.status_line = f"{status.state} ({status.progress:.0%})"

        try:
            handle = protocol.submit_job(endpoint, card, media_bytes, kind, values)
            with self.lock:
                self.active_handle = handle
            result = self._poll_to_result(handle, on_progress)
            with self.lock:
                self.session.apply_result(result, source_name=card.name)
        except HarpError as e:
            with self.lock:
                self.session.report_error(e)
                self.progress = protocol.JobStatus(state="error", progress=0.0,
                                                   message=f"{e.code.value}: {e.user_message}")
        finally:
            with self.lock:
                self.active_handle = None

    def _poll_to_result(self, handle, on_progress) -> protocol.ProcessResult:
        import time

        interval = protocol.POLL_INITIAL_S
        last = None
        while True:
            status = protocol.poll_status(handle)
            if status != last:
                on_progress(status)
            last = status
            if status.terminal:
                break
            time.sleep(interval)
            interval = min(interval * protocol.POLL_BACKOFF, protocol.POLL_CAP_S)
        if status.state == "cancelled":
            raise HarpError(ErrorCode.E142_Cancelled, "The job was cancelled.",
                            f"job {handle.job_id}")
        if status.state == "error":
            raise HarpError(ErrorCode.E140_RemoteJobError,
                            f"The endpoint failed: {status.message}",
                            f"job {handle.job_id}: {status.message}")
        return protocol.fetch_result(handle)

    def cancel(self) -> None:
        with self.lock:
            handle = self.active_handle
        if handle is not None:
            try:
                protocol.cancel_job(handle)
            except HarpError:
                pass


STATIC_TYPES = {
    ".html": "text/html", ".js": "text/javascript", ".css": "text/css",
    ".map": "application/json", ".svg": "image/svg+xml", ".png": "image/png",
    ".ico": "image/x-icon",
}


def _make_handler(state: GatewayState):
    class Handler(JsonRequestHandler):
        def do_GET(self):
            parsed = urlparse(self.path)
            route = parsed.path
            if route == "/api/state":
                self.reply_json(200, state.state_doc())
            elif route == "/api/progress":
                self.reply_json(200, state.progress_doc())
            elif route == "/api/media":
                self._media()
            elif route == "/api/waveform":
                self._waveform(parse_qs(parsed.query))
            elif route == "/api/notes":
                self._notes()
            elif route == "/api/preview":
                self._preview()
            elif not route.startswith("/api/"):
                self._static(route)
            else:
                self.reply_json(404, {"code": "not_found", "message": route})

        def do_POST(self):
            body = self.read_body()
            route = urlparse(self.path).path
            if route == "/api/load":
                self._load(body)
            elif route == "/api/endpoint":
                self._endpoint(body)
            elif route == "/api/process":
                status, doc = state.start_process(self._json_controls(body))
                self.reply_json(status, doc)
            elif route == "/api/cancel":
                state.cancel()
                self.reply_json(200, state.state_doc())
            elif route == "/api/undo":
                with state.lock:
                    state.session.undo()
                self.reply_json(200, state.state_doc())
            elif route == "/api/redo":
                with state.lock:
                    state.session.redo()
                self.reply_json(200, state.state_doc())
            else:
                self.reply_json(404, {"code": "not_found", "message": route})

        # -- helpers ----------------------------------------------------------

        def _json_controls(self, body: bytes) -> dict:
            try:
                doc = json.loads(body or b"{}")
                controls = doc.get("controls", {})
                return controls if isinstance(controls, dict) else {}
            except json.JSONDecodeError:
                return {}

        def _load(self, body: bytes):
            try:
                parts = parse_multipart(self.headers.get("Content-Type", ""), body)
                filename, data = parts["file"]
            except (ValueError, KeyError) as e:
                self.reply_json(422, {"code": "bad_request", "message": str(e)})
                return
            try:
                with state.lock:
                    state.session.load_media(data, filename or "")
            except HarpError as e:
                with state.lock:
                    state.session.report_error(e)
                self.reply_json(422, {"code": e.code.value, "message": e.user_message})
                return
            self.reply_json(200, state.state_doc())

        def _endpoint(self, body: bytes):
            try:
                url = json.loads(body).get("url", "")
                address = protocol.EndpointAddress.parse(url)
                with state.lock:
                    card = state.session.set_endpoint(address)
            except HarpError as e:
                with state.lock:
                    state.session.report_error(e)
                self.reply_json(502 if e.code.value.startswith("E10") else 422,
                                {"code": e.code.value, "message": e.user_message})
                return
            except (json.JSONDecodeError, AttributeError) as e:
                self.reply_json(422, {"code": "bad_request", "message": str(e)})
                return
            self.reply_json(200, json.loads(protocol.serialize_model_card(card)))

        def _media(self):
            with state.lock:
                doc = state.session.current
                if doc.media is None:
                    self.reply_json(404, {"code": "no_media", "message": "nothing loaded"})
                    return
                payload = session_mod.encode_media(doc.media)
                kind = doc.media_kind
            self.reply_bytes(200, payload, "audio/wav" if kind == "audio" else "audio/midi")

        def _waveform(self, query: dict):
            bins = int(query.get("bins", ["1000"])[0])
            with state.lock:
                doc = state.session.current
                if not isinstance(doc.media, wav_mod.AudioBuffer):
                    self.reply_json(409, {"code": "wrong_media", "message": "audio only"})
                    return
                wf = display.waveform_minmax(doc.media, max(bins, 1))
                self.reply_json(200, {
                    "bins": [[lo, hi] for lo, hi in wf.bins],
                    "sample_rate": doc.media.sample_rate,
                    "duration_s": doc.media.duration_s,
                })

        def _notes(self):
            with state.lock:
                doc = state.session.current
                if not isinstance(doc.media, midi_mod.MidiSequence):
                    self.reply_json(409, {"code": "wrong_media", "message": "MIDI only"})
                    return
                self.reply_json(200, {"notes": midi_mod.extract_notes(doc.media)})

        def _preview(self):
            with state.lock:
                doc = state.session.current
                if not isinstance(doc.media, midi_mod.MidiSequence):
                    self.reply_json(409, {"code": "wrong_media", "message": "MIDI only"})
                    return
                rendered = preview.render_midi_preview(doc.media, 44100)
            self.reply_bytes(200, wav_mod.encode_wav(rendered, "16"), "audio/wav")

        def _static(self, route: str):
            if state.ui_asset_dir is None:
                self.reply_json(404, {"code": "no_ui", "message": "no UI assets configured"})
                return
            rel = route.lstrip("/") or "index.html"
            base = Path(state.ui_asset_dir).resolve()
            target = (base / rel).resolve()
            if not str(target).startswith(str(base)) or not target.is_file():
                self.reply_json(404, {"code": "not_found", "message": route})
                return
            ctype = STATIC_TYPES.get(target.suffix, "application/octet-stream")
            self.reply_bytes(200, target.read_bytes(), ctype)

    return Handler


def serve_gateway(
    port: int = DEFAULT_PORT,
    registry_path: Optional[str] = None,
    ui_asset_dir: Optional[str] = None,
    host: str = "127.0.0.1",
) -> ServerHandle:
    registry = load_registry(registry_path)
    state = GatewayState(registry, ui_asset_dir)
    server = ThreadingHTTPServer((host, port), _make_handler(state))
    handle = ServerHandle(server)
    handle.state = state
    return handle
