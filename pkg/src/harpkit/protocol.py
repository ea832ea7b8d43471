"""Client for the HARP endpoint wire protocol (v2).

Routes, relative to the endpoint base URL:

    GET  /harp/card              model card document
    POST /harp/process           multipart: media file + controls JSON -> 202 {job_id}
    GET  /harp/jobs/{id}         status document
    GET  /harp/jobs/{id}/result  result document (409 until complete)
    GET  /harp/jobs/{id}/media   raw media bytes
    POST /harp/jobs/{id}/cancel  cancel; no-op on terminal jobs

All operations are blocking. Status polling starts at 250 ms and backs off
by 1.5x, capped at 2 s.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Callable, Optional, Union
from urllib.parse import urlparse

import requests

from . import labels as labels_mod
from . import midi as midi_mod
from . import wav as wav_mod
from .errors import ErrorCode, HarpError

SCHEMA_VERSION = 2
CARD_TIMEOUT_S = 30.0
PROCESS_BUDGET_S = 600.0
POLL_INITIAL_S = 0.25
POLL_BACKOFF = 1.5
POLL_CAP_S = 2.0
MAX_UPLOAD_BYTES = 256 * 1024 * 1024

TERMINAL_STATES = frozenset({"complete", "error", "cancelled"})
JOB_STATES = frozenset({"queued", "running"}) | TERMINAL_STATES


@dataclass(frozen=True)
class EndpointAddress:
    base_url: str

    @classmethod
    def parse(cls, url: str) -> "EndpointAddress":
        normalized = url.strip().rstrip("/")
        parsed = urlparse(normalized)
        if parsed.scheme not in ("http", "https") or not parsed.netloc:
            raise HarpError(
                ErrorCode.E100_ConnectionFailed,
                "That endpoint address is not a valid http(s) URL.",
                f"base_url={url!r}",
            )
        return cls(base_url=normalized)

    def route(self, path: str) -> str:
        return self.base_url + path


# --- control specs -----------------------------------------------------------

@dataclass(frozen=True)
class Slider:
    label: str
    min: float
    max: float
    step: float
    default: float

    type = "slider"

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("slider step must be positive")
        if not self.min < self.max:
            raise ValueError("slider requires min < max")
        if not self.min <= self.default <= self.max:
            raise ValueError("slider default outside [min, max]")


@dataclass(frozen=True)
class NumberBox:
    label: str
    default: float

    type = "number"


@dataclass(frozen=True)
class TextBox:
    label: str
    default: str

    type = "text"


@dataclass(frozen=True)
class Dropdown:
    label: str
    options: tuple[str, ...]
    default: str

    type = "dropdown"

    def __post_init__(self):
        if not self.options:
            raise ValueError("dropdown requires at least one option")
        if self.default not in self.options:
            raise ValueError("dropdown default not among options")


@dataclass(frozen=True)
class Toggle:
    label: str
    default: bool

    type = "toggle"


ControlSpec = Union[Slider, NumberBox, TextBox, Dropdown, Toggle]
ControlValues = dict[str, Union[float, int, str, bool]]

MEDIA_KINDS = ("audio", "midi")
OUTPUT_KINDS = ("audio", "midi", "labels", "audio+labels", "midi+labels")


@dataclass(frozen=True)
class ModelCard:
    name: str
    description: str
    author: str
    tags: tuple[str, ...]
    media_in: str
    media_out: str
    controls: tuple[ControlSpec, ...]
    schema_version: int = SCHEMA_VERSION

    def output_media_kind(self) -> Optional[str]:
        base = self.media_out.split("+")[0]
        return base if base in MEDIA_KINDS else None


def _card_err(detail: str) -> HarpError:
    return HarpError(
        ErrorCode.E110_InvalidCard, "The endpoint sent an invalid model card.", detail
    )


def _parse_control(obj: dict, index: int) -> ControlSpec:
    if not isinstance(obj, dict):
        raise _card_err(f"controls[{index}] is not an object")
    ctype = obj.get("type")
    label = obj.get("label")
    if not isinstance(label, str) or not label:
        raise _card_err(f"controls[{index}].label missing or empty")
    try:
        if ctype == "slider":
            return Slider(
                label=label,
                min=float(obj["min"]),
                max=float(obj["max"]),
                step=float(obj["step"]),
                default=float(obj["default"]),
            )
        if ctype == "number":
            return NumberBox(label=label, default=float(obj["default"]))
        if ctype == "text":
            return TextBox(label=label, default=str(obj["default"]))
        if ctype == "dropdown":
            options = obj["options"]
            if not isinstance(options, list) or not all(isinstance(o, str) for o in options):
                raise _card_err(f"controls[{index}].options must be a list of strings")
            return Dropdown(label=label, options=tuple(options), default=obj["default"])
        if ctype == "toggle":
            default = obj["default"]
            if not isinstance(default, bool):
                raise _card_err(f"controls[{index}].default must be a bool")
            return Toggle(label=label, default=default)
    except HarpError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise _card_err(f"controls[{index}] ({label!r}): {e}") from None
    raise _card_err(f"controls[{index}] has unknown type {ctype!r}")


def parse_model_card(text: Union[str, bytes]) -> ModelCard:
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise _card_err(f"card document is not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise _card_err("card document is not an object")

    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise HarpError(
            ErrorCode.E111_UnsupportedSchemaVersion,
            "This endpoint speaks a protocol version this client does not support.",
            f"schema_version={version!r}, expected {SCHEMA_VERSION}",
        )

    meta = doc.get("card")
    if not isinstance(meta, dict):
        raise _card_err("missing 'card' object")
    name = meta.get("name")
    if not isinstance(name, str) or not name:
        raise _card_err("card.name missing or empty")
    tags = meta.get("tags", [])
    if not isinstance(tags, list) or not all(isinstance(t, str) for t in tags):
        raise _card_err("card.tags must be a list of strings")

    media_in = doc.get("media_in")
    if media_in not in MEDIA_KINDS:
        raise _card_err(f"media_in={media_in!r} not one of {MEDIA_KINDS}")
    media_out = doc.get("media_out")
    if media_out not in OUTPUT_KINDS:
        raise _card_err(f"media_out={media_out!r} not one of {OUTPUT_KINDS}")

    raw_controls = doc.get("controls", [])
    if not isinstance(raw_controls, list):
        raise _card_err("controls must be an array")
    controls = tuple(_parse_control(c, i) for i, c in enumerate(raw_controls))
    seen = set()
    for c in controls:
        if c.label in seen:
            raise _card_err(f"duplicate control label {c.label!r}")
        seen.add(c.label)

    return ModelCard(
        name=name,
        description=str(meta.get("description", "")),
        author=str(meta.get("author", "")),
        tags=tuple(tags),
        media_in=media_in,
        media_out=media_out,
        controls=controls,
    )


def _control_to_wire(c: ControlSpec) -> dict:
    if isinstance(c, Slider):
        return {"type": "slider", "label": c.label, "min": c.min, "max": c.max,
                "step": c.step, "default": c.default}
    if isinstance(c, NumberBox):
        return {"type": "number", "label": c.label, "default": c.default}
    if isinstance(c, TextBox):
        return {"type": "text", "label": c.label, "default": c.default}
    if isinstance(c, Dropdown):
        return {"type": "dropdown", "label": c.label, "options": list(c.options),
                "default": c.default}
    return {"type": "toggle", "label": c.label, "default": c.default}


def serialize_model_card(card: ModelCard) -> str:
    return json.dumps(
        {
            "schema_version": card.schema_version,
            "card": {
                "name": card.name,
                "description": card.description,
                "author": card.author,
                "tags": list(card.tags),
            },
            "media_in": card.media_in,
            "media_out": card.media_out,
            "controls": [_control_to_wire(c) for c in card.controls],
        }
    )


def _validation_err(label: str, reason: str) -> HarpError:
    return HarpError(
        ErrorCode.E130_ControlValidation,
        f"Control '{label}': {reason}",
        f"control {label!r}: {reason}",
    )


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def validate_control_values(card: ModelCard, given: ControlValues) -> ControlValues:
    """Fill defaults, type- and range-check, reject unknown labels. Idempotent."""
    known = {c.label for c in card.controls}
    for label in given:
        if label not in known:
            raise _validation_err(label, "unknown control")
    out: ControlValues = {}
    for spec in card.controls:
        if spec.label not in given:
            out[spec.label] = spec.default
            continue
        value = given[spec.label]
        if isinstance(spec, Slider):
            if not _is_number(value):
                raise _validation_err(spec.label, "expected a number")
            if not spec.min <= value <= spec.max:
                raise _validation_err(spec.label, f"out of range [{spec.min:g}, {spec.max:g}]")
            out[spec.label] = float(value)
        elif isinstance(spec, NumberBox):
            if not _is_number(value):
                raise _validation_err(spec.label, "expected a number")
            out[spec.label] = float(value)
        elif isinstance(spec, TextBox):
            if not isinstance(value, str):
                raise _validation_err(spec.label, "expected text")
            out[spec.label] = value
        elif isinstance(spec, Dropdown):
            if not isinstance(value, str) or value not in spec.options:
                raise _validation_err(spec.label, f"must be one of {list(spec.options)}")
            out[spec.label] = value
        else:  # Toggle
            if not isinstance(value, bool):
                raise _validation_err(spec.label, "expected true or false")
            out[spec.label] = value
    return out


# --- jobs --------------------------------------------------------------------

@dataclass(frozen=True)
class JobHandle:
    endpoint: EndpointAddress
    job_id: str

    def __post_init__(self):
        if not self.job_id:
            raise ValueError("job_id must be non-empty")


@dataclass(frozen=True)
class JobStatus:
    state: str
    progress: float
    message: str = ""

    def __post_init__(self):
        if self.state not in JOB_STATES:
            raise ValueError(f"unknown job state {self.state!r}")

    @property
    def terminal(self) -> bool:
        return self.state in TERMINAL_STATES


@dataclass(frozen=True)
class ProcessResult:
    media_kind: Optional[str]
    media_bytes: Optional[bytes]
    labels: labels_mod.LabelSet = ()


def _wrap_transport(exc: requests.RequestException, what: str) -> HarpError:
    if isinstance(exc, requests.Timeout):
        return HarpError(ErrorCode.E101_Timeout, "The endpoint took too long to respond.", what)
    return HarpError(ErrorCode.E100_ConnectionFailed, "Could not reach the endpoint.", f"{what}: {exc}")


def _status_from_doc(doc: dict) -> JobStatus:
    try:
        return JobStatus(
            state=doc["state"],
            progress=float(doc.get("progress", 0.0)),
            message=str(doc.get("message", "")),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise HarpError(
            ErrorCode.E140_RemoteJobError,
            "The endpoint sent a malformed status update.",
            f"status document: {e}",
        ) from None


def _remote_error(resp: requests.Response, route: str) -> HarpError:
    try:
        err = resp.json().get("error", {})
        message = err.get("message", "")
        code = err.get("code", "")
    except (ValueError, AttributeError):
        message, code = resp.text[:200], ""
    return HarpError(
        ErrorCode.E140_RemoteJobError,
        f"The endpoint reported an error: {message}" if message else "The endpoint reported an error.",
        f"{route} -> HTTP {resp.status_code} {code} {message}",
    )


def fetch_card(endpoint: EndpointAddress, timeout: float = CARD_TIMEOUT_S) -> ModelCard:
    route = endpoint.route("/harp/card")
    try:
        resp = requests.get(route, timeout=timeout)
    except requests.RequestException as e:
        raise _wrap_transport(e, route) from None
    if resp.status_code != 200:
        raise _card_err(f"{route} -> HTTP {resp.status_code}")
    return parse_model_card(resp.content)


def submit_job(
    endpoint: EndpointAddress,
    card: ModelCard,
    media_bytes: bytes,
    media_kind: str,
    values: ControlValues,
    timeout: float = CARD_TIMEOUT_S,
) -> JobHandle:
    if media_kind != card.media_in:
        raise HarpError(
            ErrorCode.E120_MediaTypeMismatch,
            f"This endpoint expects {card.media_in} input, not {media_kind}.",
            f"media_kind={media_kind}, card.media_in={card.media_in}",
        )
    if len(media_bytes) > MAX_UPLOAD_BYTES:
        raise HarpError(
            ErrorCode.E151_MediaEncode,
            "The media file is too large to upload (limit 256 MiB).",
            f"{len(media_bytes)} bytes > {MAX_UPLOAD_BYTES}",
        )
    route = endpoint.route("/harp/process")
    filename = "input.wav" if media_kind == "audio" else "input.mid"
    content_type = "audio/wav" if media_kind == "audio" else "audio/midi"
    try:
        resp = requests.post(
            route,
            files={"media": (filename, media_bytes, content_type)},
            data={"controls": json.dumps(values)},
            timeout=timeout,
        )
    except requests.RequestException as e:
        raise _wrap_transport(e, route) from None
    if resp.status_code != 202:
        raise _remote_error(resp, route)
    job_id = resp.json().get("job_id", "")
    if not job_id:
        raise HarpError(
            ErrorCode.E140_RemoteJobError,
            "The endpoint accepted the job but returned no job id.",
            f"{route}: empty job_id in 202 body",
        )
    return JobHandle(endpoint=endpoint, job_id=job_id)


def _job_not_found(handle: JobHandle, route: str) -> HarpError:
    return HarpError(
        ErrorCode.E141_JobNotFound,
        "The endpoint no longer knows about this job.",
        f"{route}: job_id={handle.job_id!r}",
    )


def poll_status(handle: JobHandle, timeout: float = CARD_TIMEOUT_S) -> JobStatus:
    route = handle.endpoint.route(f"/harp/jobs/{handle.job_id}")
    try:
        resp = requests.get(route, timeout=timeout)
    except requests.RequestException as e:
        raise _wrap_transport(e, route) from None
    if resp.status_code == 404:
        raise _job_not_found(handle, route)
    if resp.status_code != 200:
        raise _remote_error(resp, route)
    return _status_from_doc(resp.json())


def fetch_result(handle: JobHandle, timeout: float = CARD_TIMEOUT_S) -> ProcessResult:
    route = handle.endpoint.route(f"/harp/jobs/{handle.job_id}/result")
    try:
        resp = requests.get(route, timeout=timeout)
    except requests.RequestException as e:
        raise _wrap_transport(e, route) from None
    if resp.status_code == 404:
        raise _job_not_found(handle, route)
    if resp.status_code == 409:
        raise HarpError(
            ErrorCode.E140_RemoteJobError,
            "The job has not finished yet.",
            f"{route} -> HTTP 409 (job not complete)",
        )
    if resp.status_code != 200:
        raise _remote_error(resp, route)
    doc = resp.json()
    label_set = labels_mod.parse_labels(doc.get("labels", []))

    media_route = doc.get("media_route")
    media_kind = doc.get("media_kind")
    media_bytes = None
    if media_route:
        if media_kind not in MEDIA_KINDS:
            raise HarpError(
                ErrorCode.E140_RemoteJobError,
                "The endpoint returned a malformed result.",
                f"{route}: media_kind={media_kind!r}",
            )
        media_url = handle.endpoint.route(media_route)
        try:
            media_resp = requests.get(media_url, timeout=timeout)
        except requests.RequestException as e:
            raise _wrap_transport(e, media_url) from None
        if media_resp.status_code != 200:
            raise _remote_error(media_resp, media_url)
        media_bytes = media_resp.content
        _check_decodable(media_kind, media_bytes, media_url)
    return ProcessResult(media_kind=media_kind if media_bytes else None,
                         media_bytes=media_bytes, labels=label_set)


def _check_decodable(media_kind: str, data: bytes, route: str) -> None:
    try:
        if media_kind == "audio":
            wav_mod.decode_wav(data)
        else:
            midi_mod.parse_midi(data)
    except HarpError as e:
        raise HarpError(
            ErrorCode.E150_MediaDecode,
            "The endpoint returned media this client cannot decode.",
            f"{route}: {e.developer_message}",
        ) from None


def cancel_job(handle: JobHandle, timeout: float = CARD_TIMEOUT_S) -> JobStatus:
    route = handle.endpoint.route(f"/harp/jobs/{handle.job_id}/cancel")
    try:
        resp = requests.post(route, timeout=timeout)
    except requests.RequestException as e:
        raise _wrap_transport(e, route) from None
    if resp.status_code == 404:
        raise _job_not_found(handle, route)
    if resp.status_code != 200:
        raise _remote_error(resp, route)
    return _status_from_doc(resp.json())


def process(
    endpoint: EndpointAddress,
    media_bytes: bytes,
    media_kind: str,
    given: ControlValues,
    on_progress: Optional[Callable[[JobStatus], None]] = None,
    timeout: float = PROCESS_BUDGET_S,
    card: Optional[ModelCard] = None,
) -> ProcessResult:
    """Full loop: fetch card, validate, submit, poll to terminal, fetch result."""
    deadline = time.monotonic() + timeout

    def budget() -> float:
        remaining = deadline - time.monotonic()
        if remaining <= 0:
            raise HarpError(
                ErrorCode.E101_Timeout,
                "Processing took longer than the allowed time.",
                f"wall-clock budget {timeout:g}s exhausted",
            )
        return remaining

    if card is None:
        card = fetch_card(endpoint, timeout=min(CARD_TIMEOUT_S, budget()))
    values = validate_control_values(card, given)
    handle = submit_job(endpoint, card, media_bytes, media_kind, values,
                        timeout=min(CARD_TIMEOUT_S, budget()))

    interval = POLL_INITIAL_S
    last: Optional[JobStatus] = None
    while True:
        status = poll_status(handle, timeout=min(CARD_TIMEOUT_S, budget()))
        if on_progress is not None and status != last:
            on_progress(status)
        last = status
        if status.terminal:
            break
        time.sleep(min(interval, max(budget(), 0.0)))
        interval = min(interval * POLL_BACKOFF, POLL_CAP_S)

    if status.state == "cancelled":
        raise HarpError(ErrorCode.E142_Cancelled, "The job was cancelled.",
                        f"job {handle.job_id} cancelled")
    if status.state == "error":
        raise HarpError(
            ErrorCode.E140_RemoteJobError,
            f"The endpoint failed to process the media: {status.message}".rstrip(": "),
            f"job {handle.job_id} errored: {status.message}",
        )
    result = fetch_result(handle, timeout=min(CARD_TIMEOUT_S, budget()))
    if result.media_kind is not None and result.media_kind != card.output_media_kind():
        raise HarpError(
            ErrorCode.E140_RemoteJobError,
            "The endpoint returned a different media type than its card declares.",
            f"result media_kind={result.media_kind}, card.media_out={card.media_out}",
        )
    return result
