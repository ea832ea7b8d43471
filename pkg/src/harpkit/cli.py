"""``harp`` command-line interface.

Exit codes: 0 success, 2 usage error, 3 validation (E12x/E13x),
4 transport (E10x), 5 remote/media (E11x/E14x/E15x). Stdout carries only
requested payloads; progress and diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional

from . import gateway, midi as midi_mod, mock_endpoint, preview, protocol, wav as wav_mod
from .labels import serialize_labels
from .errors import ErrorCode, HarpError, exit_code_for


def _eprint(*args):
    print(*args, file=sys.stderr)


def _fetch(url: str) -> tuple[protocol.EndpointAddress, protocol.ModelCard]:
    address = protocol.EndpointAddress.parse(url)
    return address, protocol.fetch_card(address)


def _control_summary(spec: protocol.ControlSpec) -> str:
    if isinstance(spec, protocol.Slider):
        return f"slider [{spec.min:g}..{spec.max:g}] step {spec.step:g} default {spec.default:g}"
    if isinstance(spec, protocol.NumberBox):
        return f"number default {spec.default:g}"
    if isinstance(spec, protocol.TextBox):
        return f"text default {spec.default!r}"
    if isinstance(spec, protocol.Dropdown):
        return f"dropdown {list(spec.options)} default {spec.default!r}"
    return f"toggle default {str(spec.default).lower()}"


def cmd_info(args) -> int:
    _, card = _fetch(args.url)
    if args.json:
        print(protocol.serialize_model_card(card))
        return 0
    print(f"{card.name} — {card.description}")
    print(f"author: {card.author}")
    print(f"tags: {', '.join(card.tags) or '(none)'}")
    print(f"media: {card.media_in} -> {card.media_out}")
    print(f"controls: {len(card.controls)}")
    return 0


def cmd_controls(args) -> int:
    _, card = _fetch(args.url)
    if args.json:
        print(json.dumps([json.loads(protocol.serialize_model_card(card))["controls"]][0]))
        return 0
    for spec in card.controls:
        print(f"{spec.label}: {_control_summary(spec)}")
    return 0


def coerce_control_value(card: protocol.ModelCard, label: str, raw: str):
    """String -> typed value per the card's control spec."""
    spec = next((c for c in card.controls if c.label == label), None)
    if spec is None:
        raise HarpError(ErrorCode.E130_ControlValidation,
                        f"Control '{label}': unknown control", f"-c {label}")
    if isinstance(spec, (protocol.Slider, protocol.NumberBox)):
        try:
            return float(raw)
        except ValueError:
            raise HarpError(
                ErrorCode.E130_ControlValidation,
                f"Control '{label}': expected a number, got {raw!r}",
                f"-c {label}={raw}",
            ) from None
    if isinstance(spec, protocol.Toggle):
        if raw.lower() in ("true", "1", "yes", "on"):
            return True
        if raw.lower() in ("false", "0", "no", "off"):
            return False
        raise HarpError(
            ErrorCode.E130_ControlValidation,
            f"Control '{label}': expected true or false, got {raw!r}",
            f"-c {label}={raw}",
        )
    return raw  # TextBox / Dropdown take the string verbatim


def _parse_assignments(card: protocol.ModelCard, pairs: list[str]) -> protocol.ControlValues:
    values: protocol.ControlValues = {}
    for pair in pairs:
        label, sep, raw = pair.partition("=")
        if not sep:
            raise HarpError(ErrorCode.E130_ControlValidation,
                            f"Control assignment '{pair}' is not of the form label=value",
                            f"-c {pair}")
        values[label] = coerce_control_value(card, label, raw)
    return values


def _progress_printer(status: protocol.JobStatus) -> None:
    _eprint(f"{status.state} {status.progress * 100:.0f}% {status.message}".rstrip())


def _run_process(args, labels_only: bool) -> int:
    address, card = _fetch(args.url)
    values = _parse_assignments(card, args.control or [])
    media_bytes = Path(args.input).read_bytes()
    media_kind = "midi" if media_bytes[:4] == b"MThd" else "audio"
    result = protocol.process(
        address, media_bytes, media_kind, values,
        on_progress=_progress_printer,
        timeout=args.timeout,
        card=card,
    )
    if labels_only:
        Path(args.output).write_text(
            json.dumps({"labels": serialize_labels(result.labels)}, indent=2)
        )
        _eprint(f"wrote {len(result.labels)} labels to {args.output}")
        return 0
    if result.media_bytes is not None:
        Path(args.output).write_bytes(result.media_bytes)
        _eprint(f"wrote {args.output}")
    if args.labels_out:
        Path(args.labels_out).write_text(
            json.dumps({"labels": serialize_labels(result.labels)}, indent=2)
        )
        _eprint(f"wrote {len(result.labels)} labels to {args.labels_out}")
    return 0


def cmd_process(args) -> int:
    return _run_process(args, labels_only=False)


def cmd_labels(args) -> int:
    return _run_process(args, labels_only=True)


def cmd_serve(args) -> int:
    handle = gateway.serve_gateway(
        port=args.port, registry_path=args.registry, ui_asset_dir=args.ui
    )
    _eprint(f"gateway listening on {handle.url}")
    try:
        while True:
            time.sleep(1)
    except KeyboardInterrupt:
        handle.close()
    return 0


def cmd_mock(args) -> int:
    behavior = mock_endpoint.MockBehavior(
        variant=args.behavior, artificial_delay=args.delay_ms / 1000.0
    )
    handle = mock_endpoint.run_mock_endpoint(behavior, port=args.port)
    _eprint(f"mock '{args.behavior}' endpoint listening on {handle.url}")
    try:
        while True:
            time.sleep(1)
    except KeyboardInterrupt:
        handle.close()
    return 0


def cmd_preview(args) -> int:
    seq = midi_mod.parse_midi(Path(args.input).read_bytes())
    rendered = preview.render_midi_preview(seq, 44100)
    Path(args.output).write_bytes(wav_mod.encode_wav(rendered, "16"))
    _eprint(f"wrote {args.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="harp", description="HARP remote-processing toolkit")
    parser.add_argument("--verbose", action="store_true", help="show developer error details")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="print an endpoint's card summary")
    p.add_argument("url")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_info)

    p = sub.add_parser("controls", help="print an endpoint's control table")
    p.add_argument("url")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_controls)

    p = sub.add_parser("process", help="run media through an endpoint")
    p.add_argument("url")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("-c", "--control", action="append", metavar="LABEL=VALUE")
    p.add_argument("--labels-out", metavar="PATH")
    p.add_argument("--timeout", type=float, default=protocol.PROCESS_BUDGET_S)
    p.set_defaults(fn=cmd_process)

    p = sub.add_parser("labels", help="run a labels-only endpoint, write labels JSON")
    p.add_argument("url")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("-c", "--control", action="append", metavar="LABEL=VALUE")
    p.add_argument("--timeout", type=float, default=protocol.PROCESS_BUDGET_S)
    p.set_defaults(fn=cmd_labels)

    p = sub.add_parser("serve", help="run the local gateway")
    p.add_argument("--port", type=int, default=gateway.DEFAULT_PORT)
    p.add_argument("--registry", default=None)
    p.add_argument("--ui", default=None)
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("mock", help="run a mock endpoint")
    p.add_argument("--behavior", required=True, choices=["gain", "transpose", "onsets"])
    p.add_argument("--port", type=int, default=0)
    p.add_argument("--delay-ms", type=float, default=0.0)
    p.set_defaults(fn=cmd_mock)

    p = sub.add_parser("preview", help="render a MIDI file to a preview WAV")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=cmd_preview)

    return parser


def run_cli(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    # environment defaults for the gateway
    if args.command == "serve":
        import os

        if args.port == gateway.DEFAULT_PORT and os.environ.get("HARP_GATEWAY_PORT"):
            args.port = int(os.environ["HARP_GATEWAY_PORT"])
        if args.registry is None:
            args.registry = os.environ.get("HARP_REGISTRY")
    try:
        return args.fn(args)
    except HarpError as e:
        _eprint(f"{e.code.value}: {e.user_message}")
        if args.verbose:
            _eprint(f"  {e.developer_message}")
        return exit_code_for(e.code)
    except FileNotFoundError as e:
        _eprint(f"file not found: {e.filename}")
        return 2


def main() -> None:
    sys.exit(run_cli())
