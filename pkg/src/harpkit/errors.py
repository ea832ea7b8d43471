"""Canonical error codes shared by every harpkit layer.

User messages are meant for the status line (no URLs, no tracebacks);
developer messages name the offending field or route.
"""

from __future__ import annotations

import enum


class ErrorCode(enum.Enum):
    E100_ConnectionFailed = "E100_ConnectionFailed"
    E101_Timeout = "E101_Timeout"
    E110_InvalidCard = "E110_InvalidCard"
    E111_UnsupportedSchemaVersion = "E111_UnsupportedSchemaVersion"
    E120_MediaTypeMismatch = "E120_MediaTypeMismatch"
    E130_ControlValidation = "E130_ControlValidation"
    E140_RemoteJobError = "E140_RemoteJobError"
    E141_JobNotFound = "E141_JobNotFound"
    E142_Cancelled = "E142_Cancelled"
    E150_MediaDecode = "E150_MediaDecode"
    E151_MediaEncode = "E151_MediaEncode"


class HarpError(Exception):
    """Carries exactly one :class:`ErrorCode` plus a two-audience message pair."""

    def __init__(self, code: ErrorCode, user_message: str, developer_message: str = ""):
        super().__init__(f"{code.value}: {user_message}")
        self.code = code
        self.user_message = user_message
        self.developer_message = developer_message or user_message

    def __repr__(self) -> str:
        return f"HarpError({self.code.value}, {self.user_message!r})"


# Exit classes for the CLI: 0 success, 2 usage, then by error family.
_EXIT_BY_PREFIX = {
    "E10": 4,  # transport
    "E11": 5,  # bad remote card counts as a remote fault
    "E12": 3,  # capability mismatch is caught client-side, like validation
    "E13": 3,  # control validation
    "E14": 5,  # remote job errors
    "E15": 5,  # media codec errors
}


def exit_code_for(code: ErrorCode) -> int:
    return _EXIT_BY_PREFIX[code.value[:3]]
