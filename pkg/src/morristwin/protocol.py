"""Wire protocol shared by clients, the orchestrator and cells.

Frames are single-line UTF-8 JSON objects terminated by one newline, at
most 64 KiB of payload per frame. Top-level fields: `id` (per-sender
monotonic message id), `re` (optional id being answered), `kind`, `body`.
Unknown body fields are ignored for forward compatibility; unknown kinds
survive decoding so the receiver can answer with an `unknown-kind` error
instead of dropping the connection.
"""

import json
import time
from dataclasses import dataclass, field

MAX_FRAME_BYTES = 64 * 1024

HELLO = "hello"
HELLO_ACK = "hello_ack"
JOIN_GAME = "join_game"
JOIN_ACK = "join_ack"
SUBMIT_MOVE = "submit_move"
MOVE_ACCEPTED = "move_accepted"
MOVE_REJECTED = "move_rejected"
STATE_UPDATE = "state_update"
PROCESS_UPDATE = "process_update"
REGISTER_CELL = "register_cell"
REGISTER_ACK = "register_ack"
CELL_COMMAND = "cell_command"
CELL_ACK = "cell_ack"
CELL_STATE_REPORT = "cell_state_report"
ERROR = "error"
PING = "ping"
PONG = "pong"

CMD_APPLY_MOVE = "apply_move"
CMD_RESYNC_STATE = "resync_state"
CMD_RESET_BOARD = "reset_board"

_STR = "str"
_INT = "int"
_BOOL = "bool"
_DICT = "dict"
_LIST = "list"
_OPT_STR = "str?"
_OPT_INT = "int?"

# body schemas: field -> (type tag, required)
BODY_SCHEMAS: dict[str, dict[str, tuple[str, bool]]] = {
    HELLO: {"client": (_STR, True)},
    HELLO_ACK: {"server": (_STR, True), "time": (_INT, False)},
    JOIN_GAME: {"color": (_STR, True), "token": (_OPT_STR, False)},
    JOIN_ACK: {"color": (_STR, True), "token": (_STR, True)},
    SUBMIT_MOVE: {"move": (_STR, True)},
    MOVE_ACCEPTED: {
        "pid": (_INT, True),
        "ply": (_INT, True),
        "state": (_STR, True),
        "digest": (_STR, True),
    },
    MOVE_REJECTED: {"pid": (_OPT_INT, False), "reason": (_STR, True)},
    STATE_UPDATE: {
        "state": (_STR, True),
        "digest": (_STR, True),
        "status": (_STR, True),
        "to_move": (_STR, True),
        "ply": (_INT, True),
        "last_move": (_OPT_STR, False),
        "players": (_DICT, False),
        "cells": (_DICT, False),
    },
    PROCESS_UPDATE: {
        "pid": (_INT, True),
        "state": (_STR, True),
        "move": (_STR, False),
        "reason": (_OPT_STR, False),
        "pending": (_LIST, False),
        "no_cells": (_BOOL, False),
        "failure": (_OPT_STR, False),
        "digest": (_OPT_STR, False),
        "updated_at": (_INT, False),
    },
    REGISTER_CELL: {"cell": (_STR, True), "platform": (_STR, True)},
    REGISTER_ACK: {
        "cell": (_STR, True),
        "state": (_STR, True),
        "digest": (_STR, True),
    },
    CELL_COMMAND: {
        "command": (_STR, True),
        "pid": (_INT, True),
        "move": (_STR, False),
        "state": (_STR, False),
        "expect_digest": (_STR, False),
    },
    CELL_ACK: {"pid": (_INT, True)},
    CELL_STATE_REPORT: {
        "cell": (_STR, True),
        "pid": (_INT, True),
        "digest": (_STR, True),
        "state": (_STR, False),
        "duration_ms": (_INT, False),
        "error": (_OPT_STR, False),
    },
    ERROR: {"code": (_STR, True), "detail": (_STR, False)},
    PING: {},
    PONG: {},
}

KNOWN_KINDS = frozenset(BODY_SCHEMAS)

ERR_UNKNOWN_KIND = "unknown-kind"
ERR_BAD_MSG_ID = "bad-msg-id"
ERR_UNKNOWN_CELL = "unknown-cell"
ERR_UNKNOWN_PROCESS = "unknown-process"
ERR_BAD_FRAME = "bad-frame"


def now_ms() -> int:
    return int(time.time() * 1000)


@dataclass(frozen=True, slots=True)
class Envelope:
    id: int
    kind: str
    body: dict = field(default_factory=dict)
    re: int | None = None


class DecodeError(ValueError):
    """Frame rejected; `offset` is the byte/character position at fault."""

    def __init__(self, offset: int, reason: str):
        super().__init__(f"offset {offset}: {reason}")
        self.offset = offset
        self.reason = reason


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


_TYPE_OK = {
    _STR: lambda v: isinstance(v, str),
    _INT: _is_int,
    _BOOL: lambda v: isinstance(v, bool),
    _DICT: lambda v: isinstance(v, dict),
    _LIST: lambda v: isinstance(v, list),
    _OPT_STR: lambda v: v is None or isinstance(v, str),
    _OPT_INT: lambda v: v is None or _is_int(v),
}


def check_body(kind: str, body: dict) -> str | None:
    """None if `body` satisfies the schema for `kind`, else a complaint.
    Unknown fields pass (forward compatibility)."""
    schema = BODY_SCHEMAS.get(kind)
    if schema is None:
        return f"unknown kind {kind!r}"
    for name, (type_tag, required) in schema.items():
        if name not in body:
            if required:
                return f"body.{name}: missing"
            continue
        if not _TYPE_OK[type_tag](body[name]):
            return f"body.{name}: expected {type_tag}"
    return None


def encode(envelope: Envelope) -> bytes:
    """One newline-terminated frame. Raises ValueError on envelopes that
    violate the schema: the sender side is strict."""
    if not _is_int(envelope.id) or envelope.id < 1:
        raise ValueError(f"bad message id {envelope.id!r}")
    if envelope.kind not in KNOWN_KINDS:
        raise ValueError(f"unknown kind {envelope.kind!r}")
    complaint = check_body(envelope.kind, envelope.body)
    if complaint:
        raise ValueError(complaint)
    obj = {"id": envelope.id, "kind": envelope.kind, "body": envelope.body}
    if envelope.re is not None:
        obj["re"] = envelope.re
    data = json.dumps(obj, separators=(",", ":"), ensure_ascii=False).encode()
    if len(data) > MAX_FRAME_BYTES:
        raise ValueError(f"frame of {len(data)} bytes exceeds cap")
    return data + b"\n"


def decode_frame(line: bytes | bytearray | str) -> Envelope:
    """Parse one frame (with or without its trailing newline). All
    failures raise DecodeError; nothing else escapes."""
    if isinstance(line, str):
        data = line.encode("utf-8", errors="surrogatepass")
    else:
        data = bytes(line)
    if data.endswith(b"\n"):
        data = data[:-1]
    if len(data) > MAX_FRAME_BYTES:
        raise DecodeError(MAX_FRAME_BYTES, "oversized frame")
    nl = data.find(b"\n")
    if nl != -1:
        raise DecodeError(nl, "interior newline")
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DecodeError(exc.start, "invalid utf-8") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DecodeError(exc.pos, f"bad json: {exc.msg}") from None
    except (RecursionError, ValueError) as exc:
        raise DecodeError(0, f"bad json: {exc}") from None
    if not isinstance(obj, dict):
        raise DecodeError(0, "frame is not an object")
    msg_id = obj.get("id")
    if not _is_int(msg_id) or msg_id < 1:
        raise DecodeError(0, "id: expected positive int")
    re_id = obj.get("re")
    if re_id is not None and (not _is_int(re_id) or re_id < 1):
        raise DecodeError(0, "re: expected positive int")
    kind = obj.get("kind")
    if not isinstance(kind, str):
        raise DecodeError(0, "kind: expected str")
    body = obj.get("body", {})
    if not isinstance(body, dict):
        raise DecodeError(0, "body: expected object")
    if kind in KNOWN_KINDS:
        complaint = check_body(kind, body)
        if complaint:
            raise DecodeError(0, complaint)
    return Envelope(msg_id, kind, body, re_id)


class MonotonicGate:
    """Receiver-side enforcement of strictly increasing message ids on one
    connection."""

    def __init__(self):
        self.last = 0

    def accept(self, msg_id: int) -> bool:
        if msg_id <= self.last:
            return False
        self.last = msg_id
        return True
