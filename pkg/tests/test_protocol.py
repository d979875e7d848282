import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from morristwin import protocol
from morristwin.protocol import (
    MAX_FRAME_BYTES,
    DecodeError,
    Envelope,
    MonotonicGate,
    decode_frame,
    encode,
)

GOLDEN = [
    Envelope(1, protocol.PING),
    Envelope(2, protocol.PONG, re=1),
    Envelope(3, protocol.HELLO, {"client": "ui-1"}),
    Envelope(4, protocol.HELLO_ACK, {"server": "twin", "time": 123}, re=3),
    Envelope(5, protocol.JOIN_GAME, {"color": "any", "token": None}),
    Envelope(6, protocol.JOIN_ACK, {"color": "white", "token": "ab12"}, re=5),
    Envelope(7, protocol.SUBMIT_MOVE, {"move": "P-d1"}),
    Envelope(
        8,
        protocol.MOVE_ACCEPTED,
        {"pid": 1, "ply": 1, "state": "x|9,8|B|1,0", "digest": "d"},
        re=7,
    ),
    Envelope(9, protocol.MOVE_REJECTED, {"pid": 2, "reason": "wrong-phase"}, re=7),
    Envelope(
        10,
        protocol.STATE_UPDATE,
        {
            "state": "." * 24 + "|9,9|W|0,0",
            "digest": "abc",
            "status": "ongoing",
            "to_move": "W",
            "ply": 0,
            "last_move": None,
            "players": {"white": "open", "black": "open"},
            "cells": {"c1": {"status": "synced", "platform": "delta-plc"}},
        },
    ),
    Envelope(
        11,
        protocol.PROCESS_UPDATE,
        {"pid": 4, "state": "completed", "move": "P-d1", "no_cells": True,
         "pending": [], "updated_at": 5},
    ),
    Envelope(12, protocol.REGISTER_CELL, {"cell": "c1", "platform": "usb-arm"}),
    Envelope(
        13,
        protocol.REGISTER_ACK,
        {"cell": "c1", "state": "." * 24 + "|9,9|W|0,0", "digest": "abc"},
        re=12,
    ),
    Envelope(
        14,
        protocol.CELL_COMMAND,
        {"command": "apply_move", "pid": 4, "move": "P-d1", "expect_digest": "ff"},
    ),
    Envelope(15, protocol.CELL_ACK, {"pid": 4}, re=14),
    Envelope(
        16,
        protocol.CELL_STATE_REPORT,
        {"cell": "c1", "pid": 4, "digest": "ff", "state": "s", "duration_ms": 12},
        re=14,
    ),
    Envelope(17, protocol.ERROR, {"code": "unknown-kind"}, re=2),
]


@pytest.mark.parametrize("env", GOLDEN, ids=lambda e: e.kind)
def test_round_trip_every_kind(env):
    frame = encode(env)
    assert frame.endswith(b"\n")
    assert frame.count(b"\n") == 1
    assert decode_frame(frame) == env


def test_newline_inside_text_field_stays_single_line():
    env = Envelope(1, protocol.ERROR, {"code": "x", "detail": "line1\nline2"})
    frame = encode(env)
    assert frame.count(b"\n") == 1
    assert decode_frame(frame).body["detail"] == "line1\nline2"


def test_unknown_body_field_is_ignored():
    obj = {"id": 1, "kind": "ping", "body": {"extra": [1, 2, 3]}}
    env = decode_frame(json.dumps(obj).encode())
    assert env.kind == "ping"
    assert env.body["extra"] == [1, 2, 3]


def test_unknown_kind_decodes_for_error_handling():
    obj = {"id": 5, "kind": "made_up", "body": {}}
    env = decode_frame(json.dumps(obj).encode())
    assert env.kind == "made_up"


def test_missing_required_field_rejected():
    obj = {"id": 1, "kind": "submit_move", "body": {}}
    with pytest.raises(DecodeError) as err:
        decode_frame(json.dumps(obj).encode())
    assert "body.move" in err.value.reason


def test_wrong_type_rejected():
    obj = {"id": 1, "kind": "submit_move", "body": {"move": 7}}
    with pytest.raises(DecodeError):
        decode_frame(json.dumps(obj).encode())


def test_truncated_frame_has_offset():
    frame = encode(Envelope(1, protocol.HELLO, {"client": "x"}))
    with pytest.raises(DecodeError) as err:
        decode_frame(frame[: len(frame) // 2])
    assert err.value.offset > 0


def _padded_frame(total_len: int) -> bytes:
    blank = json.dumps(
        {"id": 1, "kind": "error", "body": {"code": "x", "detail": ""}},
        separators=(",", ":"),
    ).encode()
    pad = total_len - len(blank)
    assert pad >= 0
    obj = {"id": 1, "kind": "error", "body": {"code": "x", "detail": "a" * pad}}
    frame = json.dumps(obj, separators=(",", ":")).encode()
    assert len(frame) == total_len
    return frame


def test_frame_size_boundary():
    ok = _padded_frame(MAX_FRAME_BYTES)
    assert decode_frame(ok + b"\n").kind == "error"
    too_big = _padded_frame(MAX_FRAME_BYTES + 1)
    with pytest.raises(DecodeError) as err:
        decode_frame(too_big + b"\n")
    assert "oversized" in err.value.reason
    assert err.value.offset == MAX_FRAME_BYTES


def test_bad_ids_rejected():
    for bad in [0, -3, "x", None, True, 1.5]:
        obj = {"id": bad, "kind": "ping", "body": {}}
        with pytest.raises(DecodeError):
            decode_frame(json.dumps(obj).encode())


def test_encoder_is_strict():
    with pytest.raises(ValueError):
        encode(Envelope(1, "nonsense", {}))
    with pytest.raises(ValueError):
        encode(Envelope(0, protocol.PING, {}))
    with pytest.raises(ValueError):
        encode(Envelope(1, protocol.SUBMIT_MOVE, {}))


def test_monotonic_gate():
    gate = MonotonicGate()
    assert gate.accept(1)
    assert gate.accept(2)
    assert not gate.accept(2)
    assert not gate.accept(1)
    assert gate.accept(10)


@settings(max_examples=500, deadline=None)
@given(st.binary(max_size=300))
def test_decode_total_on_random_bytes(data):
    try:
        decode_frame(data)
    except DecodeError:
        pass


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=200))
def test_decode_total_on_random_text(text):
    try:
        decode_frame(text)
    except DecodeError:
        pass


def _random_envelope(rng: random.Random) -> Envelope:
    kind = rng.choice(sorted(protocol.KNOWN_KINDS))
    body = {}
    for name, (type_tag, required) in protocol.BODY_SCHEMAS[kind].items():
        if not required and rng.random() < 0.4:
            continue
        if type_tag == "str":
            body[name] = "".join(
                rng.choice("abc\n\\\"|{}πß日") for _ in range(rng.randrange(12))
            )
        elif type_tag == "str?":
            body[name] = None if rng.random() < 0.3 else "v" * rng.randrange(5)
        elif type_tag == "int":
            body[name] = rng.randrange(10**9)
        elif type_tag == "int?":
            body[name] = None if rng.random() < 0.3 else rng.randrange(100)
        elif type_tag == "bool":
            body[name] = rng.random() < 0.5
        elif type_tag == "dict":
            body[name] = {"k": rng.randrange(5), "s": "x"}
        elif type_tag == "list":
            body[name] = [rng.randrange(9) for _ in range(rng.randrange(4))]
    re_id = rng.randrange(1, 100) if rng.random() < 0.5 else None
    return Envelope(rng.randrange(1, 10**6), kind, body, re_id)


def test_fuzz_round_trip_10k_envelopes():
    rng = random.Random(42)
    for _ in range(10_000):
        env = _random_envelope(rng)
        assert decode_frame(encode(env)) == env
