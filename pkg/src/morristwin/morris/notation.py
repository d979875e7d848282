"""Canonical text forms for moves and states, plus the state digest.

Move text:  P-<to>[x<remove>] | S-<from>-<to>[x<remove>] | F-<from>-<to>[x<remove>]
State text: <board24>|<hand_w>,<hand_b>|<to_move>|<ply>,<quiet_plies>

The state text deliberately omits the repetition history: it is the
replication payload pushed to cells and the digest input, and mirrors do
not adjudicate draws. decode_state therefore yields a state whose history
contains only its own position key.
"""

import hashlib

from .board import POINT_INDEX
from .state import BLACK, EMPTY, FLY, PLACE, SLIDE, WHITE, GameState, Move

_KIND_CHARS = (PLACE, SLIDE, FLY)
_CELL_CHARS = (EMPTY, WHITE, BLACK)


class NotationError(ValueError):
    """Malformed move or state text; `offset` points at the bad character."""

    def __init__(self, offset: int, reason: str):
        super().__init__(f"offset {offset}: {reason}")
        self.offset = offset
        self.reason = reason


def encode_move(move: Move) -> str:
    if move.kind == PLACE:
        text = f"P-{move.to}"
    else:
        text = f"{move.kind}-{move.from_}-{move.to}"
    if move.remove is not None:
        text += f"x{move.remove}"
    return text


def _take_point(text: str, pos: int) -> tuple[str, int]:
    name = text[pos : pos + 2]
    if name not in POINT_INDEX:
        raise NotationError(pos, f"expected a point name, got {name!r}")
    return name, pos + 2


def decode_move(text: str) -> Move:
    if not text:
        raise NotationError(0, "empty move text")
    kind = text[0]
    if kind not in _KIND_CHARS:
        raise NotationError(0, f"unknown move kind {kind!r}")
    pos = 1
    if pos >= len(text) or text[pos] != "-":
        raise NotationError(pos, "expected '-'")
    pos += 1
    from_ = None
    if kind != PLACE:
        from_, pos = _take_point(text, pos)
        if pos >= len(text) or text[pos] != "-":
            raise NotationError(pos, "expected '-'")
        pos += 1
    to, pos = _take_point(text, pos)
    remove = None
    if pos < len(text):
        if text[pos] != "x":
            raise NotationError(pos, "expected 'x' or end of text")
        pos += 1
        remove, pos = _take_point(text, pos)
    if pos != len(text):
        raise NotationError(pos, "trailing characters")
    return Move(kind, to, from_, remove)


def encode_state(state: GameState) -> str:
    return (
        f"{state.board}|{state.hand_white},{state.hand_black}"
        f"|{state.to_move}|{state.ply},{state.quiet_plies}"
    )


def _take_int(text: str, pos: int, what: str) -> tuple[int, int]:
    end = pos
    while end < len(text) and text[end].isdigit():
        end += 1
    if end == pos:
        raise NotationError(pos, f"expected {what}")
    return int(text[pos:end]), end


def _expect(text: str, pos: int, ch: str) -> int:
    if pos >= len(text) or text[pos] != ch:
        raise NotationError(pos, f"expected {ch!r}")
    return pos + 1


def decode_state(text: str) -> GameState:
    if len(text) < 24:
        bad = len(text)
        raise NotationError(bad, "board field must be 24 characters")
    for i in range(24):
        if text[i] not in _CELL_CHARS:
            raise NotationError(i, f"bad board character {text[i]!r}")
    board = text[:24]
    pos = _expect(text, 24, "|")
    hand_white, pos = _take_int(text, pos, "white hand count")
    pos = _expect(text, pos, ",")
    hand_black, pos = _take_int(text, pos, "black hand count")
    pos = _expect(text, pos, "|")
    if pos >= len(text) or text[pos] not in (WHITE, BLACK):
        raise NotationError(pos, "expected W or B to move")
    to_move = text[pos]
    pos = _expect(text, pos + 1, "|")
    ply, pos = _take_int(text, pos, "ply counter")
    pos = _expect(text, pos, ",")
    quiet, pos = _take_int(text, pos, "quiet-ply counter")
    if pos != len(text):
        raise NotationError(pos, "trailing characters")

    for hand, player in ((hand_white, WHITE), (hand_black, BLACK)):
        if hand > 9:
            raise NotationError(25, f"hand count {hand} exceeds 9")
        if hand + board.count(player) > 9:
            raise NotationError(0, f"{player} exceeds 9 tokens in play")
    key = f"{board}|{hand_white},{hand_black}|{to_move}"
    return GameState(board, hand_white, hand_black, to_move, ply, quiet, (key,))


def state_digest(state: GameState) -> str:
    """Short stable digest of the canonical state text, used by the
    replication protocol to compare board mirrors."""
    return hashlib.sha256(encode_state(state).encode()).hexdigest()[:16]
