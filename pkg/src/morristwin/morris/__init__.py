"""Pure Nine Men's Morris rules engine."""

from .board import ADJACENT, MILL_LINES, MILL_LINES_NAMED, POINT_INDEX, POINTS
from .notation import (
    NotationError,
    decode_move,
    decode_state,
    encode_move,
    encode_state,
    state_digest,
)
from .perft import perft
from .state import (
    BLACK,
    DRAW,
    EMPTY,
    FIFTY_MOVE_RULE,
    FLY,
    FLYING,
    GAME_OVER,
    MOVING,
    ONGOING,
    OPPONENT_BELOW_THREE,
    OPPONENT_NO_MOVES,
    PLACE,
    PLACING,
    SLIDE,
    THREEFOLD_REPETITION,
    WHITE,
    WON,
    GameState,
    GameStatus,
    Move,
    ValidationResult,
    apply_move,
    count_moves,
    game_status,
    has_any_move,
    initial_state,
    legal_moves,
    other,
    removable_tokens,
    validate_move,
)

__all__ = [
    "ADJACENT",
    "MILL_LINES",
    "MILL_LINES_NAMED",
    "POINT_INDEX",
    "POINTS",
    "NotationError",
    "decode_move",
    "decode_state",
    "encode_move",
    "encode_state",
    "state_digest",
    "perft",
    "BLACK",
    "DRAW",
    "EMPTY",
    "FIFTY_MOVE_RULE",
    "FLY",
    "FLYING",
    "GAME_OVER",
    "MOVING",
    "ONGOING",
    "OPPONENT_BELOW_THREE",
    "OPPONENT_NO_MOVES",
    "PLACE",
    "PLACING",
    "SLIDE",
    "THREEFOLD_REPETITION",
    "WHITE",
    "WON",
    "GameState",
    "GameStatus",
    "Move",
    "ValidationResult",
    "apply_move",
    "count_moves",
    "game_status",
    "has_any_move",
    "initial_state",
    "legal_moves",
    "other",
    "removable_tokens",
    "validate_move",
]
