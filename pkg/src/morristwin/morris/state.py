"""Game state and rules for Nine Men's Morris.

All operations are pure functions: they never mutate their inputs and a
given (state, move) pair always produces the same successor. Rule choices
that vary between traditions are pinned here: flying starts at exactly
three tokens, a double mill grants a single removal, removal is part of
the move itself, and the draw counters (100 quiet plies / threefold
repetition) only tick once both players have placed all tokens.
"""

from dataclasses import dataclass

from .board import ADJACENT, LINES_OF_POINT, POINT_INDEX, POINTS

WHITE = "W"
BLACK = "B"
EMPTY = "."

PLACING = "placing"
MOVING = "moving"
FLYING = "flying"

PLACE = "P"
SLIDE = "S"
FLY = "F"

# rejection reason codes (also used verbatim on the wire)
GAME_OVER = "game-over"
MALFORMED = "malformed-move"
WRONG_PHASE = "wrong-phase"
SOURCE_NOT_OWN = "source-not-own"
DEST_OCCUPIED = "destination-occupied"
NOT_ADJACENT = "not-adjacent"
REMOVAL_REQUIRED = "removal-required"
REMOVAL_FORBIDDEN = "removal-forbidden"
REMOVAL_TARGET_INVALID = "removal-target-invalid"

ONGOING = "ongoing"
WON = "won"
DRAW = "draw"

OPPONENT_BELOW_THREE = "opponent-below-three"
OPPONENT_NO_MOVES = "opponent-no-moves"
FIFTY_MOVE_RULE = "fifty-move-rule"
THREEFOLD_REPETITION = "threefold-repetition"

QUIET_PLY_LIMIT = 100  # 50 full moves without a mill or removal


def other(player: str) -> str:
    return BLACK if player == WHITE else WHITE


@dataclass(frozen=True, slots=True)
class Move:
    kind: str  # PLACE | SLIDE | FLY
    to: str
    from_: str | None = None
    remove: str | None = None


@dataclass(frozen=True, slots=True)
class GameState:
    board: str  # 24 chars of . W B in canonical point order
    hand_white: int
    hand_black: int
    to_move: str
    ply: int
    quiet_plies: int
    history: tuple[str, ...]  # position keys, current position last

    def hand(self, player: str) -> int:
        return self.hand_white if player == WHITE else self.hand_black

    def on_board(self, player: str) -> int:
        return self.board.count(player)

    def phase(self, player: str) -> str:
        if self.hand(player) > 0:
            return PLACING
        if self.on_board(player) == 3:
            return FLYING
        return MOVING

    def position_key(self) -> str:
        return f"{self.board}|{self.hand_white},{self.hand_black}|{self.to_move}"


@dataclass(frozen=True, slots=True)
class GameStatus:
    outcome: str  # ONGOING | WON | DRAW
    winner: str | None = None
    reason: str | None = None


@dataclass(frozen=True, slots=True)
class ValidationResult:
    ok: bool
    reason: str | None = None


VALID = ValidationResult(True)
STATUS_ONGOING = GameStatus(ONGOING)


def initial_state() -> GameState:
    board = EMPTY * 24
    key = f"{board}|9,9|{WHITE}"
    return GameState(board, 9, 9, WHITE, 0, 0, (key,))


def _forms_mill(board: str, to: int, player: str, vacated: int = -1) -> bool:
    """Would the mover's token landing on `to` complete a mill?

    `vacated` is the square the token left (it no longer counts).
    """
    for line in LINES_OF_POINT[to]:
        full = True
        for p in line:
            if p == to:
                continue
            if p == vacated or board[p] != player:
                full = False
                break
        if full:
            return True
    return False


def _in_mill(board: str, idx: int, player: str) -> bool:
    for line in LINES_OF_POINT[idx]:
        if all(board[p] == player for p in line):
            return True
    return False


def _removable_indices(board: str, victim: str) -> list[int]:
    tokens = [i for i in range(24) if board[i] == victim]
    free = [i for i in tokens if not _in_mill(board, i, victim)]
    return free if free else tokens


def removable_tokens(state: GameState, victim: str) -> list[str]:
    """Victim tokens a mill-completing mover may take: tokens outside any
    mill, or all tokens when every one sits in a mill."""
    return [POINTS[i] for i in _removable_indices(state.board, victim)]


def has_any_move(state: GameState) -> bool:
    """Whether the player to move has at least one legal move, ignoring
    game-over conditions (used by game_status itself)."""
    player = state.to_move
    phase = state.phase(player)
    board = state.board
    if phase == PLACING:
        return EMPTY in board
    if phase == FLYING:
        return EMPTY in board
    for i in range(24):
        if board[i] == player:
            for a in ADJACENT[i]:
                if board[a] == EMPTY:
                    return True
    return False


def game_status(state: GameState) -> GameStatus:
    board = state.board
    for player in (WHITE, BLACK):
        if state.hand(player) == 0 and board.count(player) < 3:
            return GameStatus(WON, other(player), OPPONENT_BELOW_THREE)
    if not has_any_move(state):
        return GameStatus(WON, other(state.to_move), OPPONENT_NO_MOVES)
    if state.quiet_plies >= QUIET_PLY_LIMIT:
        return GameStatus(DRAW, None, FIFTY_MOVE_RULE)
    if state.history.count(state.history[-1]) >= 3:
        return GameStatus(DRAW, None, THREEFOLD_REPETITION)
    return STATUS_ONGOING


def _generate_moves(state: GameState) -> list[Move]:
    """All legal moves of the player to move, assuming the game is not
    over. Mill-completing bases expand into one move per removal target."""
    player = state.to_move
    board = state.board
    phase = state.phase(player)
    removable = _removable_indices(board, other(player))
    moves: list[Move] = []

    def emit(kind: str, to: int, from_: int = -1) -> None:
        frm = POINTS[from_] if from_ >= 0 else None
        if _forms_mill(board, to, player, from_) and removable:
            for r in removable:
                moves.append(Move(kind, POINTS[to], frm, POINTS[r]))
        else:
            moves.append(Move(kind, POINTS[to], frm))

    if phase == PLACING:
        for to in range(24):
            if board[to] == EMPTY:
                emit(PLACE, to)
    elif phase == MOVING:
        for frm in range(24):
            if board[frm] == player:
                for to in ADJACENT[frm]:
                    if board[to] == EMPTY:
                        emit(SLIDE, to, frm)
    else:
        for frm in range(24):
            if board[frm] == player:
                for to in range(24):
                    if board[to] == EMPTY:
                        emit(FLY, to, frm)
    return moves


def _move_sort_key(m: Move) -> tuple:
    return (m.kind, m.from_ or "", m.to, m.remove or "")


def legal_moves(state: GameState) -> list[Move]:
    """Every legal move, deterministically ordered by canonical encoding.
    Empty on terminal states; callers should check game_status."""
    if game_status(state).outcome != ONGOING:
        return []
    return sorted(_generate_moves(state), key=_move_sort_key)


def count_moves(state: GameState, player: str) -> int:
    """Number of legal moves `player` would have if it were their turn
    (game-over conditions ignored). Matches len(legal_moves) whenever
    player is to move and the game is ongoing."""
    board = state.board
    phase = state.phase(player)
    removable_n = len(_removable_indices(board, other(player)))
    total = 0
    if phase == PLACING:
        for to in range(24):
            if board[to] == EMPTY:
                if _forms_mill(board, to, player) and removable_n:
                    total += removable_n
                else:
                    total += 1
    elif phase == MOVING:
        for frm in range(24):
            if board[frm] == player:
                for to in ADJACENT[frm]:
                    if board[to] == EMPTY:
                        if _forms_mill(board, to, player, frm) and removable_n:
                            total += removable_n
                        else:
                            total += 1
    else:
        for frm in range(24):
            if board[frm] == player:
                for to in range(24):
                    if board[to] == EMPTY:
                        if _forms_mill(board, to, player, frm) and removable_n:
                            total += removable_n
                        else:
                            total += 1
    return total


def validate_move(state: GameState, move: Move) -> ValidationResult:
    """Total validation of an arbitrary Move value against a state.

    Checks run in a fixed order (game over, structure, phase, source,
    destination, adjacency, removal) so rejection reasons are
    deterministic. Rejection is a value, never an exception.
    """
    if game_status(state).outcome != ONGOING:
        return ValidationResult(False, GAME_OVER)

    if move.kind not in (PLACE, SLIDE, FLY) or move.to not in POINT_INDEX:
        return ValidationResult(False, MALFORMED)
    if move.kind == PLACE:
        if move.from_ is not None:
            return ValidationResult(False, MALFORMED)
    else:
        if move.from_ is None or move.from_ not in POINT_INDEX:
            return ValidationResult(False, MALFORMED)
        if move.from_ == move.to:
            return ValidationResult(False, MALFORMED)
    if move.remove is not None and move.remove not in POINT_INDEX:
        return ValidationResult(False, MALFORMED)

    player = state.to_move
    board = state.board
    phase = state.phase(player)
    expected_kind = {PLACING: PLACE, MOVING: SLIDE, FLYING: FLY}[phase]
    if move.kind != expected_kind:
        return ValidationResult(False, WRONG_PHASE)

    to = POINT_INDEX[move.to]
    vacated = -1
    if move.kind == PLACE:
        if board[to] != EMPTY:
            return ValidationResult(False, DEST_OCCUPIED)
    else:
        vacated = POINT_INDEX[move.from_]
        if board[vacated] != player:
            return ValidationResult(False, SOURCE_NOT_OWN)
        if board[to] != EMPTY:
            return ValidationResult(False, DEST_OCCUPIED)
        if move.kind == SLIDE and to not in ADJACENT[vacated]:
            return ValidationResult(False, NOT_ADJACENT)

    mill = _forms_mill(board, to, player, vacated)
    removable = _removable_indices(board, other(player))
    if mill and removable:
        if move.remove is None:
            return ValidationResult(False, REMOVAL_REQUIRED)
        if POINT_INDEX[move.remove] not in removable:
            return ValidationResult(False, REMOVAL_TARGET_INVALID)
    elif move.remove is not None:
        return ValidationResult(False, REMOVAL_FORBIDDEN)
    return VALID


def apply_move(state: GameState, move: Move) -> GameState:
    """Successor state for a move that validate_move accepted. Calling it
    with an invalid move is a contract violation; validate first."""
    player = state.to_move
    cells = list(state.board)
    if move.kind == PLACE:
        hand_white = state.hand_white - (1 if player == WHITE else 0)
        hand_black = state.hand_black - (1 if player == BLACK else 0)
    else:
        hand_white, hand_black = state.hand_white, state.hand_black
        cells[POINT_INDEX[move.from_]] = EMPTY
    cells[POINT_INDEX[move.to]] = player
    if move.remove is not None:
        cells[POINT_INDEX[move.remove]] = EMPTY
    board = "".join(cells)

    # quiet plies count only non-placing, non-removing moves
    if move.kind == PLACE or move.remove is not None:
        quiet = 0
    else:
        quiet = state.quiet_plies + 1

    mover = other(player)
    key = f"{board}|{hand_white},{hand_black}|{mover}"
    return GameState(
        board,
        hand_white,
        hand_black,
        mover,
        state.ply + 1,
        quiet,
        state.history + (key,),
    )
