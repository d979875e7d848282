"""Position evaluation in centitokens, positive favoring the given player.

Terms: material (board + hand token difference), mobility (legal-move
count difference, each player scored as if it were their turn) and closed
mill difference. Weights are configuration, not constants baked into the
search; scaling all of them by a positive factor must not change the
chosen move.
"""

from dataclasses import dataclass

from ..morris import MILL_LINES, ONGOING, WON, GameState, count_moves, game_status, other

WIN_SCORE = 1_000_000


@dataclass(frozen=True, slots=True)
class EvalWeights:
    material: int = 100
    mobility: int = 10
    mills: int = 50


DEFAULT_WEIGHTS = EvalWeights()


def mill_count(board: str, player: str) -> int:
    return sum(
        1
        for a, b, c in MILL_LINES
        if board[a] == player and board[b] == player and board[c] == player
    )


def evaluate(state: GameState, player: str,
             weights: EvalWeights = DEFAULT_WEIGHTS,
             plies_from_root: int = 0) -> int:
    """Score `state` for `player`. Terminal positions dominate every
    heuristic term and prefer the shortest win (or longest loss)."""
    status = game_status(state)
    if status.outcome != ONGOING:
        if status.outcome == WON:
            score = WIN_SCORE - plies_from_root
            return score if status.winner == player else -score
        return 0
    opp = other(player)
    board = state.board
    material = (board.count(player) + state.hand(player)) - (
        board.count(opp) + state.hand(opp)
    )
    mobility = count_moves(state, player) - count_moves(state, opp)
    mills = mill_count(board, player) - mill_count(board, opp)
    return (
        weights.material * material
        + weights.mobility * mobility
        + weights.mills * mills
    )
