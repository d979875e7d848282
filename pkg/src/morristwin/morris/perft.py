"""Move-tree node counting, the standard correctness oracle for rules
engines: perft(s, d) is the number of legal move sequences of exactly d
plies from s."""

from .state import GameState, apply_move, legal_moves


def perft(state: GameState, depth: int) -> int:
    if depth == 0:
        return 1
    total = 0
    for move in legal_moves(state):
        total += perft(apply_move(state, move), depth - 1)
    return total
