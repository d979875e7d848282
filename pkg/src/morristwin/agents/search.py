"""Depth-limited alpha-beta search over the rules engine.

The root iterates moves in canonical order and keeps the first maximizer,
so ties break deterministically. Interior nodes reorder removals first
purely for pruning efficiency; with the root's full window the returned
value equals plain minimax.
"""

import random

from ..morris import (
    ONGOING,
    GameState,
    Move,
    apply_move,
    encode_move,
    game_status,
    legal_moves,
)
from .evaluate import DEFAULT_WEIGHTS, WIN_SCORE, EvalWeights, evaluate

_INF = WIN_SCORE * 2


def _ordered(moves: list[Move]) -> list[Move]:
    # removals first: they cut hardest
    return sorted(moves, key=lambda m: m.remove is None)


def _search(state: GameState, depth: int, alpha: int, beta: int,
            pov: str, dist: int, weights: EvalWeights) -> int:
    if depth == 0 or game_status(state).outcome != ONGOING:
        return evaluate(state, pov, weights, dist)
    moves = legal_moves(state)
    if state.to_move == pov:
        value = -_INF
        for m in _ordered(moves):
            value = max(
                value,
                _search(apply_move(state, m), depth - 1, alpha, beta, pov,
                        dist + 1, weights),
            )
            alpha = max(alpha, value)
            if value >= beta:
                break
        return value
    value = _INF
    for m in _ordered(moves):
        value = min(
            value,
            _search(apply_move(state, m), depth - 1, alpha, beta, pov,
                    dist + 1, weights),
        )
        beta = min(beta, value)
        if value <= alpha:
            break
    return value


def search_value(state: GameState, depth: int,
                 weights: EvalWeights = DEFAULT_WEIGHTS) -> int:
    """Root minimax value for the player to move."""
    _, value = _choose(state, depth, weights)
    return value


def choose_move(state: GameState, depth: int,
                weights: EvalWeights = DEFAULT_WEIGHTS) -> Move:
    """Best move for the player to move; requires an ongoing game and
    depth >= 1."""
    move, _ = _choose(state, depth, weights)
    return move


def _choose(state: GameState, depth: int, weights: EvalWeights):
    if depth < 1:
        raise ValueError("search depth must be >= 1")
    moves = legal_moves(state)
    if not moves:
        raise ValueError("no legal moves: game is over")
    pov = state.to_move
    best = None
    best_value = -_INF
    alpha = -_INF
    for m in moves:  # canonical order fixes the tie-break
        value = _search(apply_move(state, m), depth - 1, alpha, _INF, pov, 1,
                        weights)
        if value > best_value:
            best, best_value = m, value
            alpha = max(alpha, value)
    return best, best_value


def choose_random_move(state: GameState, rng: random.Random) -> Move:
    moves = legal_moves(state)
    if not moves:
        raise ValueError("no legal moves: game is over")
    return rng.choice(moves)


def describe(move: Move) -> str:
    return encode_move(move)
