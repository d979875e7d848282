import random

import pytest

from morristwin.agents import (
    DEFAULT_WEIGHTS,
    WIN_SCORE,
    EvalWeights,
    choose_move,
    choose_random_move,
    evaluate,
    mill_count,
    search_value,
)
from morristwin.morris import (
    BLACK,
    ONGOING,
    WHITE,
    WON,
    apply_move,
    encode_move,
    game_status,
    initial_state,
    legal_moves,
    validate_move,
)
from oracles import plain_minimax, random_playout, swap_colors
from test_rules import make_state

W, B = WHITE, BLACK


def test_mill_count():
    s = make_state({"a1": W, "d1": W, "g1": W, "b2": B, "d2": B, "e3": B,
                    "c4": W})
    assert mill_count(s.board, W) == 1
    assert mill_count(s.board, B) == 0


def test_eval_antisymmetric_under_color_swap():
    rng = random.Random(31)
    for _ in range(4):
        for s in random_playout(rng, max_plies=50):
            assert evaluate(s, W) == -evaluate(s, B)
            assert evaluate(s, W) == -evaluate(swap_colors(s), W)


def test_terminal_eval_dominates_and_prefers_fast_wins():
    won = make_state({"a1": W, "d1": W, "b2": W, "e3": B, "e4": B})
    assert game_status(won).outcome == WON
    assert evaluate(won, W, plies_from_root=3) == WIN_SCORE - 3
    assert evaluate(won, B, plies_from_root=3) == -(WIN_SCORE - 3)
    assert evaluate(won, W, plies_from_root=1) > evaluate(won, W,
                                                          plies_from_root=5)


def test_depth1_takes_the_winning_capture():
    # d2 -> d1 completes a1-d1-g1 and any removal drops black below three
    s = make_state(
        {"a1": W, "g1": W, "d2": W, "b4": W, "b2": B, "f2": B, "e3": B},
        to_move=W,
    )
    move = choose_move(s, 1)
    assert move.to == "d1" and move.remove is not None
    assert game_status(apply_move(s, move)).outcome == WON
    # plain depth-1 exhaustive evaluation agrees
    best = max(
        legal_moves(s),
        key=lambda m: (evaluate(apply_move(s, m), W, DEFAULT_WEIGHTS, 1),
                       [-ord(c) for c in encode_move(m)]),
    )
    assert evaluate(apply_move(s, move), W, DEFAULT_WEIGHTS, 1) == \
        evaluate(apply_move(s, best), W, DEFAULT_WEIGHTS, 1)


def test_alpha_beta_equals_plain_minimax_on_100_positions():
    rng = random.Random(77)
    positions = []
    while len(positions) < 100:
        states = random_playout(rng, max_plies=70)
        s = states[rng.randrange(len(states))]
        if game_status(s).outcome == ONGOING:
            positions.append(s)
    for i, s in enumerate(positions):
        depth = (i % 3) + 1
        assert search_value(s, depth) == plain_minimax(s, depth, s.to_move), (
            i, depth
        )


def test_even_depth_value_of_symmetric_initial_position_is_zero():
    assert search_value(initial_state(), 2) == 0


def test_choose_move_deterministic():
    s = initial_state()
    assert choose_move(s, 2) == choose_move(s, 2)


def test_argmax_invariant_under_weight_scaling():
    rng = random.Random(101)
    scaled = EvalWeights(material=700, mobility=70, mills=350)
    checked = 0
    while checked < 12:
        states = random_playout(rng, max_plies=50)
        s = states[rng.randrange(len(states))]
        if game_status(s).outcome != ONGOING:
            continue
        assert choose_move(s, 2) == choose_move(s, 2, scaled)
        checked += 1


def test_choose_move_requires_playable_state():
    with pytest.raises(ValueError):
        choose_move(initial_state(), 0)
    finished = make_state({"a1": W, "d1": W, "b2": W, "e3": B, "e4": B})
    with pytest.raises(ValueError):
        choose_move(finished, 2)


def test_random_agent_moves_are_legal():
    rng = random.Random(55)
    s = initial_state()
    for _ in range(60):
        if game_status(s).outcome != ONGOING:
            break
        m = choose_random_move(s, rng)
        assert validate_move(s, m).ok
        s = apply_move(s, m)


def test_search_agent_self_play_stays_legal():
    s = initial_state()
    plies = 0
    while game_status(s).outcome == ONGOING and plies < 40:
        m = choose_move(s, 2)
        assert validate_move(s, m).ok
        s = apply_move(s, m)
        plies += 1
    assert plies > 0
