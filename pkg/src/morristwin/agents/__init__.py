"""IT-side programmatic players: alpha-beta agent, random agent, and the
networked client loops that drive them."""

from .evaluate import DEFAULT_WEIGHTS, WIN_SCORE, EvalWeights, evaluate, mill_count
from .search import choose_move, choose_random_move, search_value

__all__ = [
    "DEFAULT_WEIGHTS",
    "WIN_SCORE",
    "EvalWeights",
    "evaluate",
    "mill_count",
    "choose_move",
    "choose_random_move",
    "search_value",
]
