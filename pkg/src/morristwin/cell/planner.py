"""Translation of abstract game moves into pick-and-place motion plans.

A plan is a flat action sequence starting from the home pose: travel to a
pick location, grip, travel to a place location, release, repeated for
the removal leg when the move took an opponent token. The cell validates
the move against its own mirror first; a diverged mirror must never drive
the (simulated) hardware.
"""

from dataclasses import dataclass

from ..morris import GameState, Move, validate_move
from .geometry import BoardGeometry, store_slot
from .kinematics import PlatformModel, travel_ms


class IllegalLocalMove(Exception):
    """The commanded move is illegal against the cell's local mirror;
    the cell reports divergence instead of executing."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True, slots=True)
class MoveTo:
    location: str
    travel_ms: float


@dataclass(frozen=True, slots=True)
class Pick:
    location: str


@dataclass(frozen=True, slots=True)
class Place:
    location: str


@dataclass(frozen=True, slots=True)
class MotionPlan:
    actions: tuple
    total_ms: float


def plan_motion(local: GameState, move: Move, geometry: BoardGeometry,
                model: PlatformModel) -> MotionPlan:
    verdict = validate_move(local, move)
    if not verdict.ok:
        raise IllegalLocalMove(verdict.reason)

    player = local.to_move
    actions = []
    total = 0.0
    cursor = "home"

    def goto(location: str):
        nonlocal cursor, total
        ms = travel_ms(model, geometry.xy(cursor), geometry.xy(location))
        actions.append(MoveTo(location, ms))
        total += ms
        cursor = location

    def pick(location: str):
        nonlocal total
        actions.append(Pick(location))
        total += model.pick_ms

    def place(location: str):
        nonlocal total
        actions.append(Place(location))
        total += model.place_ms

    if move.kind == "P":
        source = store_slot(player, 9 - local.hand(player))
    else:
        source = move.from_
    goto(source)
    pick(source)
    goto(move.to)
    place(move.to)
    if move.remove is not None:
        goto(move.remove)
        pick(move.remove)
        goto("bin")
        place("bin")
    return MotionPlan(tuple(actions), total)
