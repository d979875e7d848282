"""Platform timing models for the two robot kinds.

The delta robot flies point to point in a straight line; the arm lifts to
a safe height, travels rectilinearly (dog-leg) and lowers again, so its
path for the same move is strictly longer. Travel time follows the usual
trapezoidal velocity profile, degenerating to triangular when the
distance is too short to reach full speed.
"""

import math
from dataclasses import dataclass

PATH_LINE = "line"
PATH_DOGLEG = "dogleg"


@dataclass(frozen=True)
class PlatformModel:
    tag: str
    vmax: float  # mm/s
    accel: float  # mm/s^2
    pick_ms: float
    place_ms: float
    path_style: str
    safe_height_mm: float = 80.0

    def __post_init__(self):
        if self.vmax <= 0 or self.accel <= 0:
            raise ValueError("vmax and accel must be positive")


DELTA_PLC = PlatformModel("delta-plc", vmax=1500.0, accel=10_000.0,
                          pick_ms=150.0, place_ms=150.0,
                          path_style=PATH_LINE)
USB_ARM = PlatformModel("usb-arm", vmax=300.0, accel=800.0,
                        pick_ms=500.0, place_ms=500.0,
                        path_style=PATH_DOGLEG)

PLATFORMS = {m.tag: m for m in (DELTA_PLC, USB_ARM)}


def profile_ms(distance_mm: float, vmax: float, accel: float) -> float:
    """Time to cover a distance under a trapezoidal velocity profile,
    triangular when distance < vmax^2/accel."""
    if distance_mm <= 0:
        return 0.0
    critical = vmax * vmax / accel
    if distance_mm >= critical:
        return (distance_mm / vmax + vmax / accel) * 1000.0
    return 2.0 * math.sqrt(distance_mm / accel) * 1000.0


def path_length(model: PlatformModel, a: tuple[float, float],
                b: tuple[float, float]) -> float:
    dx = abs(b[0] - a[0])
    dy = abs(b[1] - a[1])
    if model.path_style == PATH_LINE:
        return math.hypot(dx, dy)
    return dx + dy + 2.0 * model.safe_height_mm


def travel_ms(model: PlatformModel, a: tuple[float, float],
              b: tuple[float, float]) -> float:
    return profile_ms(path_length(model, a, b), model.vmax, model.accel)
