"""Physical board layout for the pick-and-place simulation.

The 450 mm board is centered on the origin with the three concentric
squares at +/-200, +/-130 and +/-60 mm. Unplaced tokens sit in two
off-board store rows of nine slots (white below, black above), removed
tokens go to a bin, and the arm parks at a home position between
commands. All constants are configuration, overridable via key = value
files.
"""

from dataclasses import dataclass, field

from ..morris import BLACK, POINTS, WHITE

_FILES = "abcdefg"


@dataclass
class BoardGeometry:
    board_mm: float = 450.0
    outer_mm: float = 200.0
    middle_mm: float = 130.0
    inner_mm: float = 60.0
    store_offset_mm: float = 300.0
    store_pitch_mm: float = 50.0
    bin_x_mm: float = 320.0
    bin_y_mm: float = 0.0
    home_x_mm: float = 0.0
    home_y_mm: float = 320.0
    _coords: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        axis = {
            0: -self.outer_mm, 1: -self.middle_mm, 2: -self.inner_mm,
            3: 0.0,
            4: self.inner_mm, 5: self.middle_mm, 6: self.outer_mm,
        }
        coords = {}
        for name in POINTS:
            coords[name] = (axis[_FILES.index(name[0])],
                            axis[int(name[1]) - 1])
        for i in range(9):
            x = -self.outer_mm + i * self.store_pitch_mm
            coords[store_slot(WHITE, i)] = (x, -self.store_offset_mm)
            coords[store_slot(BLACK, i)] = (x, self.store_offset_mm)
        coords["bin"] = (self.bin_x_mm, self.bin_y_mm)
        coords["home"] = (self.home_x_mm, self.home_y_mm)
        self._coords = coords

    def xy(self, location: str) -> tuple[float, float]:
        return self._coords[location]

    def point_coords(self) -> dict[str, tuple[float, float]]:
        return {p: self._coords[p] for p in POINTS}


def store_slot(player: str, index: int) -> str:
    return f"store-{player}-{index}"
