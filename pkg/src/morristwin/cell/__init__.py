"""Simulated robot cell: geometry, platform timing, motion planning and
the networked mirror client."""

from .geometry import BoardGeometry, store_slot
from .kinematics import (
    DELTA_PLC,
    PLATFORMS,
    USB_ARM,
    PlatformModel,
    path_length,
    profile_ms,
    travel_ms,
)
from .planner import IllegalLocalMove, MotionPlan, MoveTo, Pick, Place, plan_motion
from .sim import CellConfig, CellSimulator, Fault, parse_fault

__all__ = [
    "BoardGeometry",
    "store_slot",
    "DELTA_PLC",
    "PLATFORMS",
    "USB_ARM",
    "PlatformModel",
    "path_length",
    "profile_ms",
    "travel_ms",
    "IllegalLocalMove",
    "MotionPlan",
    "MoveTo",
    "Pick",
    "Place",
    "plan_motion",
    "CellConfig",
    "CellSimulator",
    "Fault",
    "parse_fault",
]
