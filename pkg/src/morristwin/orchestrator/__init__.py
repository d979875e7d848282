"""Twin orchestrator: authoritative state, process lifecycle, cell
fan-out and reconciliation."""

from .core import (
    CELL_DIVERGED,
    CELL_EXECUTING,
    CELL_OFFLINE,
    CELL_REGISTERED,
    CELL_SYNCED,
    CellRecord,
    Orchestrator,
    OrchestratorConfig,
    Seat,
)
from .processes import (
    AWAITING,
    COMPLETED,
    DISPATCHING,
    EVENTS,
    FAILED,
    REJECTED,
    RECEIVED,
    STATES,
    TERMINAL,
    VALIDATED,
    ProcessMachine,
    ProcessRecord,
)
from .server import OrchestratorServer, serve

__all__ = [
    "CELL_DIVERGED",
    "CELL_EXECUTING",
    "CELL_OFFLINE",
    "CELL_REGISTERED",
    "CELL_SYNCED",
    "CellRecord",
    "Orchestrator",
    "OrchestratorConfig",
    "Seat",
    "AWAITING",
    "COMPLETED",
    "DISPATCHING",
    "EVENTS",
    "FAILED",
    "REJECTED",
    "RECEIVED",
    "STATES",
    "TERMINAL",
    "VALIDATED",
    "ProcessMachine",
    "ProcessRecord",
    "OrchestratorServer",
    "serve",
]
