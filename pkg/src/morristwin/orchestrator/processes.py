"""Per-interaction orchestration process state machine.

Every submitted move (and every board reset) spawns one process that
tracks validation, fan-out to cells and confirmation aggregation. The
transition table below is the complete behavior: any (state, event) pair
not listed is ignored with a log line, never an error, so terminal states
absorb stray events such as late cell reports.
"""

import logging
from dataclasses import dataclass, field

logger = logging.getLogger(__name__)

RECEIVED = "received"
VALIDATED = "validated"
REJECTED = "rejected"
DISPATCHING = "dispatching"
AWAITING = "awaiting_confirmations"
COMPLETED = "completed"
FAILED = "failed"

STATES = (RECEIVED, VALIDATED, REJECTED, DISPATCHING, AWAITING, COMPLETED, FAILED)
TERMINAL = frozenset((REJECTED, COMPLETED, FAILED))

EV_VALIDATE_OK = "validate_ok"
EV_VALIDATE_FAIL = "validate_fail"
EV_DISPATCH = "dispatch"
EV_DISPATCHED = "dispatched"
EV_REPORT_MATCH = "report_match"
EV_REPORT_MISMATCH = "report_mismatch"
EV_CELL_OFFLINE = "cell_offline"
EV_CELL_FAULT = "cell_fault"
EV_TIMEOUT = "timeout"

EVENTS = (
    EV_VALIDATE_OK,
    EV_VALIDATE_FAIL,
    EV_DISPATCH,
    EV_DISPATCHED,
    EV_REPORT_MATCH,
    EV_REPORT_MISMATCH,
    EV_CELL_OFFLINE,
    EV_CELL_FAULT,
    EV_TIMEOUT,
)

FAIL_TIMED_OUT = "timed-out"
FAIL_CELL_FAULT = "cell-fault"


@dataclass
class ProcessRecord:
    pid: int
    move_text: str
    initiator: str
    created_at: int
    updated_at: int
    state: str = RECEIVED
    reason: str | None = None
    pending: set[str] = field(default_factory=set)
    resulting_state: str | None = None
    resulting_digest: str | None = None
    no_cells: bool = False
    failure: str | None = None
    failed_cells: tuple[str, ...] = ()
    trace: list[str] = field(default_factory=lambda: [RECEIVED])

    @property
    def terminal(self) -> bool:
        return self.state in TERMINAL


@dataclass(frozen=True, slots=True)
class StepOutcome:
    applied: bool
    state: str
    note: str | None = None

    @property
    def ignored(self) -> bool:
        return not self.applied


class ProcessMachine:
    """Pure transition logic; side effects (sending commands, publishing,
    timers) belong to the orchestrator driving it."""

    def __init__(self):
        self.transitions = {
            (RECEIVED, EV_VALIDATE_OK): self._validate_ok,
            (RECEIVED, EV_VALIDATE_FAIL): self._validate_fail,
            (VALIDATED, EV_DISPATCH): self._dispatch,
            (DISPATCHING, EV_DISPATCHED): self._dispatched,
            (AWAITING, EV_REPORT_MATCH): self._report_match,
            (AWAITING, EV_REPORT_MISMATCH): self._report_mismatch,
            (AWAITING, EV_CELL_OFFLINE): self._cell_offline,
            (AWAITING, EV_CELL_FAULT): self._cell_fault,
            (AWAITING, EV_TIMEOUT): self._timeout,
        }

    def step(self, proc: ProcessRecord, event: str, *, now: int = 0,
             cell: str | None = None, pending: set[str] | None = None,
             reason: str | None = None, no_cells: bool = False) -> StepOutcome:
        handler = self.transitions.get((proc.state, event))
        if handler is None:
            logger.info(
                "process %d: ignoring %s in state %s", proc.pid, event, proc.state
            )
            return StepOutcome(False, proc.state, "ignored")
        before = proc.state
        handler(proc, cell=cell, pending=pending, reason=reason,
                no_cells=no_cells)
        proc.updated_at = now
        if proc.state != before:
            proc.trace.append(proc.state)
        return StepOutcome(True, proc.state)

    def _validate_ok(self, proc, **_):
        proc.state = VALIDATED

    def _validate_fail(self, proc, reason=None, **_):
        proc.state = REJECTED
        proc.reason = reason

    def _dispatch(self, proc, **_):
        proc.state = DISPATCHING

    def _dispatched(self, proc, pending=None, no_cells=False, **_):
        proc.pending = set(pending or ())
        if proc.pending:
            proc.state = AWAITING
        else:
            proc.state = COMPLETED
            proc.no_cells = no_cells

    def _report_match(self, proc, cell=None, **_):
        proc.pending.discard(cell)
        if not proc.pending:
            proc.state = COMPLETED

    def _report_mismatch(self, proc, cell=None, **_):
        # cell stays pending; the orchestrator resyncs it and waits for a
        # fresh report
        pass

    def _cell_offline(self, proc, cell=None, **_):
        proc.pending.discard(cell)
        if not proc.pending:
            proc.state = COMPLETED

    def _cell_fault(self, proc, cell=None, **_):
        proc.state = FAILED
        proc.failure = FAIL_CELL_FAULT
        proc.failed_cells = (cell,) if cell else tuple(proc.pending)

    def _timeout(self, proc, **_):
        proc.state = FAILED
        proc.failure = FAIL_TIMED_OUT
        proc.failed_cells = tuple(sorted(proc.pending))
