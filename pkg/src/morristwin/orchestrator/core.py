"""The twin orchestrator: owns the authoritative game state, spawns one
orchestration process per interaction, fans commands out to registered
cells and reconciles their reported mirrors back into agreement.

The core is transport-agnostic and single-threaded by contract: all
methods must be called from one owner (the server's event loop). Sessions
are small adapters exposing send(); timers come in through an injectable
`timer_factory` so unit tests can drive timeouts by hand.

Internally the work is split across four components: the game server
(wire multiplexing), the move provider (seat checks, validation,
authoritative apply), the move executor (fan-out and timeout arming) and
the data aggregator (report matching, divergence handling, resync).
"""

import itertools
import logging
import secrets
from dataclasses import dataclass, field

from .. import infomodel, protocol
from ..eventlog import EventLog, recover
from ..infomodel import AddressSpace
from ..morris import (
    BLACK,
    ONGOING,
    WHITE,
    GameState,
    apply_move,
    decode_move,
    encode_move,
    encode_state,
    game_status,
    initial_state,
    state_digest,
    validate_move,
)
from ..protocol import now_ms
from .processes import (
    AWAITING,
    EV_CELL_FAULT,
    EV_CELL_OFFLINE,
    EV_DISPATCH,
    EV_DISPATCHED,
    EV_REPORT_MATCH,
    EV_REPORT_MISMATCH,
    EV_TIMEOUT,
    EV_VALIDATE_FAIL,
    EV_VALIDATE_OK,
    ProcessMachine,
    ProcessRecord,
)

logger = logging.getLogger(__name__)

COLOR_TO_PLAYER = {"white": WHITE, "black": BLACK}
PLAYER_TO_COLOR = {WHITE: "white", BLACK: "black"}

REASON_NO_SEAT = "no-seat"
REASON_NOT_YOUR_TURN = "not-your-turn"
REASON_BUSY = "busy"

CELL_REGISTERED = "registered"
CELL_EXECUTING = "executing"
CELL_SYNCED = "synced"
CELL_DIVERGED = "diverged"
CELL_OFFLINE = "offline"

MISSED_PONG_LIMIT = 3


@dataclass
class OrchestratorConfig:
    host: str = "127.0.0.1"
    it_port: int = 4840
    ot_port: int = 4841
    timeout_ms: int = 10_000
    heartbeat_ms: int = 2_000
    log_file: str | None = None
    server_name: str = "morristwin"


@dataclass
class Seat:
    color: str  # "white" | "black"
    holder: str | None = None
    token: str | None = None


@dataclass
class CellRecord:
    cell_id: str
    platform: str
    endpoint: str = "?"
    status: str = CELL_REGISTERED
    last_report_digest: str | None = None
    last_report_state: str = ""
    session: object = None
    missed_pongs: int = 0
    resync_inflight: bool = False

    @property
    def online(self) -> bool:
        return self.session is not None and self.status != CELL_OFFLINE


class _SessionCounter:
    _ids = itertools.count(1)


class BaseSession:
    """What the core needs from a connection; the TCP server and the test
    fakes both provide this."""

    def __init__(self):
        self.sid = next(_SessionCounter._ids)
        self.client_id: str | None = None
        self.said_hello = False
        self.gate = protocol.MonotonicGate()

    def send(self, kind: str, body: dict | None = None,
             re: int | None = None) -> int:
        raise NotImplementedError

    @property
    def endpoint(self) -> str:
        return f"session-{self.sid}"


class Orchestrator:
    def __init__(self, config: OrchestratorConfig | None = None,
                 timer_factory=None):
        self.config = config or OrchestratorConfig()
        self._timer_factory = timer_factory
        self.space = AddressSpace()
        self.machine = ProcessMachine()
        self.processes: dict[int, ProcessRecord] = {}
        self.cells: dict[str, CellRecord] = {}
        self.seats = {"white": Seat("white"), "black": Seat("black")}
        self.sessions: list[BaseSession] = []
        self.inflight_pid: int | None = None
        self._timers: dict[int, object] = {}
        self._next_pid = 1

        self.state = initial_state()
        self.digest_history = [state_digest(self.state)]
        self.last_move_text = ""

        if self.config.log_file:
            recovery = recover(self.config.log_file)
            if recovery.applied_moves or recovery.seats or recovery.last_pid:
                self.state = recovery.state
                self._next_pid = recovery.last_pid + 1
                for color, info in recovery.seats.items():
                    self.seats[color] = Seat(color, info["client"], info["token"])
                self.digest_history = [state_digest(self.state)]
                logger.info(
                    "recovered state at ply %d from %s",
                    self.state.ply, self.config.log_file,
                )
        self.log = EventLog(self.config.log_file)

        self._boot_address_space()

        self.game_server = GameServer(self)
        self.move_provider = MoveProvider(self)
        self.move_executor = MoveExecutor(self)
        self.data_aggregator = DataAggregator(self)

    # ------------------------------------------------------------ plumbing

    def _boot_address_space(self):
        st = game_status(self.state)
        self.space.define("/game/state/board", infomodel.STATE_BLOB,
                          encode_state(self.state))
        self.space.define("/game/state/status", infomodel.TEXT, _status_text(st))
        self.space.define("/game/state/to_move", infomodel.TEXT,
                          self.state.to_move)
        self.space.define("/game/last_move", infomodel.MOVE_BLOB,
                          self.last_move_text)
        self.space.define("/game/ply", infomodel.INTEGER, self.state.ply)
        for color in ("white", "black"):
            self.space.define(f"/players/{color}", infomodel.TEXT,
                              self.seats[color].holder or "open")

    def close(self):
        for handle in self._timers.values():
            self._cancel_timer(handle)
        self._timers.clear()
        self.log.close()

    def attach(self, session: BaseSession):
        self.sessions.append(session)

    def detach(self, session: BaseSession):
        if session in self.sessions:
            self.sessions.remove(session)
        for cell in self.cells.values():
            if cell.session is session:
                cell.session = None
                self._cell_offline(cell)

    def authoritative_digest(self) -> str:
        return state_digest(self.state)

    def quiescent(self) -> bool:
        busy = self.inflight_pid is not None
        unsynced = any(
            c.online and c.last_report_digest != self.authoritative_digest()
            for c in self.cells.values()
        )
        return not busy and not unsynced

    def _spawn_process(self, move_text: str, initiator: str) -> ProcessRecord:
        pid = self._next_pid
        self._next_pid += 1
        now = now_ms()
        proc = ProcessRecord(pid, move_text, initiator, now, now)
        self.processes[pid] = proc
        self._publish_process(proc)
        self._broadcast_process(proc)
        return proc

    def _step(self, proc: ProcessRecord, event: str, **kw):
        outcome = self.machine.step(proc, event, now=now_ms(), **kw)
        if outcome.applied:
            self.log.append(
                {"ev": "process", "pid": proc.pid, "state": proc.state,
                 "t": proc.updated_at}
            )
            self._publish_process(proc)
            self._broadcast_process(proc)
            if proc.terminal:
                self._finalize(proc)
        return outcome

    def _finalize(self, proc: ProcessRecord):
        if self.inflight_pid == proc.pid:
            self.inflight_pid = None
        handle = self._timers.pop(proc.pid, None)
        if handle is not None:
            self._cancel_timer(handle)

    def _arm_timer(self, pid: int):
        if self._timer_factory is None:
            return
        handle = self._timer_factory(
            self.config.timeout_ms / 1000.0,
            lambda: self.on_process_timeout(pid),
        )
        self._timers[pid] = handle

    @staticmethod
    def _cancel_timer(handle):
        cancel = getattr(handle, "cancel", None)
        if cancel:
            cancel()

    def _advance_state(self, new_state: GameState, pid: int,
                       move_text: str | None):
        """The only way the authoritative state ever changes."""
        self.state = new_state
        digest = state_digest(new_state)
        self.digest_history.append(digest)
        if move_text is None:
            self.log.append({"ev": "reset", "pid": pid, "t": now_ms()})
            self.last_move_text = ""
        else:
            self.log.append(
                {"ev": "move", "pid": pid, "move": move_text,
                 "digest": digest, "ply": new_state.ply, "t": now_ms()}
            )
            self.last_move_text = move_text
        self._publish_game()
        self._broadcast_state()

    # ------------------------------------------------------------ publishing

    def _publish_game(self):
        st = game_status(self.state)
        self.space.write("/game/state/board", encode_state(self.state))
        self.space.write("/game/state/status", _status_text(st))
        self.space.write("/game/state/to_move", self.state.to_move)
        self.space.write("/game/last_move", self.last_move_text)
        self.space.write("/game/ply", self.state.ply)

    def _publish_seat(self, seat: Seat):
        self.space.publish(f"/players/{seat.color}", infomodel.TEXT,
                           seat.holder or "open")

    def _publish_process(self, proc: ProcessRecord):
        base = f"/processes/{proc.pid}"
        self.space.publish(f"{base}/state", infomodel.TEXT, proc.state)
        self.space.publish(f"{base}/updated_at", infomodel.TIMESTAMP,
                           proc.updated_at)

    def _publish_cell(self, cell: CellRecord):
        base = f"/cells/{cell.cell_id}"
        self.space.publish(f"{base}/status", infomodel.TEXT, cell.status)
        self.space.publish(f"{base}/platform", infomodel.TEXT, cell.platform)
        self.space.publish(f"{base}/last_report", infomodel.STATE_BLOB,
                           cell.last_report_state)

    def _state_update_body(self) -> dict:
        st = game_status(self.state)
        return {
            "state": encode_state(self.state),
            "digest": self.authoritative_digest(),
            "status": _status_text(st),
            "to_move": self.state.to_move,
            "ply": self.state.ply,
            "last_move": self.last_move_text or None,
            "players": {
                c: (self.seats[c].holder or "open") for c in ("white", "black")
            },
            "cells": {
                c.cell_id: {"status": c.status, "platform": c.platform}
                for c in self.cells.values()
            },
        }

    def _process_update_body(self, proc: ProcessRecord) -> dict:
        body = {
            "pid": proc.pid,
            "state": proc.state,
            "move": proc.move_text,
            "pending": sorted(proc.pending),
            "updated_at": proc.updated_at,
        }
        if proc.reason is not None:
            body["reason"] = proc.reason
        if proc.failure is not None:
            body["failure"] = proc.failure
        if proc.no_cells:
            body["no_cells"] = True
        if proc.resulting_digest is not None:
            body["digest"] = proc.resulting_digest
        return body

    def _observers(self):
        return [s for s in self.sessions if s.said_hello]

    def _broadcast_state(self):
        body = self._state_update_body()
        for session in self._observers():
            session.send(protocol.STATE_UPDATE, body)

    def _broadcast_process(self, proc: ProcessRecord):
        body = self._process_update_body(proc)
        for session in self._observers():
            session.send(protocol.PROCESS_UPDATE, body)

    def _cell_status(self, cell: CellRecord, status: str):
        if cell.status != status:
            cell.status = status
            self._publish_cell(cell)
            self._broadcast_state()
        else:
            self._publish_cell(cell)

    # ------------------------------------------------------------ seats

    def join(self, session: BaseSession, color_pref: str,
             token: str | None) -> tuple[str, str] | None:
        """First-come seat assignment; a valid token reclaims its seat.
        Returns (color, token) or None when no seat is available."""
        if token:
            for seat in self.seats.values():
                if seat.token == token:
                    seat.holder = session.client_id or seat.holder
                    session.client_id = seat.holder
                    self._publish_seat(seat)
                    return seat.color, seat.token
            return None
        if session.client_id is None:
            session.client_id = f"client-{session.sid}"
        wanted = [color_pref] if color_pref in self.seats else ["white", "black"]
        for color in wanted:
            seat = self.seats[color]
            if seat.holder is None:
                seat.holder = session.client_id
                seat.token = secrets.token_hex(8)
                self.log.append(
                    {"ev": "seat", "color": color, "client": seat.holder,
                     "token": seat.token, "t": now_ms()}
                )
                self._publish_seat(seat)
                self._broadcast_state()
                return seat.color, seat.token
        return None

    def seat_of(self, client_id: str | None) -> Seat | None:
        if client_id is None:
            return None
        for seat in self.seats.values():
            if seat.holder == client_id:
                return seat
        return None

    # ------------------------------------------------------------ cells

    def register_cell(self, session: BaseSession, cell_id: str,
                      platform: str) -> tuple[CellRecord, bool]:
        cell = self.cells.get(cell_id)
        rejoin = cell is not None
        if cell is None:
            cell = CellRecord(cell_id, platform, session.endpoint)
            self.cells[cell_id] = cell
        cell.platform = platform
        cell.endpoint = session.endpoint
        cell.session = session
        cell.missed_pongs = 0
        cell.resync_inflight = False
        session.client_id = f"cell:{cell_id}"
        self._cell_status(cell, CELL_REGISTERED)
        self._broadcast_state()
        return cell, rejoin

    def _cell_offline(self, cell: CellRecord):
        if cell.status == CELL_OFFLINE:
            return
        logger.info("cell %s offline", cell.cell_id)
        self._cell_status(cell, CELL_OFFLINE)
        if self.inflight_pid is not None:
            proc = self.processes[self.inflight_pid]
            if proc.state == AWAITING and cell.cell_id in proc.pending:
                self._step(proc, EV_CELL_OFFLINE, cell=cell.cell_id)

    def heartbeat_tick(self):
        for cell in self.cells.values():
            if cell.session is None or cell.status == CELL_OFFLINE:
                continue
            if cell.missed_pongs >= MISSED_PONG_LIMIT:
                self._cell_offline(cell)
                continue
            cell.session.send(protocol.PING, {})
            cell.missed_pongs += 1

    def on_pong(self, session: BaseSession):
        for cell in self.cells.values():
            if cell.session is session:
                cell.missed_pongs = 0
                if cell.status == CELL_OFFLINE:
                    # back from the dead before re-registering
                    self._cell_status(cell, CELL_REGISTERED)
                    self.resync_cell(cell, pid=0)

    def resync_cell(self, cell: CellRecord, pid: int):
        if cell.session is None or cell.resync_inflight:
            return
        cell.resync_inflight = True
        cell.session.send(
            protocol.CELL_COMMAND,
            {
                "command": protocol.CMD_RESYNC_STATE,
                "pid": pid,
                "state": encode_state(self.state),
                "expect_digest": self.authoritative_digest(),
            },
        )

    # ------------------------------------------------------------ game ops

    def reset_game(self, initiator: str = "admin") -> int:
        """Administrative board reset, fanned out as its own process.
        Not part of the wire vocabulary; exposed to embedding code."""
        if self.inflight_pid is not None:
            raise RuntimeError("cannot reset while a process is in flight")
        proc = self._spawn_process("reset", initiator)
        self._step(proc, EV_VALIDATE_OK)
        self._advance_state(initial_state(), proc.pid, None)
        proc.resulting_state = encode_state(self.state)
        proc.resulting_digest = self.authoritative_digest()
        self.move_executor.dispatch(proc.pid, command=protocol.CMD_RESET_BOARD)
        return proc.pid

    def on_process_timeout(self, pid: int):
        proc = self.processes.get(pid)
        if proc is None:
            return
        stale = set(proc.pending)
        outcome = self._step(proc, EV_TIMEOUT)
        if outcome.applied:
            logger.warning(
                "process %d timed out waiting for %s", pid, sorted(stale)
            )
            for cell_id in stale:
                cell = self.cells.get(cell_id)
                if cell is not None and cell.online:
                    self._cell_status(cell, CELL_DIVERGED)
                    self.resync_cell(cell, pid)


def _status_text(st) -> str:
    if st.outcome == ONGOING:
        return "ongoing"
    if st.outcome == "won":
        return f"won:{PLAYER_TO_COLOR[st.winner]}:{st.reason}"
    return f"draw:{st.reason}"


class GameServer:
    """Single wire entry point: multiplexes envelopes to the other three
    components and answers protocol-level errors."""

    def __init__(self, core: Orchestrator):
        self.core = core

    def handle(self, session: BaseSession, env: protocol.Envelope):
        if not session.gate.accept(env.id):
            session.send(
                protocol.ERROR,
                {"code": protocol.ERR_BAD_MSG_ID,
                 "detail": f"id {env.id} not monotonic"},
                re=env.id,
            )
            return
        handler = {
            protocol.HELLO: self._hello,
            protocol.JOIN_GAME: self._join,
            protocol.SUBMIT_MOVE: self._submit,
            protocol.REGISTER_CELL: self._register_cell,
            protocol.CELL_ACK: self._cell_ack,
            protocol.CELL_STATE_REPORT: self._report,
            protocol.PING: self._ping,
            protocol.PONG: self._pong,
            protocol.ERROR: self._peer_error,
        }.get(env.kind)
        if handler is None:
            session.send(
                protocol.ERROR,
                {"code": protocol.ERR_UNKNOWN_KIND, "detail": env.kind},
                re=env.id,
            )
            return
        handler(session, env)

    def _hello(self, session, env):
        session.client_id = env.body["client"]
        session.said_hello = True
        session.send(
            protocol.HELLO_ACK,
            {"server": self.core.config.server_name, "time": now_ms()},
            re=env.id,
        )
        # subscribe-time snapshot
        session.send(protocol.STATE_UPDATE, self.core._state_update_body())

    def _join(self, session, env):
        granted = self.core.join(session, env.body["color"],
                                 env.body.get("token"))
        if granted is None:
            session.send(
                protocol.ERROR,
                {"code": "no-seat-available"},
                re=env.id,
            )
            return
        color, token = granted
        session.send(protocol.JOIN_ACK, {"color": color, "token": token},
                     re=env.id)
        # fresh snapshot after the ack so the seat holder can act on it
        session.send(protocol.STATE_UPDATE, self.core._state_update_body())

    def _submit(self, session, env):
        self.core.move_provider.submit(session, env.body["move"], env.id)

    def _register_cell(self, session, env):
        cell, rejoin = self.core.register_cell(session, env.body["cell"],
                                               env.body["platform"])
        session.send(
            protocol.REGISTER_ACK,
            {
                "cell": cell.cell_id,
                "state": encode_state(self.core.state),
                "digest": self.core.authoritative_digest(),
            },
            re=env.id,
        )
        if rejoin:
            # a reconnecting cell mirrors whatever it missed
            self.core.resync_cell(cell, pid=0)

    def _cell_ack(self, session, env):
        for cell in self.core.cells.values():
            if cell.session is session and cell.status not in (
                CELL_OFFLINE,
            ):
                self.core._cell_status(cell, CELL_EXECUTING)
                return

    def _report(self, session, env):
        self.core.data_aggregator.on_report(session, env)

    def _ping(self, session, env):
        session.send(protocol.PONG, {}, re=env.id)

    def _pong(self, session, env):
        self.core.on_pong(session)

    def _peer_error(self, session, env):
        # a cell answering a command with an error is a cell fault
        logger.warning("peer error from %s: %s", session.endpoint, env.body)
        if self.core.inflight_pid is None:
            return
        proc = self.core.processes[self.core.inflight_pid]
        for cell in self.core.cells.values():
            if cell.session is session and cell.cell_id in proc.pending:
                self.core._step(proc, EV_CELL_FAULT, cell=cell.cell_id)
                return


class MoveProvider:
    """Intake: seat and turn checks, rules validation, optimistic apply to
    the authoritative state."""

    def __init__(self, core: Orchestrator):
        self.core = core

    def submit(self, session: BaseSession, move_text: str,
               request_id: int | None = None) -> ProcessRecord:
        core = self.core
        proc = core._spawn_process(move_text, session.client_id or "?")

        def reject(reason: str):
            core._step(proc, EV_VALIDATE_FAIL, reason=reason)
            session.send(
                protocol.MOVE_REJECTED,
                {"pid": proc.pid, "reason": reason},
                re=request_id,
            )
            return proc

        seat = core.seat_of(session.client_id)
        if seat is None:
            return reject(REASON_NO_SEAT)
        if core.inflight_pid is not None:
            return reject(REASON_BUSY)
        if COLOR_TO_PLAYER[seat.color] != core.state.to_move:
            return reject(REASON_NOT_YOUR_TURN)
        try:
            move = decode_move(move_text)
        except Exception:
            return reject("malformed-move")
        verdict = validate_move(core.state, move)
        if not verdict.ok:
            return reject(verdict.reason)

        core._step(proc, EV_VALIDATE_OK)
        core._advance_state(apply_move(core.state, move), proc.pid,
                            encode_move(move))
        proc.resulting_state = encode_state(core.state)
        proc.resulting_digest = core.authoritative_digest()
        core.inflight_pid = proc.pid
        session.send(
            protocol.MOVE_ACCEPTED,
            {
                "pid": proc.pid,
                "ply": core.state.ply,
                "state": proc.resulting_state,
                "digest": proc.resulting_digest,
            },
            re=request_id,
        )
        core.move_executor.dispatch(proc.pid)
        return proc


class MoveExecutor:
    """Fan-out: pushes the accepted command to every online cell and arms
    the per-process timeout."""

    def __init__(self, core: Orchestrator):
        self.core = core

    def dispatch(self, pid: int, command: str = protocol.CMD_APPLY_MOVE):
        core = self.core
        proc = core.processes[pid]
        core._step(proc, EV_DISPATCH)
        online = [c for c in core.cells.values() if c.online]
        for cell in online:
            body = {
                "command": command,
                "pid": pid,
                "expect_digest": proc.resulting_digest,
            }
            if command == protocol.CMD_APPLY_MOVE:
                body["move"] = proc.move_text
            cell.session.send(protocol.CELL_COMMAND, body)
        pending = {c.cell_id for c in online}
        core._step(proc, EV_DISPATCHED, pending=pending,
                   no_cells=not pending)
        if proc.state == AWAITING:
            core.inflight_pid = pid
            core._arm_timer(pid)
        else:
            core.inflight_pid = None


class DataAggregator:
    """Confirmation matching: compares reported digests against the
    expected authoritative digest, marks divergence and triggers resync."""

    def __init__(self, core: Orchestrator):
        self.core = core

    def on_report(self, session: BaseSession, env: protocol.Envelope):
        core = self.core
        body = env.body
        cell = core.cells.get(body["cell"])
        if cell is None:
            session.send(
                protocol.ERROR,
                {"code": protocol.ERR_UNKNOWN_CELL, "detail": body["cell"]},
                re=env.id,
            )
            return
        pid = body["pid"]
        if pid != 0 and pid not in core.processes:
            logger.warning("report for unknown process %d from %s", pid,
                           cell.cell_id)
            session.send(
                protocol.ERROR,
                {"code": protocol.ERR_UNKNOWN_PROCESS, "detail": str(pid)},
                re=env.id,
            )
            return

        digest = body["digest"]
        cell.last_report_digest = digest
        cell.last_report_state = body.get("state", "")
        cell.resync_inflight = False

        proc = core.processes.get(pid)
        if proc is not None and proc.state == AWAITING and \
                cell.cell_id in proc.pending:
            if digest == proc.resulting_digest:
                core._cell_status(cell, CELL_SYNCED)
                core._step(proc, EV_REPORT_MATCH, cell=cell.cell_id)
            else:
                logger.warning(
                    "cell %s diverged on pid %d (%s != %s)",
                    cell.cell_id, pid, digest, proc.resulting_digest,
                )
                core._cell_status(cell, CELL_DIVERGED)
                core._step(proc, EV_REPORT_MISMATCH, cell=cell.cell_id)
                core.resync_cell(cell, pid)
            return

        if proc is not None and proc.terminal:
            # late report for a finished process: absorbed with a log line
            core.machine.step(proc, EV_REPORT_MATCH
                              if digest == proc.resulting_digest
                              else EV_REPORT_MISMATCH, cell=cell.cell_id)
        # reconcile against the current authoritative state
        if digest == core.authoritative_digest():
            core._cell_status(cell, CELL_SYNCED)
        else:
            core._cell_status(cell, CELL_DIVERGED)
            core.resync_cell(cell, pid)
