"""Simulated OT robot cell.

Registers with the orchestrator over the OT port, mirrors the game board,
turns incoming move commands into motion plans under its platform model,
sleeps them out in scaled simulated time and reports the resulting mirror
digest. One command executes at a time; the network reader only queues.

Fault injection covers the failure modes the twin must survive: dropping
a command, delaying it, corrupting the local mirror (forced divergence)
and dropping the connection.
"""

import asyncio
import logging
import random
from dataclasses import dataclass, field

from .. import protocol
from ..morris import (
    EMPTY,
    GameState,
    NotationError,
    apply_move,
    decode_move,
    decode_state,
    encode_state,
    initial_state,
    state_digest,
)
from ..netio import ConnectionClosed, LineChannel, open_channel
from ..protocol import DecodeError
from .geometry import BoardGeometry
from .kinematics import PLATFORMS, PlatformModel
from .planner import IllegalLocalMove, plan_motion

logger = logging.getLogger(__name__)

FAULT_DROP = "drop-next-command"
FAULT_DELAY = "delay"
FAULT_CORRUPT = "corrupt-local-state"
FAULT_DISCONNECT = "disconnect"


@dataclass
class Fault:
    kind: str
    ms: int = 0


def parse_fault(spec: str) -> Fault:
    name, _, arg = spec.partition(":")
    if name == FAULT_DROP:
        return Fault(FAULT_DROP)
    if name == FAULT_CORRUPT:
        return Fault(FAULT_CORRUPT)
    if name in (FAULT_DELAY, FAULT_DISCONNECT):
        return Fault(name, int(arg or 0))
    raise ValueError(f"unknown fault spec {spec!r}")


@dataclass
class CellConfig:
    cell_id: str
    platform: str = "delta-plc"
    host: str = "127.0.0.1"
    port: int = 4841
    time_scale: float = 0.0
    reconnect_delay_s: float = 0.2
    geometry: BoardGeometry = field(default_factory=BoardGeometry)
    model: PlatformModel | None = None

    def resolve_model(self) -> PlatformModel:
        if self.model is not None:
            return self.model
        try:
            return PLATFORMS[self.platform]
        except KeyError:
            raise ValueError(f"unknown platform {self.platform!r}") from None


class CellSimulator:
    def __init__(self, config: CellConfig):
        self.config = config
        self.model = config.resolve_model()
        self.mirror = initial_state()
        self.channel: LineChannel | None = None
        self._queue: asyncio.Queue = asyncio.Queue()
        self._faults: list[Fault] = []
        self._rng = random.Random(f"fault-{config.cell_id}")
        self._stopping = False
        self._rejoin_delay_s = 0.0
        self._tasks: list[asyncio.Task] = []
        self.registered = asyncio.Event()
        self.executed_commands = 0
        self.dropped_commands = 0

    # ------------------------------------------------------------ faults

    def inject_fault(self, spec: str | Fault) -> None:
        fault = parse_fault(spec) if isinstance(spec, str) else spec
        if fault.kind == FAULT_CORRUPT:
            self._corrupt_mirror()
            return
        if fault.kind == FAULT_DISCONNECT:
            self._rejoin_delay_s = fault.ms / 1000.0
            self._drop_connection()
            return
        self._faults.append(fault)

    def _corrupt_mirror(self) -> None:
        """Scramble the mirror so the next digest comparison fails."""
        m = self.mirror
        cells = list(m.board)
        occupied = [i for i, c in enumerate(cells) if c != EMPTY]
        hand_white = m.hand_white
        if occupied:
            cells[self._rng.choice(occupied)] = EMPTY
        else:
            hand_white = max(0, hand_white - 1)
        board = "".join(cells)
        key = f"{board}|{hand_white},{m.hand_black}|{m.to_move}"
        self.mirror = GameState(board, hand_white, m.hand_black, m.to_move,
                                m.ply, m.quiet_plies, (key,))
        logger.info("cell %s: mirror corrupted", self.config.cell_id)

    def _drop_connection(self) -> None:
        if self.channel is not None:
            self.channel.close()
            self.channel = None
        self.registered.clear()

    def _take_fault(self, kind: str) -> Fault | None:
        for fault in self._faults:
            if fault.kind == kind:
                self._faults.remove(fault)
                return fault
        return None

    # ------------------------------------------------------------ lifecycle

    async def run(self) -> None:
        executor = asyncio.ensure_future(self._executor_loop())
        self._tasks = [executor]
        try:
            while not self._stopping:
                try:
                    await self._connect_and_read()
                except (ConnectionClosed, ConnectionError, OSError):
                    pass
                self.registered.clear()
                if self._stopping:
                    break
                delay = max(self.config.reconnect_delay_s, self._rejoin_delay_s)
                self._rejoin_delay_s = 0.0
                await asyncio.sleep(delay)
        finally:
            executor.cancel()
            self._drop_connection()

    def stop(self) -> None:
        self._stopping = True
        self._drop_connection()
        for task in self._tasks:
            task.cancel()

    async def _connect_and_read(self) -> None:
        cfg = self.config
        channel = await open_channel(cfg.host, cfg.port)
        self.channel = channel
        gate = protocol.MonotonicGate()
        channel.send(protocol.REGISTER_CELL,
                     {"cell": cfg.cell_id, "platform": cfg.platform})
        await channel.drain()
        while True:
            if self.channel is not channel:
                raise ConnectionClosed()
            try:
                env = await channel.recv()
            except DecodeError as exc:
                logger.warning("cell %s: bad frame: %s", cfg.cell_id, exc)
                continue
            if not gate.accept(env.id):
                channel.send(protocol.ERROR,
                             {"code": protocol.ERR_BAD_MSG_ID}, re=env.id)
                continue
            self._on_envelope(channel, env)
            await channel.drain()

    def _on_envelope(self, channel: LineChannel, env: protocol.Envelope):
        cfg = self.config
        if env.kind == protocol.REGISTER_ACK:
            self.mirror = decode_state(env.body["state"])
            self.registered.set()
            self._report(channel, pid=0, duration_ms=0)
        elif env.kind == protocol.PING:
            channel.send(protocol.PONG, {}, re=env.id)
        elif env.kind == protocol.CELL_COMMAND:
            if self._take_fault(FAULT_DROP):
                self.dropped_commands += 1
                logger.info("cell %s: dropping command pid=%s",
                            cfg.cell_id, env.body.get("pid"))
                return
            channel.send(protocol.CELL_ACK, {"pid": env.body["pid"]},
                         re=env.id)
            self._queue.put_nowait((channel, env))
        elif env.kind == protocol.ERROR:
            logger.warning("cell %s: error from orchestrator: %s",
                           cfg.cell_id, env.body)
        # state/process updates and pongs are noise for a cell

    async def _executor_loop(self) -> None:
        while True:
            channel, env = await self._queue.get()
            try:
                await self._execute_command(channel, env)
            except (ConnectionClosed, ConnectionError):
                pass
            except Exception:
                logger.exception("cell %s: command failed",
                                 self.config.cell_id)

    async def _execute_command(self, channel: LineChannel,
                               env: protocol.Envelope) -> None:
        body = env.body
        pid = body["pid"]
        delay = self._take_fault(FAULT_DELAY)
        if delay is not None:
            await asyncio.sleep(delay.ms / 1000.0)
        command = body["command"]
        if command == protocol.CMD_APPLY_MOVE:
            await self._apply(channel, pid, body["move"], env.id)
        elif command == protocol.CMD_RESYNC_STATE:
            self.mirror = decode_state(body["state"])
            self._report(channel, pid, duration_ms=0, re=env.id)
        elif command == protocol.CMD_RESET_BOARD:
            self.mirror = initial_state()
            self._report(channel, pid, duration_ms=0, re=env.id)
        else:
            channel.send(protocol.ERROR,
                         {"code": "unknown-command", "detail": command},
                         re=env.id)

    async def _apply(self, channel, pid: int, move_text: str, re_id: int):
        try:
            move = decode_move(move_text)
            plan = plan_motion(self.mirror, move, self.config.geometry,
                               self.model)
        except (IllegalLocalMove, NotationError) as exc:
            reason = exc.reason
            logger.warning(
                "cell %s: move %s illegal locally (%s); reporting divergence",
                self.config.cell_id, move_text, reason,
            )
            self._report(channel, pid, duration_ms=0, error=reason, re=re_id)
            return
        if self.config.time_scale > 0:
            await asyncio.sleep(plan.total_ms / 1000.0 * self.config.time_scale)
        self.mirror = apply_move(self.mirror, move)
        self.executed_commands += 1
        self._report(channel, pid, duration_ms=int(plan.total_ms), re=re_id)

    def _report(self, channel: LineChannel, pid: int, duration_ms: int,
                error: str | None = None, re: int | None = None) -> None:
        body = {
            "cell": self.config.cell_id,
            "pid": pid,
            "digest": state_digest(self.mirror),
            "state": encode_state(self.mirror),
            "duration_ms": duration_ms,
        }
        if error is not None:
            body["error"] = error
        channel.send(protocol.CELL_STATE_REPORT, body, re=re)
