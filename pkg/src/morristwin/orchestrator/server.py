"""Asyncio TCP front end for the orchestrator core.

Two listeners (office-floor clients and shop-floor cells) feed the same
single-threaded core through per-connection reader tasks; a heartbeat
task pings registered cells. Handlers never await network operations, so
the core's single-owner contract holds by construction.
"""

import asyncio
import logging

from .. import protocol
from ..netio import ConnectionClosed, LineChannel
from ..protocol import DecodeError
from .core import BaseSession, Orchestrator, OrchestratorConfig

logger = logging.getLogger(__name__)


class NetSession(BaseSession):
    def __init__(self, channel: LineChannel):
        super().__init__()
        self.channel = channel

    def send(self, kind, body=None, re=None) -> int:
        return self.channel.send(kind, body, re)

    @property
    def endpoint(self) -> str:
        return self.channel.peername


class OrchestratorServer:
    def __init__(self, config: OrchestratorConfig | None = None):
        self.config = config or OrchestratorConfig()
        self.core: Orchestrator | None = None
        self._servers: list[asyncio.Server] = []
        self._tasks: set[asyncio.Task] = set()
        self.it_port = self.config.it_port
        self.ot_port = self.config.ot_port

    async def start(self):
        loop = asyncio.get_running_loop()
        self.core = Orchestrator(
            self.config,
            timer_factory=lambda delay, cb: loop.call_later(delay, cb),
        )
        it_server = await asyncio.start_server(
            self._session, self.config.host, self.config.it_port
        )
        ot_server = await asyncio.start_server(
            self._session, self.config.host, self.config.ot_port
        )
        self._servers = [it_server, ot_server]
        self.it_port = it_server.sockets[0].getsockname()[1]
        self.ot_port = ot_server.sockets[0].getsockname()[1]
        self._spawn(self._heartbeat_loop())
        logger.info("listening on %s:%d (it) and :%d (ot)",
                    self.config.host, self.it_port, self.ot_port)

    def _spawn(self, coro):
        task = asyncio.ensure_future(coro)
        self._tasks.add(task)
        task.add_done_callback(self._tasks.discard)
        return task

    async def _heartbeat_loop(self):
        interval = self.config.heartbeat_ms / 1000.0
        while True:
            await asyncio.sleep(interval)
            self.core.heartbeat_tick()

    async def _session(self, reader, writer):
        channel = LineChannel(reader, writer)
        session = NetSession(channel)
        self.core.attach(session)
        try:
            while True:
                try:
                    env = await channel.recv()
                except DecodeError as exc:
                    channel.send(
                        protocol.ERROR,
                        {"code": protocol.ERR_BAD_FRAME, "detail": str(exc)},
                    )
                    continue
                except ConnectionClosed:
                    break
                self.core.game_server.handle(session, env)
                await channel.drain()
        except (ConnectionError, asyncio.CancelledError):
            pass
        finally:
            self.core.detach(session)
            channel.close()

    async def stop(self):
        for server in self._servers:
            server.close()
            await server.wait_closed()
        for task in list(self._tasks):
            task.cancel()
        await asyncio.gather(*self._tasks, return_exceptions=True)
        if self.core:
            self.core.close()

    def kill(self):
        """Abrupt shutdown, as a crash would leave things: sockets die,
        no clean handshakes, the event log keeps whatever was flushed."""
        for server in self._servers:
            server.close()
        for task in list(self._tasks):
            task.cancel()
        if self.core:
            for session in list(self.core.sessions):
                channel = getattr(session, "channel", None)
                if channel is not None:
                    channel.close()
            self.core.log.close()


async def serve(config: OrchestratorConfig):
    server = OrchestratorServer(config)
    try:
        await server.start()
    except OSError as exc:
        raise SystemExit(f"bind failed: {exc}")
    try:
        await asyncio.Event().wait()
    finally:
        await server.stop()
