"""Networked agent: joins a seat and plays moves chosen by the search
whenever the authoritative state says it is on turn.

A busy rejection (another process still in flight) is retried on the next
state update; any rules rejection means the agent and the orchestrator
disagree about the rules, which is a bug worth crashing on.
"""

import asyncio
import logging
import random
from dataclasses import dataclass

from .. import protocol
from ..morris import decode_state, encode_move
from ..netio import ConnectionClosed, LineChannel, open_channel
from ..protocol import DecodeError
from .evaluate import DEFAULT_WEIGHTS, EvalWeights
from .search import choose_move, choose_random_move

logger = logging.getLogger(__name__)


class AgentRulesMismatch(RuntimeError):
    pass


@dataclass
class AgentResult:
    color: str
    final_status: str
    plies_submitted: int


class AgentClient:
    def __init__(self, host: str, port: int, color: str = "any",
                 depth: int = 3, name: str | None = None,
                 policy: str = "search", seed: int | None = None,
                 weights: EvalWeights = DEFAULT_WEIGHTS):
        self.host = host
        self.port = port
        self.color_pref = color
        self.depth = depth
        self.policy = policy
        self.weights = weights
        self.rng = random.Random(seed)
        self.name = name or f"agent-{policy}-{random.randrange(10**6)}"
        self.color: str | None = None
        self.player: str | None = None
        self.submitted = 0

    def _pick(self, state):
        if self.policy == "random":
            return choose_random_move(state, self.rng)
        return choose_move(state, self.depth, self.weights)

    async def run(self) -> AgentResult:
        channel = await open_channel(self.host, self.port)
        try:
            return await self._play(channel)
        finally:
            channel.close()

    async def _play(self, channel: LineChannel) -> AgentResult:
        channel.send(protocol.HELLO, {"client": self.name})
        channel.send(protocol.JOIN_GAME, {"color": self.color_pref})
        awaiting_verdict = False
        retry = False
        last_update = None
        while True:
            try:
                env = await channel.recv()
            except DecodeError:
                continue
            except ConnectionClosed:
                return AgentResult(self.color or "?", "disconnected",
                                   self.submitted)
            if env.kind == protocol.JOIN_ACK:
                self.color = env.body["color"]
                self.player = "W" if self.color == "white" else "B"
            elif env.kind == protocol.ERROR and self.color is None:
                raise AgentRulesMismatch(f"could not join: {env.body}")
            elif env.kind == protocol.PING:
                channel.send(protocol.PONG, {}, re=env.id)
            elif env.kind == protocol.MOVE_ACCEPTED:
                awaiting_verdict = False
                self.submitted += 1
            elif env.kind == protocol.MOVE_REJECTED:
                awaiting_verdict = False
                reason = env.body["reason"]
                if reason == "busy":
                    retry = True
                else:
                    raise AgentRulesMismatch(
                        f"move rejected with {reason}: rules disagree"
                    )
            elif env.kind == protocol.STATE_UPDATE:
                last_update = env.body
                if env.body["status"] != "ongoing":
                    return AgentResult(self.color or "?",
                                       env.body["status"], self.submitted)
                if (
                    self.player is not None
                    and env.body["to_move"] == self.player
                    and not awaiting_verdict
                ):
                    retry = False
                    state = decode_state(env.body["state"])
                    move = self._pick(state)
                    channel.send(protocol.SUBMIT_MOVE,
                                 {"move": encode_move(move)})
                    awaiting_verdict = True
            elif env.kind == protocol.PROCESS_UPDATE and retry and \
                    last_update is not None and not awaiting_verdict:
                # a busy retry may fire once the blocking process ends
                if env.body["state"] in ("completed", "failed") and \
                        last_update["to_move"] == self.player:
                    state = decode_state(last_update["state"])
                    move = self._pick(state)
                    channel.send(protocol.SUBMIT_MOVE,
                                 {"move": encode_move(move)})
                    awaiting_verdict = True
                    retry = False
            await channel.drain()


async def run_agent(host: str, port: int, color: str = "any",
                    depth: int = 3, policy: str = "search",
                    seed: int | None = None) -> AgentResult:
    agent = AgentClient(host, port, color=color, depth=depth, policy=policy,
                        seed=seed)
    return await agent.run()
