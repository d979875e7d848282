"""Human-facing command line client.

Renders the board as ASCII art, accepts canonical move strings and echoes
process transitions plus cell replication status as they stream in. With
--script the session replays a move list instead of prompting, which is
how the integration tests drive it.
"""

import asyncio
import sys

from .. import protocol
from ..morris import POINTS, decode_state
from ..netio import ConnectionClosed, open_channel
from ..protocol import DecodeError

_TEMPLATE = """\
7  {a7}----------{d7}----------{g7}
   |           |           |
6  |   {b6}------{d6}------{f6}   |
   |   |       |       |   |
5  |   |   {c5}--{d5}--{e5}   |   |
   |   |   |       |   |   |
4  {a4}---{b4}---{c4}       {e4}---{f4}---{g4}
   |   |   |       |   |   |
3  |   |   {c3}--{d3}--{e3}   |   |
   |   |       |       |   |
2  |   {b2}------{d2}------{f2}   |
   |           |           |
1  {a1}----------{d1}----------{g1}
   a   b   c   d   e   f   g"""


def render_board(board: str) -> str:
    cells = {p: ("+" if c == "." else c) for p, c in zip(POINTS, board)}
    return _TEMPLATE.format(**cells)


def _print_state(body: dict) -> None:
    state = decode_state(body["state"])
    print(render_board(state.board))
    print(
        f"ply {body['ply']}  to move: {body['to_move']}  "
        f"status: {body['status']}  hands: {state.hand_white}/{state.hand_black}"
    )
    cells = body.get("cells") or {}
    if cells:
        badges = "  ".join(
            f"{cid}[{info['status']}]" for cid, info in sorted(cells.items())
        )
        print(f"cells: {badges}")


async def play_session(host: str, port: int, color: str = "any",
                       script: list[str] | None = None,
                       client_name: str = "play-cli") -> int:
    channel = await open_channel(host, port)
    channel.send(protocol.HELLO, {"client": client_name})
    channel.send(protocol.JOIN_GAME, {"color": color})
    my_color = None
    my_player = None
    scripted = list(script) if script is not None else None
    pending_move = None
    submitted_all = 0

    def submit_next(to_move: str):
        nonlocal pending_move, submitted_all
        if scripted is None or pending_move is not None or not scripted:
            return
        if my_player is not None and to_move == my_player:
            pending_move = scripted.pop(0)
            channel.send(protocol.SUBMIT_MOVE, {"move": pending_move})
            submitted_all += 1

    while True:
        try:
            env = await channel.recv()
        except DecodeError as exc:
            print(f"! bad frame: {exc}")
            continue
        except ConnectionClosed:
            print("connection closed")
            return 1
        if env.kind == protocol.JOIN_ACK:
            my_color = env.body["color"]
            my_player = "W" if my_color == "white" else "B"
            print(f"joined as {my_color} (token {env.body['token']})")
        elif env.kind == protocol.PING:
            channel.send(protocol.PONG, {}, re=env.id)
        elif env.kind == protocol.STATE_UPDATE:
            _print_state(env.body)
            if env.body["status"] != "ongoing":
                print(f"game over: {env.body['status']}")
                return 0
            if scripted is not None:
                if not scripted and pending_move is None:
                    print("script finished")
                    return 0
                submit_next(env.body["to_move"])
            elif my_player is not None and env.body["to_move"] == my_player:
                move = await _prompt()
                if move is None:
                    return 0
                channel.send(protocol.SUBMIT_MOVE, {"move": move})
        elif env.kind == protocol.PROCESS_UPDATE:
            b = env.body
            extra = ""
            if b.get("reason"):
                extra = f" reason={b['reason']}"
            if b.get("failure"):
                extra += f" failure={b['failure']}"
            if b.get("no_cells"):
                extra += " no_cells"
            print(f"process {b['pid']}: {b['state']}{extra}")
        elif env.kind == protocol.MOVE_ACCEPTED:
            print(f"accepted (pid {env.body['pid']})")
            pending_move = None
        elif env.kind == protocol.MOVE_REJECTED:
            print(f"rejected: {env.body['reason']}")
            if scripted is not None:
                return 2
            pending_move = None
        elif env.kind == protocol.ERROR:
            print(f"error: {env.body.get('code')} {env.body.get('detail', '')}")
        await channel.drain()


async def _prompt() -> str | None:
    loop = asyncio.get_running_loop()
    while True:
        try:
            line = await loop.run_in_executor(
                None, input, "move (e.g. P-d1, S-a1-a4xb2) or quit> "
            )
        except EOFError:
            return None
        line = line.strip()
        if line in ("quit", "exit", "q"):
            return None
        if line:
            return line


def read_script(path: str) -> list[str]:
    moves = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                moves.append(line)
    return moves
