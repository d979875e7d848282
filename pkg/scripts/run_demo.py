#!/usr/bin/env python3
"""Self-contained demo: one orchestrator, two simulated robot cells on
different platforms, and two search agents playing a full game.

Prints the board after every applied move together with process and cell
replication status. Use --time-scale to slow the cells down to realistic
motion times, and --divergence to watch a fault being reconciled.

    python scripts/run_demo.py --depth 2 --time-scale 0.0 --divergence
"""

import argparse
import asyncio
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from morristwin import protocol  # noqa: E402
from morristwin.agents.client import AgentClient  # noqa: E402
from morristwin.agents.play import render_board  # noqa: E402
from morristwin.cell.sim import CellConfig, CellSimulator  # noqa: E402
from morristwin.morris import decode_state  # noqa: E402
from morristwin.netio import open_channel  # noqa: E402
from morristwin.orchestrator.core import OrchestratorConfig  # noqa: E402
from morristwin.orchestrator.server import OrchestratorServer  # noqa: E402


async def observer(host: str, port: int, stop: asyncio.Event):
    channel = await open_channel(host, port)
    channel.send(protocol.HELLO, {"client": "demo-observer"})
    last_ply = -1
    while not stop.is_set():
        try:
            env = await asyncio.wait_for(channel.recv(), 1.0)
        except asyncio.TimeoutError:
            continue
        except Exception:
            break
        if env.kind == protocol.PING:
            channel.send(protocol.PONG, {}, re=env.id)
        elif env.kind == protocol.STATE_UPDATE:
            body = env.body
            if body["ply"] != last_ply:
                last_ply = body["ply"]
                state = decode_state(body["state"])
                print()
                print(render_board(state.board))
                cells = ", ".join(
                    f"{cid}={info['status']}"
                    for cid, info in sorted(body.get("cells", {}).items())
                )
                print(f"ply {body['ply']:3d}  last={body.get('last_move')}  "
                      f"status={body['status']}  cells: {cells}")
                if body["status"] != "ongoing":
                    stop.set()
        elif env.kind == protocol.PROCESS_UPDATE:
            b = env.body
            if b["state"] in ("failed",):
                print(f"  !! process {b['pid']} {b['state']} "
                      f"({b.get('failure')})")
    channel.close()


async def main(args) -> int:
    server = OrchestratorServer(OrchestratorConfig(
        it_port=0, ot_port=0, timeout_ms=args.timeout_ms,
        heartbeat_ms=500,
    ))
    await server.start()
    print(f"orchestrator on it:{server.it_port} ot:{server.ot_port}")

    sims = [
        CellSimulator(CellConfig("delta-cell", "delta-plc",
                                 port=server.ot_port,
                                 time_scale=args.time_scale)),
        CellSimulator(CellConfig("arm-cell", "usb-arm",
                                 port=server.ot_port,
                                 time_scale=args.time_scale)),
    ]
    cell_tasks = [asyncio.ensure_future(sim.run()) for sim in sims]
    for sim in sims:
        await sim.registered.wait()
    print("cells registered:", ", ".join(s.config.cell_id for s in sims))

    stop = asyncio.Event()
    obs_task = asyncio.ensure_future(
        observer("127.0.0.1", server.it_port, stop)
    )

    if args.divergence:
        async def saboteur():
            await asyncio.sleep(1.0)
            print("  !! injecting divergence into arm-cell")
            sims[1].inject_fault("corrupt-local-state")
        asyncio.ensure_future(saboteur())

    white = AgentClient("127.0.0.1", server.it_port, color="white",
                        depth=args.depth)
    black = AgentClient("127.0.0.1", server.it_port, color="black",
                        depth=args.depth)
    results = await asyncio.gather(white.run(), black.run())
    try:
        # let the observer catch up to the terminal state update
        await asyncio.wait_for(stop.wait(), 10)
    except asyncio.TimeoutError:
        stop.set()
    await obs_task
    print(f"\nresult: {results[0].final_status}")
    for sim in sims:
        print(f"  {sim.config.cell_id}: executed {sim.executed_commands} "
              f"commands, mirror digest matches: "
              f"{sim.mirror.board == server.core.state.board}")
    for sim in sims:
        sim.stop()
    for task in cell_tasks:
        task.cancel()
    await asyncio.gather(*cell_tasks, return_exceptions=True)
    await server.stop()
    return 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--depth", type=int, default=2)
    parser.add_argument("--time-scale", type=float, default=0.0)
    parser.add_argument("--timeout-ms", type=int, default=5000)
    parser.add_argument("--divergence", action="store_true")
    sys.exit(asyncio.run(main(parser.parse_args())))
