"""Command line entry points: orchestrator, cell, agent and play."""

import argparse
import asyncio
import logging
import sys

from .agents.client import run_agent
from .agents.play import play_session, read_script
from .cell.sim import CellConfig, CellSimulator
from .config import apply_overrides, parse_kv_file
from .orchestrator.core import OrchestratorConfig
from .orchestrator.server import serve


def _split_endpoint(text: str) -> tuple[str, int]:
    host, _, port = text.rpartition(":")
    if not host or not port.isdigit():
        raise argparse.ArgumentTypeError(
            f"expected host:port, got {text!r}"
        )
    return host, int(port)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="morristwin",
        description="Nine Men's Morris digital-twin playground",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    orch = sub.add_parser("orchestrator", help="run the twin orchestrator")
    orch.add_argument("--it-port", type=int, default=None)
    orch.add_argument("--ot-port", type=int, default=None)
    orch.add_argument("--host", default=None)
    orch.add_argument("--timeout-ms", type=int, default=None)
    orch.add_argument("--heartbeat-ms", type=int, default=None)
    orch.add_argument("--log-file", default=None)
    orch.add_argument("--config", default=None, help="key = value file")

    cell = sub.add_parser("cell", help="run a simulated robot cell")
    cell.add_argument("--orchestrator", type=_split_endpoint,
                      default=("127.0.0.1", 4841), metavar="HOST:PORT")
    cell.add_argument("--cell-id", required=True)
    cell.add_argument("--platform", choices=("delta-plc", "usb-arm"),
                      default="delta-plc")
    cell.add_argument("--time-scale", type=float, default=0.0)
    cell.add_argument("--fault", action="append", default=[],
                      help="drop-next-command | delay:MS | "
                           "corrupt-local-state | disconnect:MS")
    cell.add_argument("--config", default=None,
                      help="geometry/kinematics overrides")

    agent = sub.add_parser("agent", help="run a search-driven player")
    agent.add_argument("--endpoint", type=_split_endpoint,
                       default=("127.0.0.1", 4840), metavar="HOST:PORT")
    agent.add_argument("--depth", type=int, default=3)
    agent.add_argument("--color", choices=("white", "black", "any"),
                       default="any")
    agent.add_argument("--policy", choices=("search", "random"),
                       default="search")
    agent.add_argument("--seed", type=int, default=None)

    play = sub.add_parser("play", help="interactive or scripted client")
    play.add_argument("--endpoint", type=_split_endpoint,
                      default=("127.0.0.1", 4840), metavar="HOST:PORT")
    play.add_argument("--color", choices=("white", "black", "any"),
                      default="any")
    play.add_argument("--script", default=None,
                      help="file with one canonical move per line")
    return parser


def _orchestrator_config(args) -> OrchestratorConfig:
    config = OrchestratorConfig()
    if args.config:
        apply_overrides(config, parse_kv_file(args.config))
    for flag in ("it_port", "ot_port", "host", "timeout_ms", "heartbeat_ms",
                 "log_file"):
        value = getattr(args, flag)
        if value is not None:
            setattr(config, flag, value)
    return config


def main(argv=None) -> int:
    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        if args.command == "orchestrator":
            asyncio.run(serve(_orchestrator_config(args)))
        elif args.command == "cell":
            host, port = args.orchestrator
            config = CellConfig(
                cell_id=args.cell_id,
                platform=args.platform,
                host=host,
                port=port,
                time_scale=args.time_scale,
            )
            if args.config:
                apply_overrides(config.geometry, parse_kv_file(args.config))
            sim = CellSimulator(config)
            for spec in args.fault:
                sim.inject_fault(spec)
            asyncio.run(sim.run())
        elif args.command == "agent":
            host, port = args.endpoint
            result = asyncio.run(
                run_agent(host, port, color=args.color, depth=args.depth,
                          policy=args.policy, seed=args.seed)
            )
            print(f"agent finished: {result.final_status} "
                  f"({result.plies_submitted} moves as {result.color})")
        elif args.command == "play":
            host, port = args.endpoint
            script = read_script(args.script) if args.script else None
            return asyncio.run(
                play_session(host, port, color=args.color, script=script)
            )
    except KeyboardInterrupt:
        return 130
    except SystemExit as exc:
        if exc.code and not isinstance(exc.code, int):
            print(exc.code, file=sys.stderr)
            return 1
        raise
    return 0


if __name__ == "__main__":
    sys.exit(main())
