"""Append-only JSON-lines event log and event-sourced recovery.

The orchestrator writes one record per durable event: applied moves,
board resets, seat grants and process transitions. Replaying the move and
reset records through the rules engine reproduces the authoritative game
state byte for byte, which is both the crash-recovery path and the audit
that nothing else ever mutated it.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

from .morris import GameState, apply_move, decode_move, initial_state, state_digest


class CorruptLog(Exception):
    pass


class EventLog:
    def __init__(self, path: str | Path | None):
        self.path = Path(path) if path else None
        self._fh = None
        if self.path:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._fh = open(self.path, "a", encoding="utf-8")

    def append(self, record: dict) -> None:
        if self._fh is None:
            return
        self._fh.write(json.dumps(record, separators=(",", ":")) + "\n")
        self._fh.flush()

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None


def read_records(path: str | Path) -> list[dict]:
    records = []
    p = Path(path)
    if not p.exists():
        return records
    with open(p, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise CorruptLog(f"{path}:{lineno}: {exc.msg}") from None
    return records


@dataclass
class Recovery:
    state: GameState
    seats: dict[str, dict] = field(default_factory=dict)  # color -> {client, token}
    last_pid: int = 0
    applied_moves: int = 0
    digests: list[str] = field(default_factory=list)


def recover(path: str | Path) -> Recovery:
    """Fold the log into the authoritative state it encodes, verifying
    each move record's digest along the way."""
    rec = Recovery(state=initial_state())
    for record in read_records(path):
        kind = record.get("ev")
        if kind == "move":
            move = decode_move(record["move"])
            rec.state = apply_move(rec.state, move)
            digest = state_digest(rec.state)
            if record.get("digest") not in (None, digest):
                raise CorruptLog(
                    f"replay digest {digest} != logged {record.get('digest')} "
                    f"at pid {record.get('pid')}"
                )
            rec.digests.append(digest)
            rec.applied_moves += 1
        elif kind == "reset":
            rec.state = initial_state()
            rec.digests.append(state_digest(rec.state))
        elif kind == "seat":
            rec.seats[record["color"]] = {
                "client": record["client"],
                "token": record["token"],
            }
        pid = record.get("pid")
        if isinstance(pid, int):
            rec.last_pid = max(rec.last_pid, pid)
    return rec
