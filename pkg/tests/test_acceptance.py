"""Acceptance suite: one test per acceptance criterion, each printing a
PASS line with its measured numbers. Tolerances and budgets are pinned
here, not configurable."""

import asyncio
import itertools
import json
import random
import time

import pytest

from morristwin import protocol
from morristwin.agents import choose_move, choose_random_move
from morristwin.morris import (
    ONGOING,
    Move,
    POINTS,
    apply_move,
    encode_move,
    game_status,
    initial_state,
    legal_moves,
    perft,
    state_digest,
    validate_move,
)
from morristwin.orchestrator.processes import (
    COMPLETED,
    EVENTS,
    STATES,
    TERMINAL,
    ProcessMachine,
    ProcessRecord,
)
from nethelpers import (
    WireClient,
    drive_scripted_game,
    running_cells,
    start_cell,
    start_server,
    wait_for,
    wait_quiescent,
)
from oracles import oracle_perft, random_playout
from test_protocol import _random_envelope


def ok(name: str, detail: str = ""):
    print(f"\n[ACCEPTANCE] {name}: PASS {detail}".rstrip())


def run(coro, timeout=120):
    return asyncio.run(asyncio.wait_for(coro, timeout))


# ----------------------------------------------------------------------
# Rules-oracle equivalence: perft 1-4 against the independent enumerator,
# under 60 s; depth 1 is 24 by rule.
# ----------------------------------------------------------------------


def test_rules_oracle_equivalence():
    budget_s = 60.0
    start = time.monotonic()
    s = initial_state()
    engine = {d: perft(s, d) for d in (1, 2, 3, 4)}
    oracle = {d: oracle_perft(s, d) for d in (1, 2, 3, 4)}
    elapsed = time.monotonic() - start
    assert engine[1] == 24
    assert engine == oracle
    assert elapsed < budget_s, f"took {elapsed:.1f}s"
    ok("rules-oracle equivalence",
       f"(perft 1-4 = {[engine[d] for d in (1, 2, 3, 4)]}, {elapsed:.1f}s)")


# ----------------------------------------------------------------------
# Generator/predicate fuzz: 1e5 (state, move) pairs, membership in
# legal_moves iff validate_move says Ok, zero discrepancies.
# ----------------------------------------------------------------------


def _mutate(rng: random.Random, move: Move) -> Move:
    field = rng.randrange(4)
    point = rng.choice(POINTS)
    if field == 0:
        return Move(rng.choice(["P", "S", "F"]), move.to, move.from_,
                    move.remove)
    if field == 1:
        return Move(move.kind, point, move.from_, move.remove)
    if field == 2:
        return Move(move.kind, move.to, rng.choice([None, point]),
                    move.remove)
    return Move(move.kind, move.to, move.from_, rng.choice([None, point]))


def test_generator_predicate_fuzz_100k():
    rng = random.Random(20_240)
    pairs = 0
    discrepancies = 0
    target = 100_000
    while pairs < target:
        for state in random_playout(rng, max_plies=80):
            legal = set(legal_moves(state))
            candidates = []
            for _ in range(20):
                candidates.append(Move(
                    rng.choice(["P", "S", "F"]),
                    rng.choice(POINTS),
                    rng.choice([None] + list(POINTS)),
                    rng.choice([None, None, rng.choice(POINTS)]),
                ))
            if legal:
                sample = [rng.choice(sorted(legal, key=str)) for _ in range(5)]
                candidates.extend(sample)
                candidates.extend(_mutate(rng, m) for m in sample)
            for m in candidates:
                verdict = validate_move(state, m).ok
                member = m in legal
                if verdict != member:
                    discrepancies += 1
                pairs += 1
            if pairs >= target:
                break
    assert discrepancies == 0
    ok("generator/predicate fuzz", f"({pairs} pairs, 0 discrepancies)")


# ----------------------------------------------------------------------
# Replication convergence: 3 mixed-platform cells, a scripted 60-move
# game with one divergence and one command drop injected per 10 moves;
# every cell digest equals the authoritative digest after quiescence,
# full run under 30 s at time-scale 0.
# ----------------------------------------------------------------------


def _scripted_moves(seed: int, count: int) -> list[str]:
    rng = random.Random(seed)
    state = initial_state()
    moves = []
    while len(moves) < count:
        options = legal_moves(state)
        if not options:
            break
        m = rng.choice(options)
        moves.append(encode_move(m))
        state = apply_move(state, m)
    assert len(moves) == count, "seed did not yield enough moves"
    return moves


def test_replication_convergence_under_faults():
    budget_s = 30.0

    async def scenario():
        server = await start_server(timeout_ms=500, heartbeat_ms=150)
        cells_spec = [("delta-1", "delta-plc"), ("arm-1", "usb-arm"),
                      ("delta-2", "delta-plc")]
        try:
            async with running_cells(server, cells_spec) as sims:
                white = await WireClient.connect("127.0.0.1", server.it_port,
                                                 "w")
                black = await WireClient.connect("127.0.0.1", server.it_port,
                                                 "b")
                await white.join("white")
                await black.join("black")
                names = [c for c, _ in cells_spec]

                async def inject(index, _local):
                    # per block of 10 moves: one divergence, one drop
                    if index % 10 == 2:
                        victim = names[(index // 10) % 3]
                        sims[victim].inject_fault("corrupt-local-state")
                    elif index % 10 == 7:
                        victim = names[(index // 10 + 1) % 3]
                        sims[victim].inject_fault("drop-next-command")

                moves = _scripted_moves(2027, 60)
                await drive_scripted_game(white, black, moves, server,
                                          on_move=inject)
                await wait_quiescent(server, timeout=15)
                truth = server.core.authoritative_digest()
                for cell_id, sim in sims.items():
                    assert state_digest(sim.mirror) == truth, cell_id
                for cell in server.core.cells.values():
                    assert cell.last_report_digest == truth
                dropped = sum(s.dropped_commands for s in sims.values())
                assert dropped == 6
                return truth

        finally:
            await server.stop()

    start = time.monotonic()
    run(scenario(), timeout=budget_s + 30)
    elapsed = time.monotonic() - start
    assert elapsed < budget_s, f"took {elapsed:.1f}s"
    ok("replication convergence",
       f"(60 moves, 6 divergences, 6 drops, {elapsed:.1f}s)")


# ----------------------------------------------------------------------
# Process-machine soundness: every (state, event) pair is either a
# defined transition or an explicit logged ignore; terminal states absorb
# everything.
# ----------------------------------------------------------------------


def test_process_machine_soundness():
    machine = ProcessMachine()
    undefined = []
    for state, event in itertools.product(STATES, EVENTS):
        proc = ProcessRecord(1, "P-d1", "x", 0, 0)
        proc.state = state
        proc.pending = {"c1"}
        try:
            outcome = machine.step(proc, event, cell="c1", pending={"c1"},
                                   reason="r")
        except Exception as exc:  # no pair may raise
            undefined.append((state, event, repr(exc)))
            continue
        if proc.state not in STATES:
            undefined.append((state, event, proc.state))
        if not outcome.applied and proc.state != state:
            undefined.append((state, event, "ignore mutated state"))
        if state in TERMINAL and outcome.applied:
            undefined.append((state, event, "terminal not absorbing"))
    assert undefined == []
    n_pairs = len(STATES) * len(EVENTS)
    n_defined = len(machine.transitions)
    ok("process-machine soundness",
       f"({n_pairs} pairs checked, {n_defined} transitions, "
       f"{n_pairs - n_defined} explicit ignores)")


# ----------------------------------------------------------------------
# Crash recovery: kill mid-game, restart from the append-only log with an
# identical digest; cells resync within heartbeat + timeout.
# ----------------------------------------------------------------------


def test_crash_recovery(tmp_path):
    heartbeat_ms, timeout_ms = 200, 800
    resync_budget_s = (heartbeat_ms + timeout_ms) / 1000.0

    async def scenario():
        log_file = tmp_path / "twin.log"
        server = await start_server(log_file=log_file,
                                    timeout_ms=timeout_ms,
                                    heartbeat_ms=heartbeat_ms)
        it_port, ot_port = server.it_port, server.ot_port
        sims = {c: start_cell(server, c, reconnect_delay_s=0.05)
                for c in ("c1", "c2")}
        tasks = [asyncio.ensure_future(s.run()) for s in sims.values()]
        try:
            for sim in sims.values():
                await asyncio.wait_for(sim.registered.wait(), 5)
            white = await WireClient.connect("127.0.0.1", it_port, "w")
            black = await WireClient.connect("127.0.0.1", it_port, "b")
            await white.join("white")
            await black.join("black")
            await drive_scripted_game(white, black, _scripted_moves(11, 14),
                                      server)
            await wait_quiescent(server)
            digest_before = server.core.authoritative_digest()

            server.kill()
            white.close()
            black.close()
            for sim in sims.values():
                sim.registered.clear()

            revived = await start_server(
                log_file=log_file, it_port=it_port, ot_port=ot_port,
                timeout_ms=timeout_ms, heartbeat_ms=heartbeat_ms,
            )
            try:
                assert revived.core.authoritative_digest() == digest_before
                resync_start = time.monotonic()
                await wait_quiescent(revived, timeout=resync_budget_s)
                resync_s = time.monotonic() - resync_start
                for sim in sims.values():
                    assert state_digest(sim.mirror) == digest_before
                return resync_s
            finally:
                await revived.stop()
        finally:
            for sim in sims.values():
                sim.stop()
            for task in tasks:
                task.cancel()
            await asyncio.gather(*tasks, return_exceptions=True)

    resync_s = run(scenario())
    ok("crash recovery",
       f"(digest reproduced; cells resynced in {resync_s:.2f}s "
       f"< {resync_budget_s:.2f}s)")


# ----------------------------------------------------------------------
# Degenerate fan-out: with zero registered cells a full game runs to a
# terminal state and every process completes flagged no_cells.
# ----------------------------------------------------------------------


def test_degenerate_fanout_full_game():
    async def scenario():
        server = await start_server()
        try:
            white = await WireClient.connect("127.0.0.1", server.it_port, "w")
            black = await WireClient.connect("127.0.0.1", server.it_port, "b")
            await white.join("white")
            await black.join("black")

            rng = random.Random(4)
            states = random_playout(rng, max_plies=3000)
            final = states[-1]
            assert game_status(final).outcome != ONGOING
            moves = []
            for a, b in zip(states, states[1:]):
                for m in legal_moves(a):
                    if apply_move(a, m).board == b.board and \
                            apply_move(a, m).ply == b.ply:
                        moves.append(encode_move(m))
                        break
            # replay the exact playout through the wire
            local = await drive_scripted_game(white, black, moves, server)
            assert game_status(local).outcome != ONGOING
            status_node, _ = server.core.space.read("/game/state/status")
            assert status_node != "ongoing"
            procs = list(server.core.processes.values())
            assert len(procs) == len(moves)
            assert all(p.state == COMPLETED and p.no_cells for p in procs)
            return len(moves), status_node
        finally:
            await server.stop()

    n_moves, outcome = run(scenario(), timeout=240)
    ok("degenerate fan-out",
       f"({n_moves}-ply game to '{outcome}', all processes "
       f"completed no_cells)")


# ----------------------------------------------------------------------
# Agent sanity: depth-3 search vs random over 200 games scores >= 95%
# (draws count half); zero illegal submissions anywhere.
# ----------------------------------------------------------------------


def test_agent_sanity_200_games():
    games = 200
    rng = random.Random(9000)
    score = 0.0
    illegal = 0
    for g in range(games):
        agent_player = "W" if g % 2 == 0 else "B"
        state = initial_state()
        while True:
            status = game_status(state)
            if status.outcome != ONGOING:
                break
            if state.to_move == agent_player:
                move = choose_move(state, 3)
            else:
                move = choose_random_move(state, rng)
            if not validate_move(state, move).ok:
                illegal += 1
                break
            state = apply_move(state, move)
        status = game_status(state)
        if status.outcome == "won" and status.winner == agent_player:
            score += 1.0
        elif status.outcome == "draw":
            score += 0.5
    assert illegal == 0
    assert score >= 0.95 * games, f"score {score}/{games}"
    ok("agent sanity",
       f"(score {score:.1f}/{games} = {100 * score / games:.1f}%, "
       f"0 illegal submissions)")


# ----------------------------------------------------------------------
# Protocol robustness: 1e6 random byte lines never crash the codec; 1e4
# generated envelopes round-trip identically.
# ----------------------------------------------------------------------


def test_protocol_robustness():
    rng = random.Random(77_777)
    crashes = 0
    decoded = 0
    template = json.dumps(
        {"id": 3, "kind": "submit_move", "body": {"move": "P-d1"}}
    ).encode()
    for i in range(1_000_000):
        style = i % 4
        if style == 0:
            line = bytes(rng.randrange(256) for _ in range(rng.randrange(40)))
        elif style == 1:
            line = bytes(
                rng.randrange(32, 127) for _ in range(rng.randrange(60))
            )
        elif style == 2:
            mutated = bytearray(template)
            for _ in range(rng.randrange(1, 4)):
                mutated[rng.randrange(len(mutated))] = rng.randrange(256)
            line = bytes(mutated)
        else:
            line = template[: rng.randrange(len(template))]
        try:
            protocol.decode_frame(line)
            decoded += 1
        except protocol.DecodeError:
            pass
        except Exception:
            crashes += 1
    assert crashes == 0

    for i in range(10_000):
        env = _random_envelope(rng)
        assert protocol.decode_frame(protocol.encode(env)) == env
    ok("protocol robustness",
       f"(1e6 fuzz lines, 0 crashes, {decoded} parsed clean; "
       f"1e4 round-trips)")
