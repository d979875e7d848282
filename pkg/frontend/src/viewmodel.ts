/**
 * Session view-model: the single source of truth the UI renders.
 *
 * Everything here is derived from the subscribe-time snapshot plus
 * received state_update / process_update events; the board never changes
 * on local input (no optimistic rendering) and input stays disabled from
 * submission until the spawned process reaches a terminal state.
 */

import {
  completesMill,
  composeMove,
  movableSources,
  moveTargets,
  parseState,
  phase,
  placementTargets,
  removalCandidates,
  type ParsedState,
  type Player,
  type Point,
} from "./hints.js";
import type {
  Envelope,
  ProcessUpdateBody,
  StateUpdateBody,
} from "./protocol.js";

export type SeatName = "white" | "black" | "spectator";

export interface CellBadge {
  status: string;
  platform: string;
}

export interface ProcessEntry {
  pid: number;
  state: string;
  move?: string;
  reason?: string;
  failure?: string;
  noCells?: boolean;
}

export interface Selection {
  from?: Point;
  to?: Point;
  awaitingRemoval: boolean;
}

const TERMINAL_PROCESS_STATES = new Set(["rejected", "completed", "failed"]);

export class SessionViewModel {
  seat: SeatName = "spectator";
  token: string | null = null;
  stateText: string | null = null;
  digest: string | null = null;
  status = "ongoing";
  toMove: Player = "W";
  ply = -1;
  lastMove: string | null = null;
  players: Record<string, string> = {};
  cells: Record<string, CellBadge> = {};
  processLog: ProcessEntry[] = [];
  banner: string | null = null;
  pendingPid: number | null = null;
  awaitingVerdict = false;
  selection: Selection = { awaitingRemoval: false };
  updates = 0;

  private listeners: (() => void)[] = [];

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private changed(): void {
    for (const fn of this.listeners) fn();
  }

  get state(): ParsedState | null {
    return this.stateText === null ? null : parseState(this.stateText);
  }

  get myPlayer(): Player | null {
    if (this.seat === "white") return "W";
    if (this.seat === "black") return "B";
    return null;
  }

  /** Input is allowed only on our turn, in a live game, with no
   * submission in flight. */
  get inputEnabled(): boolean {
    return (
      this.myPlayer !== null &&
      this.status === "ongoing" &&
      this.toMove === this.myPlayer &&
      !this.awaitingVerdict &&
      this.pendingPid === null
    );
  }

  board(): string {
    return this.state?.board ?? ".".repeat(24);
  }

  apply(env: Envelope): void {
    switch (env.kind) {
      case "join_ack": {
        this.seat = env.body.color as SeatName;
        this.token = (env.body.token as string) ?? null;
        break;
      }
      case "state_update": {
        const body = env.body as unknown as StateUpdateBody;
        this.stateText = body.state;
        this.digest = body.digest;
        this.status = body.status;
        this.toMove = body.to_move;
        this.ply = body.ply;
        this.lastMove = body.last_move ?? null;
        if (body.players) this.players = body.players;
        if (body.cells) this.cells = body.cells;
        this.updates += 1;
        break;
      }
      case "process_update": {
        const body = env.body as unknown as ProcessUpdateBody;
        this.recordProcess(body);
        if (
          this.pendingPid === body.pid &&
          TERMINAL_PROCESS_STATES.has(body.state)
        ) {
          this.pendingPid = null;
        }
        break;
      }
      case "move_accepted": {
        this.awaitingVerdict = false;
        this.pendingPid = env.body.pid as number;
        this.banner = null;
        // terminal process_update may have raced ahead of the verdict
        const seen = this.processLog.find(
          (p) => p.pid === this.pendingPid,
        );
        if (seen && TERMINAL_PROCESS_STATES.has(seen.state)) {
          this.pendingPid = null;
        }
        break;
      }
      case "move_rejected": {
        this.awaitingVerdict = false;
        this.pendingPid = null;
        this.banner = `move rejected: ${env.body.reason}`;
        break;
      }
      case "error": {
        this.banner = `error: ${env.body.code}`;
        break;
      }
      default:
        return; // acks, pings and cell traffic are not view-model input
    }
    this.changed();
  }

  private recordProcess(body: ProcessUpdateBody): void {
    const entry: ProcessEntry = {
      pid: body.pid,
      state: body.state,
      move: body.move,
      reason: body.reason ?? undefined,
      failure: body.failure ?? undefined,
      noCells: body.no_cells,
    };
    const index = this.processLog.findIndex((p) => p.pid === body.pid);
    if (index >= 0) this.processLog[index] = entry;
    else this.processLog.push(entry);
  }

  /** Called by the UI when a move is sent; locks input until verdict and
   * process completion come back. */
  submitted(): void {
    this.awaitingVerdict = true;
    this.selection = { awaitingRemoval: false };
    this.changed();
  }

  // ---------------------------------------------------------- selection

  /** Point click -> either a composed canonical move to submit (string)
   * or null when the click only advanced the selection. */
  clickPoint(point: Point): string | null {
    const state = this.state;
    if (!state || !this.inputEnabled) return null;
    const ph = phase(state, state.toMove);

    if (this.selection.awaitingRemoval && this.selection.to) {
      if (!removalCandidates(state).includes(point)) return null;
      const text = composeMove(
        state,
        this.selection.to,
        this.selection.from,
        point,
      );
      return text;
    }

    if (ph === "placing") {
      if (!placementTargets(state).includes(point)) return null;
      if (completesMill(state, point)) {
        this.selection = { to: point, awaitingRemoval: true };
        this.changed();
        return null;
      }
      return composeMove(state, point);
    }

    if (this.selection.from === undefined) {
      if (movableSources(state).includes(point)) {
        this.selection = { from: point, awaitingRemoval: false };
        this.changed();
      }
      return null;
    }
    if (point === this.selection.from) {
      this.selection = { awaitingRemoval: false };
      this.changed();
      return null;
    }
    if (!moveTargets(state, this.selection.from).includes(point)) return null;
    if (completesMill(state, point, this.selection.from)) {
      this.selection = {
        from: this.selection.from,
        to: point,
        awaitingRemoval: true,
      };
      this.changed();
      return null;
    }
    return composeMove(state, point, this.selection.from);
  }

  /** Points the UI should highlight given the current selection. */
  highlights(): Point[] {
    const state = this.state;
    if (!state || !this.inputEnabled) return [];
    if (this.selection.awaitingRemoval) return removalCandidates(state);
    const ph = phase(state, state.toMove);
    if (ph === "placing") return placementTargets(state);
    if (this.selection.from) return moveTargets(state, this.selection.from);
    return movableSources(state);
  }
}
