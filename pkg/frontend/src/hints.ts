/**
 * Client-side legality hints: enough of the game rules to highlight
 * placement spots, slide/fly destinations and removal candidates before
 * submitting. The server verdict always wins; these hints never mutate
 * the view-model.
 */

export const POINTS = [
  "a1", "d1", "g1",
  "b2", "d2", "f2",
  "c3", "d3", "e3",
  "a4", "b4", "c4", "e4", "f4", "g4",
  "c5", "d5", "e5",
  "b6", "d6", "f6",
  "a7", "d7", "g7",
] as const;

export type Point = (typeof POINTS)[number];

export const MILL_LINES: readonly (readonly [Point, Point, Point])[] = [
  ["a1", "d1", "g1"],
  ["b2", "d2", "f2"],
  ["c3", "d3", "e3"],
  ["a4", "b4", "c4"],
  ["e4", "f4", "g4"],
  ["c5", "d5", "e5"],
  ["b6", "d6", "f6"],
  ["a7", "d7", "g7"],
  ["a1", "a4", "a7"],
  ["b2", "b4", "b6"],
  ["c3", "c4", "c5"],
  ["d1", "d2", "d3"],
  ["d5", "d6", "d7"],
  ["e3", "e4", "e5"],
  ["f2", "f4", "f6"],
  ["g1", "g4", "g7"],
];

const pointIndex = new Map<string, number>(POINTS.map((p, i) => [p, i]));

function buildAdjacency(): Map<Point, Point[]> {
  const neighbors = new Map<Point, Set<Point>>(
    POINTS.map((p) => [p, new Set<Point>()]),
  );
  for (const [a, b, c] of MILL_LINES) {
    neighbors.get(a)!.add(b);
    neighbors.get(b)!.add(a);
    neighbors.get(b)!.add(c);
    neighbors.get(c)!.add(b);
  }
  return new Map(
    [...neighbors.entries()].map(([p, s]) => [p, [...s].sort()]),
  );
}

export const ADJACENT = buildAdjacency();

export type Player = "W" | "B";
export type Phase = "placing" | "moving" | "flying";

export interface ParsedState {
  board: string; // 24 chars of . W B
  handWhite: number;
  handBlack: number;
  toMove: Player;
  ply: number;
  quietPlies: number;
}

export function parseState(text: string): ParsedState {
  const parts = text.split("|");
  if (parts.length !== 4 || parts[0].length !== 24) {
    throw new Error(`malformed state text: ${text}`);
  }
  const [hw, hb] = parts[1].split(",").map(Number);
  const [ply, quiet] = parts[3].split(",").map(Number);
  const toMove = parts[2] as Player;
  if (toMove !== "W" && toMove !== "B") {
    throw new Error(`bad side to move: ${parts[2]}`);
  }
  return {
    board: parts[0],
    handWhite: hw,
    handBlack: hb,
    toMove,
    ply,
    quietPlies: quiet,
  };
}

export function cellAt(state: ParsedState, point: string): string {
  const i = pointIndex.get(point);
  if (i === undefined) throw new Error(`unknown point ${point}`);
  return state.board[i];
}

export function other(player: Player): Player {
  return player === "W" ? "B" : "W";
}

export function hand(state: ParsedState, player: Player): number {
  return player === "W" ? state.handWhite : state.handBlack;
}

export function onBoard(state: ParsedState, player: Player): number {
  return [...state.board].filter((c) => c === player).length;
}

export function phase(state: ParsedState, player: Player): Phase {
  if (hand(state, player) > 0) return "placing";
  if (onBoard(state, player) === 3) return "flying";
  return "moving";
}

function formsMill(
  board: string,
  to: Point,
  player: Player,
  vacated?: Point,
): boolean {
  for (const line of MILL_LINES) {
    if (!line.includes(to)) continue;
    let full = true;
    for (const p of line) {
      if (p === to) continue;
      if (p === vacated || board[pointIndex.get(p)!] !== player) {
        full = false;
        break;
      }
    }
    if (full) return true;
  }
  return false;
}

function inMill(board: string, point: Point, player: Player): boolean {
  for (const line of MILL_LINES) {
    if (!line.includes(point)) continue;
    if (line.every((p) => board[pointIndex.get(p)!] === player)) return true;
  }
  return false;
}

/** Empty points the mover may place on (placing phase). */
export function placementTargets(state: ParsedState): Point[] {
  if (phase(state, state.toMove) !== "placing") return [];
  return POINTS.filter((p) => cellAt(state, p) === ".");
}

/** Own tokens that have at least one destination. */
export function movableSources(state: ParsedState): Point[] {
  const ph = phase(state, state.toMove);
  if (ph === "placing") return [];
  return POINTS.filter(
    (p) =>
      cellAt(state, p) === state.toMove &&
      moveTargets(state, p).length > 0,
  );
}

/** Destinations for a token at `from` (adjacent empties, or any empty when flying). */
export function moveTargets(state: ParsedState, from: Point): Point[] {
  const ph = phase(state, state.toMove);
  if (ph === "placing" || cellAt(state, from) !== state.toMove) return [];
  const empties = POINTS.filter((p) => cellAt(state, p) === ".");
  if (ph === "flying") return empties;
  return empties.filter((p) => ADJACENT.get(from)!.includes(p));
}

/** Whether landing on `to` (optionally vacating `from`) completes a mill. */
export function completesMill(
  state: ParsedState,
  to: Point,
  from?: Point,
): boolean {
  return formsMill(state.board, to, state.toMove, from);
}

/** Opponent tokens a mill-completing move may remove. */
export function removalCandidates(state: ParsedState): Point[] {
  const victim = other(state.toMove);
  const tokens = POINTS.filter((p) => cellAt(state, p) === victim);
  const free = tokens.filter((p) => !inMill(state.board, p, victim));
  return free.length > 0 ? free : tokens;
}

/** Canonical move text for a composed selection. */
export function composeMove(
  state: ParsedState,
  to: Point,
  from?: Point,
  remove?: Point,
): string {
  const ph = phase(state, state.toMove);
  let text: string;
  if (ph === "placing") {
    text = `P-${to}`;
  } else {
    const kind = ph === "flying" ? "F" : "S";
    text = `${kind}-${from}-${to}`;
  }
  if (remove) text += `x${remove}`;
  return text;
}
