/**
 * Wire envelopes, identical to the orchestrator's TCP protocol. Over the
 * WebSocket bridge each envelope travels as one JSON text frame (the
 * bridge adds/strips the newline framing of the TCP side).
 */

export type Kind =
  | "hello"
  | "hello_ack"
  | "join_game"
  | "join_ack"
  | "submit_move"
  | "move_accepted"
  | "move_rejected"
  | "state_update"
  | "process_update"
  | "register_cell"
  | "register_ack"
  | "cell_command"
  | "cell_ack"
  | "cell_state_report"
  | "error"
  | "ping"
  | "pong";

export interface Envelope {
  id: number;
  kind: Kind | string;
  body: Record<string, unknown>;
  re?: number;
}

export interface StateUpdateBody {
  state: string;
  digest: string;
  status: string;
  to_move: "W" | "B";
  ply: number;
  last_move?: string | null;
  players?: Record<string, string>;
  cells?: Record<string, { status: string; platform: string }>;
}

export interface ProcessUpdateBody {
  pid: number;
  state: string;
  move?: string;
  reason?: string;
  failure?: string;
  pending?: string[];
  no_cells?: boolean;
  digest?: string;
  updated_at?: number;
}

export function encodeEnvelope(env: Envelope): string {
  const obj: Record<string, unknown> = {
    id: env.id,
    kind: env.kind,
    body: env.body,
  };
  if (env.re !== undefined && env.re !== null) obj.re = env.re;
  return JSON.stringify(obj);
}

export function decodeEnvelope(text: string): Envelope {
  const obj = JSON.parse(text);
  if (typeof obj !== "object" || obj === null || Array.isArray(obj)) {
    throw new Error("frame is not an object");
  }
  if (typeof obj.id !== "number" || typeof obj.kind !== "string") {
    throw new Error("missing id/kind");
  }
  const body = obj.body ?? {};
  if (typeof body !== "object" || Array.isArray(body)) {
    throw new Error("body is not an object");
  }
  const env: Envelope = { id: obj.id, kind: obj.kind, body };
  if (typeof obj.re === "number") env.re = obj.re;
  return env;
}

/** Per-connection outbound counter, mirroring the server's monotonic-id rule. */
export class IdCounter {
  private next = 1;
  take(): number {
    return this.next++;
  }
}
