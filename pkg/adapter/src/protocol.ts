/**
 * Wire protocol types and the canonical line encoding.
 *
 * Lines are compact JSON (no spaces), UTF-8, LF-terminated, fixed key
 * order, so transcripts are byte-comparable across implementations.
 */

export const PROTOCOL_VERSION = 1;

export type ScoreKind = "logprob" | "nll";

export interface ScoreRequest {
  id: string;
  src_context: string[];
  src: string;
  tgt_context: string[];
  tgt: string;
}

export interface HandshakeRequest {
  protocol: number;
  score_kind_requested?: string;
}

export function encodeLine(obj: unknown): string {
  return JSON.stringify(obj) + "\n";
}

export function handshakeReply(scoreKind: ScoreKind): string {
  return encodeLine({ protocol: PROTOCOL_VERSION, score_kind: scoreKind });
}

export function responseLine(id: string, score: number): string {
  if (!Number.isFinite(score)) {
    throw new Error(`non-finite score for id ${id}`);
  }
  return encodeLine({ id, score });
}

export function errorLine(message: string): string {
  return encodeLine({ id: null, error: message });
}

export function parseRequest(line: string): ScoreRequest {
  let parsed: unknown;
  try {
    parsed = JSON.parse(line);
  } catch (err) {
    throw new Error(`bad JSON: ${(err as Error).message}`);
  }
  const rec = parsed as Record<string, unknown>;
  if (typeof rec !== "object" || rec === null) {
    throw new Error("request is not an object");
  }
  if (typeof rec.id !== "string") {
    throw new Error("request missing string id");
  }
  if (typeof rec.tgt !== "string" || typeof rec.src !== "string") {
    throw new Error(`request ${rec.id} missing src/tgt`);
  }
  const ctx = (value: unknown): string[] =>
    Array.isArray(value) ? value.map(String) : [];
  return {
    id: rec.id,
    src_context: ctx(rec.src_context),
    src: rec.src,
    tgt_context: ctx(rec.tgt_context),
    tgt: rec.tgt,
  };
}

export function parseHandshake(line: string): HandshakeRequest {
  const rec = JSON.parse(line) as HandshakeRequest;
  if (rec.protocol !== PROTOCOL_VERSION) {
    throw new Error(
      `unsupported protocol ${rec.protocol}, expected ${PROTOCOL_VERSION}`,
    );
  }
  return rec;
}
