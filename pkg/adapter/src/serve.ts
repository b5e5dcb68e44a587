/**
 * The protocol loop: handshake, then exactly one response line per request
 * line, in order. Malformed requests get an error line and the session
 * continues; a backend failure ends the process with a nonzero status.
 */

import { createInterface } from "node:readline";
import type { Readable, Writable } from "node:stream";

import { ScoringPipeline } from "./backends.js";
import type { AdapterConfig } from "./config.js";
import {
  errorLine,
  handshakeReply,
  parseHandshake,
  parseRequest,
  responseLine,
  type ScoreRequest,
} from "./protocol.js";

export async function serve(
  config: AdapterConfig,
  input: Readable,
  output: Writable,
): Promise<number> {
  const pipeline = new ScoringPipeline(config);
  const reader = createInterface({ input, crlfDelay: Infinity });
  const lines = reader[Symbol.asyncIterator]();

  const first = await lines.next();
  if (first.done) {
    return 0; // empty session: nothing to do
  }
  try {
    parseHandshake(first.value);
  } catch (err) {
    output.write(errorLine((err as Error).message));
    return 1;
  }
  output.write(handshakeReply(config.score_kind));

  const emit = async (batch: ScoreRequest[]) => {
    const scores = await pipeline.score(batch);
    for (let i = 0; i < batch.length; i++) {
      output.write(responseLine(batch[i].id, scores[i]));
    }
  };

  let batch: ScoreRequest[] = [];
  try {
    for await (const line of lines) {
      if (!line.trim()) {
        continue;
      }
      let request: ScoreRequest;
      try {
        request = parseRequest(line);
      } catch (err) {
        if (batch.length > 0) {
          await emit(batch);
          batch = [];
        }
        output.write(errorLine((err as Error).message));
        continue;
      }
      batch.push(request);
      // flush per line unless more input is already buffered; the protocol
      // forbids reordering either way
      if (batch.length >= config.batch_size || !moreBuffered(input)) {
        await emit(batch);
        batch = [];
      }
    }
    if (batch.length > 0) {
      await emit(batch);
    }
  } finally {
    await pipeline.close();
  }
  return 0;
}

function moreBuffered(input: Readable): boolean {
  return typeof input.readableLength === "number" && input.readableLength > 0;
}
