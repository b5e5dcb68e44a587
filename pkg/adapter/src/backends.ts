/**
 * Scoring backends behind the protocol. The stub backends exist for
 * conformance testing; the command backend hands segmented sentences to an
 * external toolkit wrapper process.
 */

import { spawn, type ChildProcessByStdio } from "node:child_process";
import { createInterface, type Interface } from "node:readline";
import type { Readable, Writable } from "node:stream";

import type { AdapterConfig, BackendConfig, Segmentation } from "./config.js";
import type { ScoreRequest } from "./protocol.js";

export interface ScoreBackend {
  score(requests: ScoreRequest[]): Promise<number[]>;
  close(): Promise<void>;
}

/** Code points, not UTF-16 units: astral characters count once. */
export function charLength(text: string): number {
  return [...text].length;
}

export function segment(text: string, how: Segmentation): string {
  if (how === "char") {
    return [...text.replace(/\s+/g, "")].join(" ");
  }
  return text;
}

function segmentRequest(req: ScoreRequest, how: Segmentation): ScoreRequest {
  if (how === "none") {
    return req;
  }
  return {
    ...req,
    src: segment(req.src, how),
    tgt: segment(req.tgt, how),
    src_context: req.src_context.map((s) => segment(s, how)),
    tgt_context: req.tgt_context.map((s) => segment(s, how)),
  };
}

class StubBackend implements ScoreBackend {
  /** The stub rules are defined in log-probability terms (0, or minus the
   * character length of tgt); when the adapter declares nll, the emitted
   * numbers are negated accordingly. */
  constructor(
    private readonly mode: "zero" | "neg-length",
    private readonly sign: 1 | -1,
  ) {}

  async score(requests: ScoreRequest[]): Promise<number[]> {
    return requests.map((req) => {
      const logprob = this.mode === "zero" ? 0 : -charLength(req.tgt);
      // -0 would serialize as "0" anyway, but keep the arithmetic clean
      return logprob === 0 ? 0 : this.sign * logprob;
    });
  }

  async close(): Promise<void> {}
}

class CommandBackend implements ScoreBackend {
  private proc: ChildProcessByStdio<Writable, Readable, null>;
  private lines: AsyncIterableIterator<string>;
  private reader: Interface;

  constructor(argv: string[]) {
    this.proc = spawn(argv[0], argv.slice(1), {
      stdio: ["pipe", "pipe", "inherit"],
    });
    this.reader = createInterface({ input: this.proc.stdout });
    this.lines = this.reader[Symbol.asyncIterator]();
  }

  async score(requests: ScoreRequest[]): Promise<number[]> {
    for (const req of requests) {
      this.proc.stdin.write(
        JSON.stringify({
          src_context: req.src_context,
          src: req.src,
          tgt_context: req.tgt_context,
          tgt: req.tgt,
        }) + "\n",
      );
    }
    const scores: number[] = [];
    for (let i = 0; i < requests.length; i++) {
      const next = await this.lines.next();
      if (next.done) {
        throw new Error(
          `toolkit process closed its output after ${scores.length} of ` +
            `${requests.length} scores`,
        );
      }
      const score = Number(next.value.trim());
      if (!Number.isFinite(score)) {
        throw new Error(`toolkit returned a non-numeric score: ${next.value}`);
      }
      scores.push(score);
    }
    return scores;
  }

  async close(): Promise<void> {
    this.proc.stdin.end();
    this.reader.close();
    await new Promise((resolve) => this.proc.once("close", resolve));
  }
}

function buildBackend(config: AdapterConfig): ScoreBackend {
  const backend = config.backend;
  if (backend.kind === "stub") {
    return new StubBackend(backend.mode, config.score_kind === "nll" ? -1 : 1);
  }
  // a wrapped toolkit emits scores already in the declared kind
  return new CommandBackend(backend.argv);
}

/** Wraps a backend with the configured segmentation (invisible on the wire). */
export class ScoringPipeline {
  private readonly backend: ScoreBackend;

  constructor(private readonly config: AdapterConfig) {
    this.backend = buildBackend(config);
  }

  async score(requests: ScoreRequest[]): Promise<number[]> {
    const prepared = requests.map((req) =>
      segmentRequest(req, this.config.segmentation),
    );
    return this.backend.score(prepared);
  }

  async close(): Promise<void> {
    await this.backend.close();
  }
}
