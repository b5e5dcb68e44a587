/** Adapter configuration, loaded from a single JSON file. */

import { readFileSync } from "node:fs";

import type { ScoreKind } from "./protocol.js";

export type Segmentation = "none" | "char";

export interface StubBackendConfig {
  kind: "stub";
  mode: "zero" | "neg-length";
}

export interface CommandBackendConfig {
  kind: "command";
  /** Toolkit wrapper invocation; reads one JSON request per line on stdin
   * and prints one score (a bare number) per line. */
  argv: string[];
}

export type BackendConfig = StubBackendConfig | CommandBackendConfig;

export interface AdapterConfig {
  score_kind: ScoreKind;
  batch_size: number;
  /** applied to sentences before the backend sees them; invisible on the
   * wire, which always carries plain sentences */
  segmentation: Segmentation;
  backend: BackendConfig;
}

const DEFAULTS = {
  score_kind: "logprob" as ScoreKind,
  batch_size: 32,
  segmentation: "none" as Segmentation,
  backend: { kind: "stub", mode: "zero" } as BackendConfig,
};

export function parseConfig(raw: unknown): AdapterConfig {
  const rec = (raw ?? {}) as Record<string, unknown>;
  const config: AdapterConfig = {
    ...DEFAULTS,
    ...(rec as Partial<AdapterConfig>),
    backend: (rec.backend as BackendConfig) ?? DEFAULTS.backend,
  };
  if (config.score_kind !== "logprob" && config.score_kind !== "nll") {
    throw new Error(`score_kind must be "logprob" or "nll", got ${config.score_kind}`);
  }
  if (!Number.isInteger(config.batch_size) || config.batch_size < 1) {
    throw new Error(`batch_size must be a positive integer, got ${config.batch_size}`);
  }
  if (config.segmentation !== "none" && config.segmentation !== "char") {
    throw new Error(`unknown segmentation ${config.segmentation}`);
  }
  const backend = config.backend;
  if (backend.kind === "stub") {
    if (backend.mode !== "zero" && backend.mode !== "neg-length") {
      throw new Error(`unknown stub mode ${(backend as StubBackendConfig).mode}`);
    }
  } else if (backend.kind === "command") {
    if (!Array.isArray(backend.argv) || backend.argv.length === 0) {
      throw new Error("command backend needs a non-empty argv array");
    }
  } else {
    throw new Error(`unknown backend kind ${(backend as BackendConfig).kind}`);
  }
  return config;
}

export function loadConfig(path: string): AdapterConfig {
  return parseConfig(JSON.parse(readFileSync(path, "utf-8")));
}
