#!/usr/bin/env node
/**
 * Entry point: `scorer-adapter [config.json]`. Speaks the scorer wire
 * protocol on stdin/stdout; without a config it runs the zero stub in
 * logprob mode.
 */

import { loadConfig, parseConfig } from "./config.js";
import { serve } from "./serve.js";

async function main(): Promise<number> {
  const path = process.argv[2];
  let config;
  try {
    config = path ? loadConfig(path) : parseConfig({});
  } catch (err) {
    process.stderr.write(`bad config: ${(err as Error).message}\n`);
    return 2;
  }
  try {
    return await serve(config, process.stdin, process.stdout);
  } catch (err) {
    process.stderr.write(`scorer failure: ${(err as Error).message}\n`);
    return 1;
  }
}

main().then((code) => {
  process.exitCode = code;
});
