/** Spawns the engine CLI and surfaces its errors as host-side exceptions. */

import { spawnSync } from "node:child_process";

/** Override with the FREQAUG_BIN environment variable when not on PATH. */
export function engineBinary(): string[] {
  const override = process.env.FREQAUG_BIN;
  if (override) return override.split(" ");
  return ["freqaug"];
}

export function runEngine(args: string[]): string {
  const [bin, ...prefix] = engineBinary();
  const proc = spawnSync(bin, [...prefix, ...args], { encoding: "utf-8" });
  if (proc.error) {
    throw new Error(`failed to launch engine CLI (${bin}): ${proc.error.message}`);
  }
  if (proc.status !== 0) {
    const detail = (proc.stderr || proc.stdout || "").trim();
    throw new Error(`engine CLI exited with status ${proc.status}: ${detail}`);
  }
  return proc.stdout;
}
