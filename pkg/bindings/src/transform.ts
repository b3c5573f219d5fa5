/**
 * Callable transforms over clip tensors, for dropping the engine into
 * Node-side data pipelines.
 *
 * The engine is consumed strictly through its public surfaces: tensors
 * travel via the documented .vclip format and work is executed by the
 * batch CLI, so results are bit-identical to direct CLI runs for the
 * same seed and clip ids (stream derivation:
 * Philox(seed XOR blake2b64(clip_id)); the id is what names a stream).
 *
 * Each apply() spawns one engine process; prefer applyBatch() in hot
 * loops so a whole batch shares one process.
 */

import { mkdtempSync, mkdirSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { configToArgs, isForced, TransformConfig } from "./config.js";
import { runEngine } from "./runner.js";
import { ClipTensor, readTensorFile, writeTensorFile } from "./tensorFile.js";

export type Seed = number | bigint;

/**
 * Opaque stream handle: a seed plus a monotone item counter used to
 * name per-call streams when the caller does not supply clip ids.
 * Not shareable across threads (the counter is plain mutable state).
 */
export class SeedStream {
  readonly seed: Seed;
  private counter = 0;

  constructor(seed: Seed) {
    this.seed = seed;
  }

  nextId(): string {
    return `item_${this.counter++}`;
  }
}

export function openStream(seed: Seed): SeedStream {
  return new SeedStream(seed);
}

export interface BatchEntry {
  id: string;
  tensor: ClipTensor;
}

export interface ClipStats {
  sigmaT: number;
  lfcRatio: number;
}

export class BoundTransform {
  readonly config: TransformConfig;
  private readonly stream: SeedStream;

  constructor(config: TransformConfig, seedOrStream: Seed | SeedStream) {
    this.config = config;
    this.stream =
      seedOrStream instanceof SeedStream ? seedOrStream : new SeedStream(seedOrStream);
  }

  /** Transform one clip; `clipId` names its random stream (else auto-assigned). */
  apply(tensor: ClipTensor, clipId?: string): ClipTensor {
    const id = clipId ?? this.stream.nextId();
    const result = this.applyBatch([{ id, tensor }]);
    const out = result.get(id);
    if (!out) throw new Error(`engine produced no output for clip ${id}`);
    return out;
  }

  /** Transform a batch in one engine invocation; returns outputs by id. */
  applyBatch(entries: BatchEntry[]): Map<string, ClipTensor> {
    if (entries.length === 0) return new Map();
    const work = mkdtempSync(join(tmpdir(), "freqaug-bind-"));
    try {
      const inDir = join(work, "in");
      const outDir = join(work, "out");
      mkdirSync(inDir);
      for (const entry of entries) {
        writeTensorFile(join(inDir, `${entry.id}.vclip`), entry.tensor);
      }
      const command = isForced(this.config) ? "filter" : "augment";
      runEngine([
        command, inDir, "-o", outDir,
        "--seed", String(this.stream.seed), "--jobs", "1",
        ...configToArgs(this.config),
      ]);
      const outputs = new Map<string, ClipTensor>();
      for (const entry of entries) {
        outputs.set(entry.id, readTensorFile(join(outDir, `${entry.id}.vclip`)));
      }
      return outputs;
    } finally {
      rmSync(work, { recursive: true, force: true });
    }
  }
}

/** Per-clip spectrum statistics through the engine's analyze command. */
export function clipStats(tensor: ClipTensor): ClipStats {
  const work = mkdtempSync(join(tmpdir(), "freqaug-stats-"));
  try {
    const inDir = join(work, "in");
    const outDir = join(work, "out");
    mkdirSync(inDir);
    writeTensorFile(join(inDir, "clip.vclip"), tensor);
    runEngine(["analyze", inDir, "-o", outDir, "--n-bins", "1", "--jobs", "1"]);
    const statsPath = join(outDir, "stats.tsv");
    const rows = readTable(statsPath);
    const row = rows.find((r) => r.clip_id === "clip");
    if (!row) throw new Error("analyze output is missing the clip row");
    if (row.error) throw new Error(`engine could not compute stats: ${row.error}`);
    return { sigmaT: Number(row.sigma_t), lfcRatio: Number(row.lfc_ratio) };
  } finally {
    rmSync(work, { recursive: true, force: true });
  }
}

function readTable(path: string): Record<string, string>[] {
  const lines = readFileSync(path, "utf-8").trimEnd().split("\n");
  const header = lines[0].split("\t");
  return lines.slice(1).map((line) => {
    const cells = line.split("\t");
    const row: Record<string, string> = {};
    header.forEach((name, i) => (row[name] = cells[i] ?? ""));
    return row;
  });
}
