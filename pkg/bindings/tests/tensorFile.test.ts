import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterEach, beforeEach, describe, expect, it } from "vitest";

import {
  ClipTensor,
  decodeTensor,
  encodeTensor,
  readTensorFile,
  writeTensorFile,
} from "../src/tensorFile.js";
import { mulberry32, randomClip } from "./util.js";

let work: string;

beforeEach(() => {
  work = mkdtempSync(join(tmpdir(), "vclip-test-"));
});

afterEach(() => {
  rmSync(work, { recursive: true, force: true });
});

describe("tensor file round trip", () => {
  it("preserves float32 payload, shape and metadata exactly", () => {
    const tensor = randomClip([3, 4, 5, 3], mulberry32(1));
    tensor.fps = 29.97;
    const path = join(work, "a.vclip");
    writeTensorFile(path, tensor);
    const back = readTensorFile(path);
    expect(back.shape).toEqual(tensor.shape);
    expect(back.valueRange).toBe("unit");
    expect(back.fps).toBeCloseTo(29.97, 12);
    expect(Buffer.from(back.data.buffer, back.data.byteOffset, back.data.byteLength))
      .toEqual(Buffer.from(tensor.data.buffer, tensor.data.byteOffset, tensor.data.byteLength));
  });

  it("preserves float64 payloads", () => {
    const data = new Float64Array([0.25, -1.5, 3.75, 0]);
    const tensor: ClipTensor = {
      data,
      shape: [1, 2, 2, 1],
      valueRange: "normalized",
    };
    const path = join(work, "b.vclip");
    writeTensorFile(path, tensor);
    const back = readTensorFile(path);
    expect(back.data).toBeInstanceOf(Float64Array);
    expect(Array.from(back.data)).toEqual([0.25, -1.5, 3.75, 0]);
    expect(back.fps).toBeUndefined();
  });

  it("is byte-stable under encode/decode/encode", () => {
    const tensor = randomClip([2, 3, 3, 1], mulberry32(2));
    const once = encodeTensor(tensor);
    const twice = encodeTensor(decodeTensor(once).tensor);
    expect(twice.equals(once)).toBe(true);
  });
});

describe("zero-copy decoding", () => {
  it("views aligned buffers without copying", () => {
    const tensor = randomClip([2, 2, 2, 1], mulberry32(3));
    const encoded = encodeTensor(tensor);
    // force 8-byte alignment of the payload (header is 32 bytes)
    const aligned = Buffer.alloc(encoded.length);
    encoded.copy(aligned);
    const { tensor: decoded, copied } = decodeTensor(aligned);
    expect(copied).toBe(false);
    expect(decoded.data.buffer).toBe(aligned.buffer);
  });

  it("copies exactly once for unaligned buffers", () => {
    const tensor = randomClip([2, 2, 2, 1], mulberry32(4));
    const encoded = encodeTensor(tensor);
    const backing = Buffer.alloc(encoded.length + 2);
    encoded.copy(backing, 2);
    const unaligned = backing.subarray(2);
    const { tensor: decoded, copied } = decodeTensor(unaligned);
    expect(copied).toBe(true);
    expect(Array.from(decoded.data)).toEqual(Array.from(tensor.data));
  });
});

describe("validation", () => {
  it("rejects bad magic", () => {
    const path = join(work, "junk.vclip");
    writeFileSync(path, Buffer.alloc(64));
    expect(() => readTensorFile(path)).toThrow(/magic/);
  });

  it("rejects truncated payloads", () => {
    const tensor = randomClip([2, 2, 2, 1], mulberry32(5));
    const encoded = encodeTensor(tensor);
    const path = join(work, "short.vclip");
    writeFileSync(path, encoded.subarray(0, encoded.length - 4));
    expect(() => readTensorFile(path)).toThrow(/truncated/);
  });

  it("rejects shape/payload mismatches on encode", () => {
    expect(() =>
      encodeTensor({
        data: new Float32Array(3),
        shape: [1, 2, 2, 1],
        valueRange: "unit",
      }),
    ).toThrow(/does not match shape/);
  });
});
