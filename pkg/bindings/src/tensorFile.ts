/**
 * Reader/writer for the engine's lossless clip tensor format (.vclip).
 *
 * Layout (little-endian):
 *   0   4  magic "VCLP"
 *   4   1  format version (1)
 *   5   1  dtype code: 0 = float32, 1 = float64
 *   6   1  value-range tag: 0 = unit, 1 = normalized, 2 = raw_u8
 *   7   1  reserved
 *   8   8  fps as float64 (NaN when unset)
 *   16  16 dims T, H, W, C as four uint32
 *   32  .. row-major payload in the declared dtype
 *
 * Reading returns a typed-array view over the file buffer whenever the
 * payload is correctly aligned for the element size (zero-copy); an
 * unaligned buffer costs exactly one copy, reported via `copied`.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { endianness } from "node:os";

export type ValueRange = "unit" | "normalized" | "raw_u8";

export interface ClipTensor {
  data: Float32Array | Float64Array;
  /** T, H, W, C */
  shape: [number, number, number, number];
  valueRange: ValueRange;
  fps?: number;
}

const MAGIC = Buffer.from("VCLP", "ascii");
const VERSION = 1;
const HEADER_BYTES = 32;

const RANGE_BY_CODE: ValueRange[] = ["unit", "normalized", "raw_u8"];
const CODE_BY_RANGE: Record<ValueRange, number> = { unit: 0, normalized: 1, raw_u8: 2 };

function assertLittleEndianHost(): void {
  if (endianness() !== "LE") {
    throw new Error("tensor files are little-endian; big-endian hosts are unsupported");
  }
}

export function elementCount(shape: [number, number, number, number]): number {
  return shape[0] * shape[1] * shape[2] * shape[3];
}

export interface DecodedTensor {
  tensor: ClipTensor;
  /** true when the payload had to be copied out of an unaligned buffer */
  copied: boolean;
}

export function decodeTensor(buf: Buffer): DecodedTensor {
  assertLittleEndianHost();
  if (buf.length < HEADER_BYTES || !buf.subarray(0, 4).equals(MAGIC)) {
    throw new Error("not a clip tensor file (bad magic)");
  }
  const view = new DataView(buf.buffer, buf.byteOffset, buf.byteLength);
  const version = view.getUint8(4);
  if (version !== VERSION) {
    throw new Error(`unsupported tensor format version ${version}`);
  }
  const dtypeCode = view.getUint8(5);
  const rangeCode = view.getUint8(6);
  if (dtypeCode > 1 || rangeCode > 2) {
    throw new Error("corrupt tensor header");
  }
  const fpsRaw = view.getFloat64(8, true);
  const shape: [number, number, number, number] = [
    view.getUint32(16, true),
    view.getUint32(20, true),
    view.getUint32(24, true),
    view.getUint32(28, true),
  ];
  const count = elementCount(shape);
  const bytesPer = dtypeCode === 0 ? 4 : 8;
  if (buf.length < HEADER_BYTES + count * bytesPer) {
    throw new Error("truncated tensor payload");
  }
  const payloadOffset = buf.byteOffset + HEADER_BYTES;
  const Ctor = dtypeCode === 0 ? Float32Array : Float64Array;
  let data: Float32Array | Float64Array;
  let copied = false;
  if (payloadOffset % bytesPer === 0) {
    data = new Ctor(buf.buffer as ArrayBuffer, payloadOffset, count);
  } else {
    // one documented copy: realign the payload
    const aligned = Buffer.alloc(count * bytesPer);
    buf.copy(aligned, 0, HEADER_BYTES, HEADER_BYTES + count * bytesPer);
    data = new Ctor(aligned.buffer as ArrayBuffer, aligned.byteOffset, count);
    copied = true;
  }
  const tensor: ClipTensor = {
    data,
    shape,
    valueRange: RANGE_BY_CODE[rangeCode],
    fps: Number.isNaN(fpsRaw) ? undefined : fpsRaw,
  };
  return { tensor, copied };
}

export function encodeTensor(tensor: ClipTensor): Buffer {
  assertLittleEndianHost();
  const count = elementCount(tensor.shape);
  if (tensor.data.length !== count) {
    throw new Error(
      `payload length ${tensor.data.length} does not match shape [${tensor.shape}]`,
    );
  }
  const header = Buffer.alloc(HEADER_BYTES);
  MAGIC.copy(header, 0);
  header.writeUInt8(VERSION, 4);
  header.writeUInt8(tensor.data instanceof Float64Array ? 1 : 0, 5);
  header.writeUInt8(CODE_BY_RANGE[tensor.valueRange], 6);
  header.writeDoubleLE(tensor.fps === undefined ? NaN : tensor.fps, 8);
  for (let i = 0; i < 4; i++) {
    header.writeUInt32LE(tensor.shape[i], 16 + 4 * i);
  }
  const payload = Buffer.from(tensor.data.buffer, tensor.data.byteOffset, tensor.data.byteLength);
  return Buffer.concat([header, payload]);
}

export function readTensorFile(path: string): ClipTensor {
  return decodeTensor(readFileSync(path)).tensor;
}

export function writeTensorFile(path: string, tensor: ClipTensor): void {
  writeFileSync(path, encodeTensor(tensor));
}
