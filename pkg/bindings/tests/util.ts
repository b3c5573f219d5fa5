import { ClipTensor, elementCount } from "../src/tensorFile.js";

/** Small deterministic PRNG so test clips are reproducible across runs. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function randomClip(
  shape: [number, number, number, number],
  rand: () => number,
): ClipTensor {
  const data = new Float32Array(elementCount(shape));
  for (let i = 0; i < data.length; i++) data[i] = rand();
  return { data, shape, valueRange: "unit" };
}

/** One frame repeated T times: no temporal variation at all. */
export function staticClip(
  shape: [number, number, number, number],
  rand: () => number,
): ClipTensor {
  const [t, h, w, c] = shape;
  const frame = new Float32Array(h * w * c);
  for (let i = 0; i < frame.length; i++) frame[i] = rand();
  const data = new Float32Array(t * frame.length);
  for (let k = 0; k < t; k++) data.set(frame, k * frame.length);
  return { data, shape, valueRange: "unit" };
}
