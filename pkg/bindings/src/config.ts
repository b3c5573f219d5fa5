/** Transform configuration mirroring the engine CLI's filter flags. */

export type BandKind = "hpf" | "lpf";
export type GaussianDims = "2d" | "3d";

export interface GaussianSpec {
  kernelSize: number;
  sigma: number;
  dims: GaussianDims;
}

export interface TransformConfig {
  preset?: "freqaug_t" | "freqaug_st";
  band?: BandKind;
  fcoT?: number;
  fcoS?: number;
  /** random temporal band-reject mask parameter; needs numFrames */
  randomMaskM?: number;
  numFrames?: number;
  gaussian?: GaussianSpec;
  /** application probability; omit for forced (deterministic) filtering */
  p?: number;
}

export function isForced(config: TransformConfig): boolean {
  return config.p === undefined;
}

/** Build the CLI argument list for this configuration. */
export function configToArgs(config: TransformConfig): string[] {
  const args: string[] = [];
  if (config.preset !== undefined) args.push("--preset", config.preset);
  if (config.band !== undefined) args.push("--band", config.band);
  if (config.fcoT !== undefined) args.push("--fco-t", String(config.fcoT));
  if (config.fcoS !== undefined) args.push("--fco-s", String(config.fcoS));
  if (config.randomMaskM !== undefined) {
    args.push("--random-mask-M", String(config.randomMaskM));
  }
  if (config.numFrames !== undefined) args.push("--num-frames", String(config.numFrames));
  if (config.gaussian !== undefined) {
    const g = config.gaussian;
    args.push("--gaussian", `${g.kernelSize},${g.sigma},${g.dims}`);
  }
  if (!isForced(config)) args.push("--p", String(config.p));
  return args;
}
