export {
  ClipTensor,
  DecodedTensor,
  ValueRange,
  decodeTensor,
  elementCount,
  encodeTensor,
  readTensorFile,
  writeTensorFile,
} from "./tensorFile.js";
export {
  BandKind,
  GaussianDims,
  GaussianSpec,
  TransformConfig,
  configToArgs,
  isForced,
} from "./config.js";
export { engineBinary, runEngine } from "./runner.js";
export {
  BatchEntry,
  BoundTransform,
  ClipStats,
  Seed,
  SeedStream,
  clipStats,
  openStream,
} from "./transform.js";
