/**
 * Seeded batch generation and training-window extraction as dense Float32
 * arrays, for feeding training loops without touching the filesystem.
 *
 * All numbers come from the engine process over a pipe; this package only
 * marshals bytes. For one (config, seed) pair the arrays equal the engine's
 * file output exactly, value for value.
 */

import {
  type EngineConfig,
  EngineStream,
  spawnStream,
  validateConfig,
  writeTempConfig,
  type TempConfig,
} from "./engine.js";
import {
  BATCH_HEADER_BYTES,
  WINDOW_HEADER_BYTES,
  type Matrix,
  matrixRow,
  parseBatchHeader,
  parseWindowHeader,
  toFloat32,
} from "./raw.js";

export { matrixRow, decodeBatchFile } from "./raw.js";
export type { Matrix } from "./raw.js";
export type { EngineConfig } from "./engine.js";

const UNBOUNDED_COUNT = 1_000_000_000;

export interface StreamOptions {
  /** Number of batches to produce; omitted means effectively unbounded. */
  count?: number;
}

/** A live batch stream; one consumer at a time. */
export class SeriesStream {
  constructor(
    private stream: EngineStream,
    private temp: TempConfig,
  ) {}

  /** The next (rows x length) batch, or null when a bounded stream ends. */
  async nextBatch(): Promise<Matrix | null> {
    const header = await this.stream.read(BATCH_HEADER_BYTES);
    if (header === null) {
      await this.temp.cleanup();
      return null;
    }
    const { rows, length } = parseBatchHeader(header);
    const payload = await this.stream.read(rows * length * 4);
    if (payload === null) {
      throw new Error("stream ended inside a batch payload");
    }
    return { data: toFloat32(payload, rows * length), rows, cols: length };
  }

  async *[Symbol.asyncIterator](): AsyncIterator<Matrix> {
    for (;;) {
      const batch = await this.nextBatch();
      if (batch === null) {
        return;
      }
      yield batch;
    }
  }

  async close(): Promise<void> {
    this.stream.close();
    await this.temp.cleanup();
  }
}

export interface WindowBlock {
  contexts: Matrix;
  padLens: Uint32Array;
  targets: Matrix;
}

/** A live training-window stream; windows arrive in engine order. */
export class WindowStream {
  private header: { count: number; contextLength: number; targetLength: number } | null = null;
  private consumed = 0;

  constructor(
    private stream: EngineStream,
    private temp: TempConfig,
  ) {}

  private async readHeader() {
    if (this.header === null) {
      const raw = await this.stream.read(WINDOW_HEADER_BYTES);
      if (raw === null) {
        throw new Error("window stream produced no header");
      }
      this.header = parseWindowHeader(raw);
    }
    return this.header;
  }

  /**
   * Up to n windows as three aligned arrays: contexts (n x context length),
   * pad lengths, targets (n x target length). Null once exhausted.
   */
  async nextWindows(n: number): Promise<WindowBlock | null> {
    if (n < 1) {
      throw new RangeError("n must be at least 1");
    }
    const header = await this.readHeader();
    const remaining = header.count - this.consumed;
    const take = Math.min(n, remaining);
    if (take === 0) {
      await this.temp.cleanup();
      return null;
    }
    const { contextLength, targetLength } = header;
    const contexts = new Float32Array(take * contextLength);
    const targets = new Float32Array(take * targetLength);
    const padLens = new Uint32Array(take);
    for (let i = 0; i < take; i++) {
      const pad = await this.stream.read(4);
      const body = await this.stream.read((contextLength + targetLength) * 4);
      if (pad === null || body === null) {
        throw new Error("stream ended inside a window record");
      }
      padLens[i] = pad.readUInt32LE(0);
      contexts.set(toFloat32(body, contextLength), i * contextLength);
      targets.set(
        toFloat32(body.subarray(contextLength * 4), targetLength),
        i * targetLength,
      );
    }
    this.consumed += take;
    return {
      contexts: { data: contexts, rows: take, cols: contextLength },
      padLens,
      targets: { data: targets, rows: take, cols: targetLength },
    };
  }

  async close(): Promise<void> {
    this.stream.close();
    await this.temp.cleanup();
  }
}

/**
 * Start a deterministic batch stream. The config mapping is validated by the
 * engine itself; a rejection carries the engine's diagnostics verbatim.
 */
export async function openStream(
  config: EngineConfig | null,
  seed: number | bigint,
  options: StreamOptions = {},
): Promise<SeriesStream> {
  await validateConfig(config, seed);
  const temp = await writeTempConfig(config);
  const args = [
    "generate",
    "--seed",
    String(seed),
    "--count",
    String(options.count ?? UNBOUNDED_COUNT),
    "--format",
    "raw",
    "--out",
    "-",
  ];
  if (temp.path) {
    args.push("--config", temp.path);
  }
  return new SeriesStream(spawnStream(args), temp);
}

/** Start a bounded training-window stream of exactly `count` windows. */
export async function openWindowStream(
  config: EngineConfig | null,
  seed: number | bigint,
  count: number,
): Promise<WindowStream> {
  if (count < 1) {
    throw new RangeError("count must be at least 1");
  }
  await validateConfig(config, seed);
  const temp = await writeTempConfig(config);
  const args = [
    "windows",
    "--seed",
    String(seed),
    "--count",
    String(count),
    "--format",
    "raw",
    "--out",
    "-",
  ];
  if (temp.path) {
    args.push("--config", temp.path);
  }
  return new WindowStream(spawnStream(args), temp);
}

/** Free-function spelling of the stream operations. */
export function nextBatch(stream: SeriesStream): Promise<Matrix | null> {
  return stream.nextBatch();
}

export function nextWindows(stream: WindowStream, n: number): Promise<WindowBlock | null> {
  return stream.nextWindows(n);
}
