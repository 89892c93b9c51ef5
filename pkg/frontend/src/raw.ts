/**
 * Parsers for the engine's raw byte layouts.
 *
 * Series stream: per batch, a 16-byte header (magic "SRSM", version u16,
 * rows u32, length u32, 2 reserved bytes, little-endian) followed by
 * rows*length float32 values, row-major. Window stream: one 20-byte header
 * (magic "SRSW", version u16, record count u32, context length u32, target
 * length u32, 2 reserved bytes) then records of pad_len u32 + context +
 * target float32s.
 */

export const BATCH_MAGIC = 0x4d535253; // "SRSM" little-endian
export const WINDOW_MAGIC = 0x57535253; // "SRSW" little-endian
export const RAW_VERSION = 1;

export interface Matrix {
  data: Float32Array;
  rows: number;
  cols: number;
}

export function matrixRow(m: Matrix, i: number): Float32Array {
  if (i < 0 || i >= m.rows) {
    throw new RangeError(`row ${i} out of range for ${m.rows}x${m.cols}`);
  }
  return m.data.subarray(i * m.cols, (i + 1) * m.cols);
}

/** Copy a byte region into an aligned Float32Array (buffers may be offset). */
export function toFloat32(buf: Buffer, count: number): Float32Array {
  const out = new Float32Array(count);
  const bytes = new Uint8Array(out.buffer);
  bytes.set(buf.subarray(0, count * 4));
  return out;
}

export interface BatchHeader {
  rows: number;
  length: number;
}

export function parseBatchHeader(buf: Buffer): BatchHeader {
  const view = new DataView(buf.buffer, buf.byteOffset, buf.byteLength);
  if (view.getUint32(0, true) !== BATCH_MAGIC) {
    throw new Error("bad batch magic: not a raw series stream");
  }
  const version = view.getUint16(4, true);
  if (version !== RAW_VERSION) {
    throw new Error(`unsupported raw version ${version}`);
  }
  return { rows: view.getUint32(6, true), length: view.getUint32(10, true) };
}

export const BATCH_HEADER_BYTES = 16;

export interface WindowHeader {
  count: number;
  contextLength: number;
  targetLength: number;
}

export function parseWindowHeader(buf: Buffer): WindowHeader {
  const view = new DataView(buf.buffer, buf.byteOffset, buf.byteLength);
  if (view.getUint32(0, true) !== WINDOW_MAGIC) {
    throw new Error("bad window magic: not a raw window stream");
  }
  const version = view.getUint16(4, true);
  if (version !== RAW_VERSION) {
    throw new Error(`unsupported raw version ${version}`);
  }
  return {
    count: view.getUint32(6, true),
    contextLength: view.getUint32(10, true),
    targetLength: view.getUint32(14, true),
  };
}

export const WINDOW_HEADER_BYTES = 20;

/** Decode every batch in a fully buffered raw series file. */
export function decodeBatchFile(buf: Buffer): Matrix[] {
  const batches: Matrix[] = [];
  let offset = 0;
  while (offset < buf.length) {
    const header = parseBatchHeader(buf.subarray(offset, offset + BATCH_HEADER_BYTES));
    offset += BATCH_HEADER_BYTES;
    const values = header.rows * header.length;
    if (offset + values * 4 > buf.length) {
      throw new Error("payload shorter than header promises");
    }
    batches.push({
      data: toFloat32(buf.subarray(offset), values),
      rows: header.rows,
      cols: header.length,
    });
    offset += values * 4;
  }
  return batches;
}
