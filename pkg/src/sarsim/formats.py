"""On-disk encodings for generated series and training windows.

Raw series layout, one block per batch:

    offset 0   magic "SRSM" (4 bytes)
    offset 4   version, u16 little-endian
    offset 6   B, u32 little-endian
    offset 10  T, u32 little-endian
    offset 14  reserved (2 bytes, zero)
    offset 16  B * T float32 little-endian, row-major

Raw window layout: one 20-byte header (magic "SRSW", version u16, record
count u32, context length u32, target length u32, 2 reserved bytes) followed
by records of (pad_len u32, context float32s, target float32s).

Payloads are float32 because downstream training consumes 32-bit; all
internal computation stays in float64.
"""

from __future__ import annotations

import json
import struct
from typing import BinaryIO, Iterator

import numpy as np

from .errors import FormatError

__all__ = [
    "RAW_VERSION",
    "write_raw_batch",
    "read_raw_batches",
    "write_csv_batch",
    "read_csv_rows",
    "write_jsonl_batch",
    "read_jsonl_rows",
    "write_raw_windows_header",
    "write_raw_window",
    "read_raw_windows",
    "write_jsonl_window",
    "read_jsonl_windows",
]

RAW_MAGIC = b"SRSM"
RAW_WINDOW_MAGIC = b"SRSW"
RAW_VERSION = 1

_BATCH_HEADER = struct.Struct("<4sHII2x")
_WINDOW_HEADER = struct.Struct("<4sHIII2x")
_PAD_LEN = struct.Struct("<I")


def _as_f32(data: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(data, dtype="<f4")


def write_raw_batch(fp: BinaryIO, data: np.ndarray) -> None:
    rows, length = data.shape
    fp.write(_BATCH_HEADER.pack(RAW_MAGIC, RAW_VERSION, rows, length))
    fp.write(_as_f32(data).tobytes())


def read_raw_batches(fp: BinaryIO) -> Iterator[np.ndarray]:
    """Decode consecutive batch blocks until end of file."""
    while True:
        header = fp.read(_BATCH_HEADER.size)
        if not header:
            return
        if len(header) < _BATCH_HEADER.size:
            raise FormatError("truncated batch header")
        magic, version, rows, length = _BATCH_HEADER.unpack(header)
        if magic != RAW_MAGIC:
            raise FormatError(f"bad magic {magic!r}")
        if version != RAW_VERSION:
            raise FormatError(f"unsupported version {version}")
        payload = fp.read(rows * length * 4)
        if len(payload) < rows * length * 4:
            raise FormatError("payload shorter than header promises")
        yield np.frombuffer(payload, dtype="<f4").reshape(rows, length)


def write_csv_batch(fp, data: np.ndarray) -> None:
    for row in _as_f32(data):
        fp.write(",".join(repr(float(v)) for v in row))
        fp.write("\n")


def read_csv_rows(fp) -> Iterator[np.ndarray]:
    for line in fp:
        line = line.strip()
        if line:
            yield np.array([np.float32(v) for v in line.split(",")])


def write_jsonl_batch(fp, data: np.ndarray, batch_index: int) -> None:
    for i, row in enumerate(_as_f32(data)):
        fp.write(json.dumps({"batch": batch_index, "row": i,
                             "values": [float(v) for v in row]}))
        fp.write("\n")


def read_jsonl_rows(fp) -> Iterator[np.ndarray]:
    for line in fp:
        line = line.strip()
        if line:
            yield np.array(json.loads(line)["values"], dtype=np.float32)


def write_raw_windows_header(fp: BinaryIO, count: int, context_len: int,
                             target_len: int) -> None:
    fp.write(_WINDOW_HEADER.pack(RAW_WINDOW_MAGIC, RAW_VERSION, count,
                                 context_len, target_len))


def write_raw_window(fp: BinaryIO, context: np.ndarray, pad_len: int,
                     target: np.ndarray) -> None:
    fp.write(_PAD_LEN.pack(pad_len))
    fp.write(_as_f32(context).tobytes())
    fp.write(_as_f32(target).tobytes())


def read_raw_windows(fp: BinaryIO) -> Iterator[tuple[np.ndarray, int, np.ndarray]]:
    header = fp.read(_WINDOW_HEADER.size)
    if len(header) < _WINDOW_HEADER.size:
        raise FormatError("truncated window header")
    magic, version, count, ctx_len, tgt_len = _WINDOW_HEADER.unpack(header)
    if magic != RAW_WINDOW_MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != RAW_VERSION:
        raise FormatError(f"unsupported version {version}")
    for _ in range(count):
        pad_blob = fp.read(_PAD_LEN.size)
        body = fp.read((ctx_len + tgt_len) * 4)
        if len(pad_blob) < _PAD_LEN.size or len(body) < (ctx_len + tgt_len) * 4:
            raise FormatError("truncated window record")
        (pad_len,) = _PAD_LEN.unpack(pad_blob)
        values = np.frombuffer(body, dtype="<f4")
        yield values[:ctx_len], pad_len, values[ctx_len:]


def write_jsonl_window(fp, context: np.ndarray, pad_len: int,
                       target: np.ndarray, index: int) -> None:
    fp.write(json.dumps({
        "index": index,
        "pad_len": pad_len,
        "context": [float(v) for v in _as_f32(context)],
        "target": [float(v) for v in _as_f32(target)],
    }))
    fp.write("\n")


def read_jsonl_windows(fp) -> Iterator[tuple[np.ndarray, int, np.ndarray]]:
    for line in fp:
        line = line.strip()
        if line:
            rec = json.loads(line)
            yield (np.array(rec["context"], dtype=np.float32), rec["pad_len"],
                   np.array(rec["target"], dtype=np.float32))


def write_sidecar(path: str, metadata: dict) -> None:
    with open(path, "w") as fp:
        json.dump(metadata, fp, indent=2, sort_keys=True)
        fp.write("\n")
