"""Command-line surface: generation to files or pipes, window emission,
summary statistics, and the throughput benchmark.

Subcommands: generate, windows, bench, stats. Output is deterministic in
(config, seed) regardless of --workers: batches are keyed by their index and
written in index order.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import contextlib
import json
import os
import sys

import numpy as np

from . import baselines, formats, kernels, pipeline
from ._version import __version__
from .errors import FormatError, GenerationError, ParameterError
from .pipeline import SimulatorConfig
from .rng import StreamKey

MAX_SEED = 2**64


def _load_config(path: str | None) -> SimulatorConfig:
    if path is None:
        return SimulatorConfig()
    with open(path) as fp:
        try:
            mapping = json.load(fp)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"config {path} is not valid JSON: {exc}")
    if not isinstance(mapping, dict):
        raise ParameterError(f"config {path} must be a JSON object")
    return SimulatorConfig.from_mapping(mapping)


def _resolve_seed(arg: int | None) -> int:
    if arg is None:
        env = os.environ.get("SARSIM_SEED")
        arg = int(env, 0) if env else 0
    if not 0 <= arg < MAX_SEED:
        raise ParameterError(f"seed must be an unsigned 64-bit integer, got {arg}")
    return arg


def _open_out(path: str, binary: bool):
    if path == "-":
        return (sys.stdout.buffer if binary else sys.stdout), False
    return open(path, "wb" if binary else "w"), True


def _cleanup_partial(path: str) -> None:
    if path != "-" and os.path.exists(path):
        os.unlink(path)


def _batches(seed: int, config: SimulatorConfig, count: int, workers: int):
    """Yield (index, SeriesBatch, recipe) in index order, workers in flight."""
    if workers <= 1:
        for k in range(count):
            batch, recipe = pipeline.generate_batch(seed, k, config)
            yield k, batch, recipe
        return
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        pending = {}
        next_submit = 0
        for k in range(count):
            while next_submit < count and len(pending) < 2 * workers:
                pending[next_submit] = pool.submit(
                    pipeline.generate_batch, seed, next_submit, config)
                next_submit += 1
            batch, recipe = pending.pop(k).result()
            yield k, batch, recipe


def cmd_generate(args) -> int:
    config = _load_config(args.config)
    seed = _resolve_seed(args.seed)
    out, is_file = _open_out(args.out, binary=(args.format == "raw"))
    digests = []
    try:
        with out if is_file else contextlib.nullcontext(out) as fp:
            for k, batch, recipe in _batches(seed, config, args.count, args.workers):
                if args.format == "raw":
                    formats.write_raw_batch(fp, batch.data)
                elif args.format == "csv":
                    formats.write_csv_batch(fp, batch.data)
                else:
                    formats.write_jsonl_batch(fp, batch.data, k)
                digests.append({"index": k, "attempt": recipe.attempt,
                                "digest": recipe.digest()})
    except BaseException:
        if is_file:
            _cleanup_partial(args.out)
        raise
    if is_file:
        formats.write_sidecar(args.out + ".meta.json", {
            "engine_version": __version__,
            "seed": seed,
            "format": args.format,
            "config": config.to_mapping(),
            "config_digest": config.digest(),
            "batches": digests,
        })
    return 0


def cmd_windows(args) -> int:
    config = _load_config(args.config)
    seed = _resolve_seed(args.seed)
    out, is_file = _open_out(args.out, binary=(args.format == "raw"))
    try:
        with out if is_file else contextlib.nullcontext(out) as fp:
            if args.format == "raw":
                formats.write_raw_windows_header(
                    fp, args.count, config.context_length, config.horizon)
                for win in pipeline.windows(seed, config, args.count):
                    formats.write_raw_window(fp, win.context, win.pad_len,
                                             win.target)
            else:
                for i, win in enumerate(pipeline.windows(seed, config, args.count)):
                    formats.write_jsonl_window(fp, win.context, win.pad_len,
                                               win.target, i)
    except BaseException:
        if is_file:
            _cleanup_partial(args.out)
        raise
    return 0


def _sarsim_bench_config(config: SimulatorConfig, length: int) -> SimulatorConfig:
    mapping = config.to_mapping()
    mapping["sequence_length"] = length
    # Window geometry is irrelevant to generation speed; shrink it so short
    # bench lengths validate.
    mapping["context_length"] = max(1, length // 2)
    mapping["horizon"] = max(1, length // 4)
    mapping["pad_max"] = max(0, mapping["context_length"] - 1)
    return SimulatorConfig.from_mapping(mapping)


def _bench_factories(config: SimulatorConfig, seed: int, length: int,
                     names: list[str]):
    factories = {}
    for name in names:
        if name in ("sarsim", "sarsim-py"):
            bench_cfg = _sarsim_bench_config(config, length)
            backend = "python" if name == "sarsim-py" else None

            def produce(n, _cfg=bench_cfg, _backend=backend):
                prev = os.environ.get("SARSIM_PURE_PYTHON")
                if _backend == "python":
                    os.environ["SARSIM_PURE_PYTHON"] = "1"
                try:
                    made = 0
                    for _, batch, _recipe in _batches(seed, _cfg, n_batches(n, _cfg), 1):
                        made += batch.data.shape[0]
                finally:
                    if _backend == "python":
                        if prev is None:
                            os.environ.pop("SARSIM_PURE_PYTHON", None)
                        else:
                            os.environ["SARSIM_PURE_PYTHON"] = prev
                return made

            def n_batches(n, cfg):
                return -(-n // cfg.batch_size)

            factories[name] = produce
        elif name == "forecastpfn":
            def produce_fpfn(n, _length=length):
                g = StreamKey(seed, (0,)).stream()
                for _ in range(n):
                    spec = baselines.sample_forecastpfn_spec(g)
                    baselines.forecastpfn_generate(g, spec, _length)
                return n

            factories[name] = produce_fpfn
        elif name == "kernelsynth":
            def produce_ks(n, _length=length):
                g = StreamKey(seed, (1,)).stream()
                bank = baselines.default_kernel_bank(_length)
                for _ in range(n):
                    baselines.kernelsynth_generate(g, bank, length=_length)
                return n

            factories[name] = produce_ks
        else:
            raise ParameterError(f"unknown generator {name!r}")
    return factories


def cmd_bench(args) -> int:
    config = _load_config(args.config)
    seed = _resolve_seed(args.seed)
    names = [n for n in args.generators.split(",") if n]
    if not names:
        raise ParameterError("at least one generator is required")
    lengths = [int(v) for v in args.lengths.split(",") if v]
    if not lengths:
        raise ParameterError("at least one series length is required")
    all_rows = []
    for length in lengths:
        factories = _bench_factories(config, seed, length, names)
        counts = {}
        for name in names:
            if name in ("sarsim", "sarsim-py"):
                b = _sarsim_bench_config(config, length).batch_size
                counts[name] = -(-args.count // b) * b
            elif name == "kernelsynth":
                counts[name] = args.slow_count
            else:
                counts[name] = args.count
        all_rows.extend(baselines.bench_compare(factories, length, counts))
    header = f"{'generator':<14}{'length':>8}{'count':>8}{'s/series':>14}{'series/s':>12}"
    print(header)
    print("-" * len(header))
    for row in all_rows:
        print(f"{row.generator:<14}{row.series_len:>8}{row.count:>8}"
              f"{row.per_series_seconds:>14.6g}{row.series_per_second:>12.1f}")
    ref = {r.series_len: r for r in all_rows if r.generator == "sarsim"}
    for row in all_rows:
        if row.generator != "sarsim" and row.series_len in ref:
            ratio = row.per_series_seconds / ref[row.series_len].per_series_seconds
            print(f"ratio {row.generator} / sarsim @ {row.series_len}: "
                  f"{ratio:.1f}x")
    if args.out and args.out != "-":
        with open(args.out, "w") as fp:
            fp.write("generator,series_len,count,total_seconds,"
                     "per_series_seconds,series_per_second\n")
            for row in all_rows:
                fp.write(f"{row.generator},{row.series_len},{row.count},"
                         f"{row.total_seconds!r},{row.per_series_seconds!r},"
                         f"{row.series_per_second!r}\n")
    return 0


def _periodogram(row: np.ndarray) -> np.ndarray:
    x = row.astype(np.float64) - float(np.mean(row))
    spec = np.fft.rfft(x)
    return (spec.real**2 + spec.imag**2) / len(x)


def _describe_batch(data: np.ndarray, index: int, sample_rows: int = 3) -> None:
    rows, length = data.shape
    flat = data.astype(np.float64)
    print(f"batch {index}: B={rows} T={length} mean={flat.mean():.6g} "
          f"var={flat.var():.6g} min={flat.min():.6g} max={flat.max():.6g} "
          f"zero_fraction={float(np.mean(flat == 0.0)):.4f}")
    for r in range(min(sample_rows, rows)):
        power = _periodogram(data[r])[1:]
        if len(power) == 0:
            continue
        top = np.argsort(power)[::-1][:3]
        peaks = " ".join(f"bin={b + 1} power={power[b]:.4g}" for b in top)
        print(f"  row {r} top_periodogram_peaks: {peaks}")


def cmd_stats(args) -> int:
    path = args.in_path
    fmt = args.format
    if fmt is None:
        if path.endswith(".csv"):
            fmt = "csv"
        elif path.endswith(".jsonl"):
            fmt = "jsonl"
        else:
            fmt = "raw"
    if fmt == "raw":
        with open(path, "rb") as fp:
            count = 0
            for k, data in enumerate(formats.read_raw_batches(fp)):
                _describe_batch(data, k)
                count += 1
        if count == 0:
            raise FormatError(f"{path} contains no batches")
    else:
        with open(path) as fp:
            reader = (formats.read_csv_rows if fmt == "csv"
                      else formats.read_jsonl_rows)
            rows = list(reader(fp))
        if not rows:
            raise FormatError(f"{path} contains no rows")
        _describe_batch(np.vstack(rows), 0)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sarsim",
        description="deterministic synthetic time-series generation engine "
                    f"(v{__version__}, {kernels.active_backend()} kernel)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_choices):
        p.add_argument("--config", help="JSON config path (defaults otherwise)")
        p.add_argument("--seed", type=lambda v: int(v, 0), default=None,
                       help="master seed; falls back to $SARSIM_SEED, then 0")
        p.add_argument("--format", choices=fmt_choices, default=fmt_choices[0])
        p.add_argument("--out", default="-", help="output path, - for stdout")

    gen = sub.add_parser("generate", help="emit batches of simulated series")
    common(gen, ["raw", "csv", "jsonl"])
    gen.add_argument("--count", type=int, default=1, help="number of batches")
    gen.add_argument("--workers", type=int, default=1)
    gen.set_defaults(func=cmd_generate)

    win = sub.add_parser("windows", help="emit training windows")
    common(win, ["jsonl", "raw"])
    win.add_argument("--count", type=int, default=256, help="number of windows")
    win.set_defaults(func=cmd_windows)

    ben = sub.add_parser("bench", help="throughput comparison of generators")
    ben.add_argument("--config", help="JSON config path")
    ben.add_argument("--seed", type=lambda v: int(v, 0), default=None)
    ben.add_argument("--lengths", default="1024", help="comma-separated lengths")
    ben.add_argument("--count", type=int, default=2048,
                     help="series per fast generator")
    ben.add_argument("--slow-count", type=int, default=16,
                     help="series for the kernel-composition generator")
    ben.add_argument("--generators", default="sarsim,forecastpfn,kernelsynth")
    ben.add_argument("--out", default=None, help="optional csv output path")
    ben.set_defaults(func=cmd_bench)

    sta = sub.add_parser("stats", help="summarize a generated file")
    sta.add_argument("in_path")
    sta.add_argument("--format", choices=["raw", "csv", "jsonl"], default=None,
                     help="inferred from the extension when omitted")
    sta.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, GenerationError, FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
