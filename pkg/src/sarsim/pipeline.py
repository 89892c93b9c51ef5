"""Top-level sampler: draw a full generation recipe, run the structured stage,
the interaction stage and the noise stage, reject degenerate output, and cut
training windows.

Every batch is a pure function of (master_seed, batch_index, config): the
random streams involved live on fixed lanes below the batch index, so batches
can be produced in any order, on any number of workers, with identical bytes.
A GenerationRecipe records everything needed to rebuild one batch exactly.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, fields
from typing import Iterator

import numpy as np

from ._version import __version__
from .errors import DivergenceError, GenerationError, ParameterError
from .noisers import FAMILIES, NoiserSpec, apply, sample_noiser_spec
from .rng import StreamKey, uniform
from .sarima import (DEFAULT_FIR_TAPS, DIVERGENCE_CLIP, SarimaSpec,
                     SeriesBatch, sample_spec, unroll, warmup_length)
from .sarima2 import Sarima2Spec, compose, sample_sarima2_spec

__all__ = [
    "SimulatorConfig",
    "GenerationRecipe",
    "TrainingWindow",
    "sample_recipe",
    "generate_batch",
    "replay",
    "extract_window",
    "stream",
    "windows",
]

SARIMA = "sarima"
SARIMA2 = "sarima2"

# Lane tags under (batch_index, attempt, tag).
_LANE_SPEC = 0
_LANE_BASE = 1
_LANE_ENV = 2
_LANE_NOISE = 3
_LANE_WINDOW = 4


@dataclass(frozen=True)
class SimulatorConfig:
    """Generation distribution and engine knobs, with the published defaults."""

    sequence_length: int = 6000
    batch_size: int = 256
    max_ar_order: int = 10
    max_ma_order: int = 3
    max_seasonal_ar_order: int = 2
    max_seasonal_ma_order: int = 2
    max_season: int = 52
    ar_radius_max: float = 0.9
    seasonal_radius_max: float = 0.1
    season_pairs: tuple = ((24, 7), (7, 52), (0, 7), (0, 3), (0, 24), (0, 52))
    sarima2_probability: float = 0.5
    mixing_probability: float = 0.5
    noiser_families: tuple = FAMILIES
    poisson_rate: tuple = (0.1, 100.0)
    gen_gamma_rate: tuple = (0.1, 100.0)
    gen_gamma_shape: tuple = (1.0, 50.0)
    gen_gamma_power: tuple = (0.5, 1.5)
    lognormal_rate: tuple = (0.1, 5.0)
    lognormal_shape: tuple = (1.0, 3.0)
    context_length: int = 4096
    horizon: int = 512
    pad_max: int = 4088
    max_retries: int = 8
    fir_taps: int = DEFAULT_FIR_TAPS
    divergence_clip: float = DIVERGENCE_CLIP

    def __post_init__(self):
        problems = self.problems()
        if problems:
            raise ParameterError("invalid config: " + "; ".join(problems))

    def problems(self) -> list[str]:
        out = []

        def check(cond, msg):
            if not cond:
                out.append(msg)

        check(self.sequence_length >= 2, "sequence_length must be at least 2")
        check(self.batch_size >= 1, "batch_size must be at least 1")
        for name in ("max_ar_order", "max_ma_order", "max_seasonal_ar_order",
                     "max_seasonal_ma_order"):
            v = getattr(self, name)
            check(isinstance(v, int) and 0 <= v <= 64,
                  f"{name} must be an integer in [0, 64]")
        check(isinstance(self.max_season, int) and 0 <= self.max_season <= 512,
              "max_season must be an integer in [0, 512]")
        for name in ("ar_radius_max", "seasonal_radius_max"):
            v = getattr(self, name)
            check(0.0 < v < 1.0, f"{name} must lie in (0, 1)")
        check(len(self.season_pairs) >= 1, "season_pairs must be nonempty")
        for pair in self.season_pairs:
            ok = (len(pair) == 2 and all(isinstance(s, int) for s in pair)
                  and all(0 <= s <= 512 for s in pair))
            check(ok, f"season pair {pair!r} must be two integers in [0, 512]")
        for name in ("sarima2_probability", "mixing_probability"):
            v = getattr(self, name)
            check(0.0 <= v <= 1.0, f"{name} must lie in [0, 1]")
        check(len(self.noiser_families) >= 1
              and all(f in FAMILIES for f in self.noiser_families),
              f"noiser_families must be a nonempty subset of {FAMILIES}")
        for name in ("poisson_rate", "gen_gamma_rate", "gen_gamma_shape",
                     "lognormal_rate", "lognormal_shape"):
            lo, hi = getattr(self, name)
            check(0.0 < lo <= hi, f"{name} must satisfy 0 < lo <= hi")
        lo, hi = self.gen_gamma_power
        check(0.0 < lo <= hi, "gen_gamma_power must satisfy 0 < lo <= hi")
        check(self.context_length >= 1, "context_length must be positive")
        check(self.horizon >= 1, "horizon must be positive")
        check(0 <= self.pad_max < self.context_length,
              "pad_max must lie in [0, context_length)")
        check(self.context_length + self.horizon <= self.sequence_length,
              "context_length + horizon must not exceed sequence_length")
        check(self.max_retries >= 1, "max_retries must be at least 1")
        check(self.fir_taps >= 1, "fir_taps must be positive")
        check(self.divergence_clip > 0.0, "divergence_clip must be positive")
        return out

    @classmethod
    def from_mapping(cls, mapping: dict) -> "SimulatorConfig":
        """Build from a plain JSON mapping; reports every problem at once."""
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(mapping) - known)
        if unknown:
            raise ParameterError(
                "invalid config: unknown keys: " + ", ".join(unknown))
        kwargs = {}
        for key, value in mapping.items():
            if key == "season_pairs":
                value = tuple(tuple(int(s) for s in pair) for pair in value)
            elif isinstance(value, list):
                value = tuple(value)
            kwargs[key] = value
        return cls(**kwargs)

    def to_mapping(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "season_pairs":
                v = [list(p) for p in v]
            elif isinstance(v, tuple):
                v = list(v)
            out[f.name] = v
        return out

    def digest(self) -> str:
        return _sha256_json(self.to_mapping())


def _sha256_json(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class GenerationRecipe:
    """Everything needed to rebuild one emitted batch byte for byte."""

    master_seed: int
    batch_index: int
    attempt: int
    batch_size: int
    length: int
    fir_taps: int
    divergence_clip: float
    structured_kind: str
    structured: SarimaSpec | Sarima2Spec
    noiser: NoiserSpec
    engine_version: str = __version__

    def to_dict(self) -> dict:
        return {
            "engine_version": self.engine_version,
            "master_seed": self.master_seed,
            "batch_index": self.batch_index,
            "attempt": self.attempt,
            "batch_size": self.batch_size,
            "length": self.length,
            "fir_taps": self.fir_taps,
            "divergence_clip": self.divergence_clip,
            "structured_kind": self.structured_kind,
            "structured": self.structured.to_dict(),
            "noiser": self.noiser.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GenerationRecipe":
        kind = d["structured_kind"]
        spec_cls = Sarima2Spec if kind == SARIMA2 else SarimaSpec
        return cls(master_seed=d["master_seed"], batch_index=d["batch_index"],
                   attempt=d["attempt"], batch_size=d["batch_size"],
                   length=d["length"], fir_taps=d["fir_taps"],
                   divergence_clip=d["divergence_clip"], structured_kind=kind,
                   structured=spec_cls.from_dict(d["structured"]),
                   noiser=NoiserSpec.from_dict(d["noiser"]),
                   engine_version=d["engine_version"])

    def digest(self) -> str:
        return _sha256_json(self.to_dict())


@dataclass
class TrainingWindow:
    """A context slice with simulated left padding, and its forecast target."""

    context: np.ndarray
    pad_len: int
    target: np.ndarray

    @property
    def pad_mask(self) -> np.ndarray:
        """True where the context was zeroed out."""
        return np.arange(len(self.context)) < self.pad_len


def sample_recipe(master_seed: int, batch_index: int, config: SimulatorConfig,
                  attempt: int = 0) -> GenerationRecipe:
    """Draw the full generation recipe for one batch without simulating it."""
    g = StreamKey(master_seed, (batch_index, attempt, _LANE_SPEC)).stream()
    if uniform(g, 0.0, 1.0) < config.sarima2_probability:
        kind = SARIMA2
        structured: SarimaSpec | Sarima2Spec = sample_sarima2_spec(g, config)
    else:
        kind = SARIMA
        structured = sample_spec(g, config)
    noiser = sample_noiser_spec(g, config)
    return GenerationRecipe(
        master_seed=master_seed, batch_index=batch_index, attempt=attempt,
        batch_size=config.batch_size, length=config.sequence_length,
        fir_taps=config.fir_taps, divergence_clip=config.divergence_clip,
        structured_kind=kind, structured=structured, noiser=noiser)


def _structured_data(recipe: GenerationRecipe) -> np.ndarray:
    """Run the structured and interaction stages; warmup is trimmed here."""
    seed, k, a = recipe.master_seed, recipe.batch_index, recipe.attempt
    B, T = recipe.batch_size, recipe.length
    taps, clip = recipe.fir_taps, recipe.divergence_clip

    def run(spec: SarimaSpec, lane: int, length: int) -> np.ndarray:
        w = warmup_length(spec)
        key = StreamKey(seed, (k, a, lane))
        batch = unroll(spec, key, B, length + w, fir_taps=taps, clip=clip)
        return batch.data[:, w:]

    if recipe.structured_kind == SARIMA:
        return run(recipe.structured, _LANE_BASE, T)
    s2: Sarima2Spec = recipe.structured
    base = run(s2.base_spec, _LANE_BASE, T)
    env_len = -(-T // s2.upsample_factor)
    env = run(s2.env_spec, _LANE_ENV, env_len)
    return compose(base, env, s2)


def replay(recipe: GenerationRecipe) -> np.ndarray:
    """Rebuild the exact data of a stored recipe (no resampling, no retries)."""
    data = _structured_data(recipe)
    g = StreamKey(recipe.master_seed,
                  (recipe.batch_index, recipe.attempt, _LANE_NOISE)).stream()
    return apply(data, recipe.noiser, g)


def _degenerate(data: np.ndarray, clip: float) -> bool:
    if not np.isfinite(data).all() or np.abs(data).max() > clip:
        return True
    # Constant trajectories carry no training signal and break the rate
    # normalization downstream.
    spans = data.max(axis=-1) - data.min(axis=-1)
    return bool((spans == 0.0).any())


def generate_batch(master_seed: int, batch_index: int,
                   config: SimulatorConfig) -> tuple[SeriesBatch, GenerationRecipe]:
    """Produce one accepted batch, resampling degenerate draws up to the cap."""
    recipe = None
    for attempt in range(config.max_retries):
        recipe = sample_recipe(master_seed, batch_index, config, attempt)
        try:
            data = replay(recipe)
        except DivergenceError:
            continue
        if _degenerate(data, config.divergence_clip):
            continue
        batch = SeriesBatch(data, recipe.structured,
                            StreamKey(master_seed, (batch_index, attempt)))
        return batch, recipe
    raise GenerationError(
        f"batch {batch_index}: no acceptable draw in {config.max_retries} attempts",
        recipe=recipe)


def extract_window(row: np.ndarray, g, config: SimulatorConfig) -> TrainingWindow:
    """Cut one training window from a trajectory.

    A contiguous slice of context_length + horizon samples starts at a uniform
    position; the left pad_len context values are zeroed to simulate shorter
    histories; the trailing horizon samples become the target.
    """
    row = np.asarray(row, dtype=np.float64)
    total = config.context_length + config.horizon
    if row.shape[-1] < total:
        raise ParameterError(
            f"series of length {row.shape[-1]} is shorter than a window ({total})")
    start = int(g.integers(0, row.shape[-1] - total + 1))
    pad = int(g.integers(0, config.pad_max + 1))
    chunk = row[start:start + total]
    context = chunk[:config.context_length].copy()
    context[:pad] = 0.0
    target = chunk[config.context_length:].copy()
    return TrainingWindow(context=context, pad_len=pad, target=target)


def stream(master_seed: int, config: SimulatorConfig,
           count: int | None = None) -> Iterator[tuple[SeriesBatch, GenerationRecipe]]:
    """Lazily yield batches on lanes 0, 1, 2, ... under one master seed."""
    k = 0
    while count is None or k < count:
        yield generate_batch(master_seed, k, config)
        k += 1


def windows(master_seed: int, config: SimulatorConfig,
            count: int) -> Iterator[TrainingWindow]:
    """Yield training windows, one per generated trajectory, batch by batch."""
    emitted = 0
    for batch, recipe in stream(master_seed, config):
        g = StreamKey(master_seed,
                      (recipe.batch_index, recipe.attempt, _LANE_WINDOW)).stream()
        for row in batch.data:
            if emitted >= count:
                return
            yield extract_window(row, g, config)
            emitted += 1
