"""Deterministic, splittable random streams and every distribution sampler
used by the engine.

A stream is a pure function of (master_seed, lane): the lane is a hierarchical
path of integers hashed into the generator state, so distinct lanes yield
independent streams regardless of how draws interleave elsewhere. All
stochastic code in the engine draws through this module, which keeps the
whole pipeline reproducible across runs, platforms and worker counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

__all__ = [
    "StreamKey",
    "uniform",
    "log_uniform",
    "normal",
    "poisson",
    "gamma",
    "lognormal",
    "weibull",
]


@dataclass(frozen=True)
class StreamKey:
    """Address of one random stream: a master seed plus a lane path."""

    master_seed: int
    lane: tuple[int, ...] = ()

    def child(self, *indices: int) -> "StreamKey":
        return StreamKey(self.master_seed, self.lane + tuple(indices))

    def stream(self) -> np.random.Generator:
        """Materialize the stream. Pure: same key, same output, always."""
        seq = np.random.SeedSequence(entropy=self.master_seed,
                                     spawn_key=self.lane)
        return np.random.Generator(np.random.PCG64(seq))


def uniform(g: np.random.Generator, lo: float, hi: float, size=None):
    """Uniform draw on [lo, hi]; a degenerate interval returns lo."""
    if not lo <= hi:
        raise ParameterError(f"uniform requires lo <= hi, got [{lo}, {hi}]")
    if lo == hi:
        return lo if size is None else np.full(size, float(lo))
    return g.uniform(lo, hi, size=size)


def log_uniform(g: np.random.Generator, lo: float, hi: float, size=None):
    """exp(Uniform(ln lo, ln hi)); requires 0 < lo <= hi."""
    if not (lo > 0.0 and hi > 0.0):
        raise ParameterError(f"log_uniform requires positive bounds, got [{lo}, {hi}]")
    if not lo <= hi:
        raise ParameterError(f"log_uniform requires lo <= hi, got [{lo}, {hi}]")
    if lo == hi:
        return lo if size is None else np.full(size, float(lo))
    return np.exp(g.uniform(math.log(lo), math.log(hi), size=size))


def normal(g: np.random.Generator, mu: float, sigma: float, size=None):
    if not sigma >= 0.0:
        raise ParameterError(f"normal requires sigma >= 0, got {sigma}")
    return g.normal(mu, sigma, size=size)


def poisson(g: np.random.Generator, lam, size=None):
    """Poisson counts; exact for the full rate range (inversion for small
    rates, transformed rejection for large ones, per the generator's sampler)."""
    arr = np.asarray(lam, dtype=np.float64)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise ParameterError("poisson requires finite lambda >= 0")
    return g.poisson(lam, size=size)


def gamma(g: np.random.Generator, shape, scale, size=None):
    """Gamma draw with mean shape*scale; shapes below 1 are handled exactly."""
    sh = np.asarray(shape, dtype=np.float64)
    sc = np.asarray(scale, dtype=np.float64)
    if np.any(sh <= 0.0) or np.any(sc <= 0.0):
        raise ParameterError("gamma requires positive shape and scale")
    return g.gamma(shape, scale, size=size)


def lognormal(g: np.random.Generator, mu, sigma, size=None):
    sig = np.asarray(sigma, dtype=np.float64)
    if np.any(sig <= 0.0):
        raise ParameterError("lognormal requires sigma > 0")
    return g.lognormal(mu, sigma, size=size)


def weibull(g: np.random.Generator, scale: float, shape: float, size=None):
    """Weibull(scale, shape); median of Weibull(1, k) is (ln 2)^(1/k)."""
    if not (scale > 0.0 and shape > 0.0):
        raise ParameterError("weibull requires positive scale and shape")
    return scale * g.weibull(shape, size=size)
