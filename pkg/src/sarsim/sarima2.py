"""Superposition of two independent stable processes.

A high-frequency base and a low-frequency envelope are combined either
additively or multiplicatively. The envelope runs one step per base season
(zero-order hold upsampling); in the multiplicative case it is normalized to
[-1, 1] so the gain factor (1 + omega * env) stays inside [1-omega, 1+omega].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .rng import uniform
from .sarima import SarimaSpec, sample_spec

__all__ = [
    "Sarima2Spec",
    "sample_sarima2_spec",
    "normalize_envelope",
    "upsample_hold",
    "compose",
    "ADDITIVE",
    "MULTIPLICATIVE",
]

ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"


@dataclass(frozen=True)
class Sarima2Spec:
    base_spec: SarimaSpec
    env_spec: SarimaSpec
    mixing: str
    omega: float
    upsample_factor: int

    def __post_init__(self):
        if self.mixing not in (ADDITIVE, MULTIPLICATIVE):
            raise ParameterError(f"unknown mixing {self.mixing!r}")
        if not 0.0 <= self.omega <= 1.0:
            raise ParameterError("modulation depth must lie in [0, 1]")
        if self.upsample_factor < 1:
            raise ParameterError("upsample factor must be positive")

    def to_dict(self) -> dict:
        return {
            "base_spec": self.base_spec.to_dict(),
            "env_spec": self.env_spec.to_dict(),
            "mixing": self.mixing,
            "omega": self.omega,
            "upsample_factor": self.upsample_factor,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Sarima2Spec":
        return cls(base_spec=SarimaSpec.from_dict(d["base_spec"]),
                   env_spec=SarimaSpec.from_dict(d["env_spec"]),
                   mixing=d["mixing"], omega=d["omega"],
                   upsample_factor=d["upsample_factor"])


def sample_sarima2_spec(g, config) -> Sarima2Spec:
    """Pick a seasonality pair, sample both specs, draw mixing and depth."""
    pairs = config.season_pairs
    s_base, s_env = pairs[int(g.integers(0, len(pairs)))]
    base = sample_spec(g, config, season=s_base)
    env = sample_spec(g, config, season=s_env)
    mixing = ADDITIVE if uniform(g, 0.0, 1.0) < config.mixing_probability \
        else MULTIPLICATIVE
    omega = float(uniform(g, 0.0, 1.0))
    return Sarima2Spec(base_spec=base, env_spec=env, mixing=mixing,
                       omega=omega, upsample_factor=max(int(s_base), 1))


def normalize_envelope(env: np.ndarray) -> np.ndarray:
    """Affine map per trajectory sending (min, max) to (-1, +1).

    A constant trajectory maps to zeros, which turns the multiplicative
    composition into an identity instead of dividing by zero.
    """
    env = np.asarray(env, dtype=np.float64)
    if env.shape[-1] == 0:
        raise ParameterError("envelope must be nonempty")
    lo = env.min(axis=-1, keepdims=True)
    hi = env.max(axis=-1, keepdims=True)
    span = hi - lo
    safe = np.where(span == 0.0, 1.0, span)
    out = 2.0 * (env - lo) / safe - 1.0
    return np.where(span == 0.0, 0.0, out)


def upsample_hold(env: np.ndarray, factor: int, target_len: int) -> np.ndarray:
    """Repeat each envelope value `factor` times, cut to `target_len`."""
    if factor < 1:
        raise ParameterError("upsample factor must be positive")
    if target_len < 1:
        raise ParameterError("target length must be positive")
    env = np.asarray(env, dtype=np.float64)
    if env.shape[-1] * factor < target_len:
        raise ParameterError(
            f"envelope of length {env.shape[-1]} upsampled by {factor} "
            f"cannot cover {target_len} samples")
    return np.repeat(env, factor, axis=-1)[..., :target_len]


def compose(base: np.ndarray, env: np.ndarray, spec: Sarima2Spec) -> np.ndarray:
    """Combine base and envelope trajectories under the resolved mixing mode."""
    base = np.asarray(base, dtype=np.float64)
    target = base.shape[-1]
    if spec.mixing == ADDITIVE:
        up = upsample_hold(env, spec.upsample_factor, target)
        if up.shape != base.shape:
            raise ParameterError(
                f"shape mismatch after upsampling: {up.shape} vs {base.shape}")
        return base + up
    up = upsample_hold(normalize_envelope(env), spec.upsample_factor, target)
    if up.shape != base.shape:
        raise ParameterError(
            f"shape mismatch after upsampling: {up.shape} vs {base.shape}")
    return (1.0 + spec.omega * up) * base
