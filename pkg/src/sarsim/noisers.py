"""Rate-conditioned stochastic perturbation layer.

The structured signal enters only through a level-normalized rate, which ties
noise variability to the local level: positions near the series minimum get
rate near zero, positions near the maximum get the full base rate. The noised
series IS the draw; there is no additive recombination with the input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .rng import gamma, log_uniform, lognormal, poisson, uniform

__all__ = [
    "NoiserSpec",
    "FAMILIES",
    "sample_noiser_spec",
    "rate_track",
    "apply_poisson",
    "apply_gen_gamma",
    "apply_lognormal",
    "apply",
]

POISSON = "poisson"
GEN_GAMMA = "gen_gamma"
LOGNORMAL = "lognormal"
PASSTHROUGH = "passthrough"
FAMILIES = (POISSON, GEN_GAMMA, LOGNORMAL, PASSTHROUGH)


@dataclass(frozen=True)
class NoiserSpec:
    family: str
    lambda0: float | None = None
    kappa: float | None = None
    zeta: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown noiser family {self.family!r}")
        if self.family != PASSTHROUGH and not (self.lambda0 and self.lambda0 > 0):
            raise ParameterError("stochastic noisers require a positive base rate")
        if self.family in (GEN_GAMMA, LOGNORMAL) and not (self.kappa and self.kappa > 0):
            raise ParameterError(f"{self.family} requires a positive shape")

    def to_dict(self) -> dict:
        return {"family": self.family, "lambda0": self.lambda0,
                "kappa": self.kappa, "zeta": self.zeta}

    @classmethod
    def from_dict(cls, d: dict) -> "NoiserSpec":
        return cls(**d)


def sample_noiser_spec(g, config) -> NoiserSpec:
    """Draw the family uniformly, then its rate/shape/power hyperparameters."""
    family = config.noiser_families[int(g.integers(0, len(config.noiser_families)))]
    if family == PASSTHROUGH:
        return NoiserSpec(PASSTHROUGH)
    if family == POISSON:
        lam0 = float(log_uniform(g, *config.poisson_rate))
        return NoiserSpec(POISSON, lambda0=lam0)
    if family == GEN_GAMMA:
        lam0 = float(log_uniform(g, *config.gen_gamma_rate))
        kappa = float(log_uniform(g, *config.gen_gamma_shape))
        zeta = float(uniform(g, *config.gen_gamma_power))
        return NoiserSpec(GEN_GAMMA, lambda0=lam0, kappa=kappa, zeta=zeta)
    if family == LOGNORMAL:
        lam0 = float(log_uniform(g, *config.lognormal_rate))
        kappa = float(log_uniform(g, *config.lognormal_shape))
        return NoiserSpec(LOGNORMAL, lambda0=lam0, kappa=kappa)
    raise ParameterError(f"unknown noiser family {family!r}")


def rate_track(y: np.ndarray, lambda0: float) -> np.ndarray:
    """Level-normalized rate per trajectory: lambda0 * (y - min) / (max - min).

    A constant trajectory gets the midpoint rate lambda0 / 2 everywhere.
    """
    y = np.asarray(y, dtype=np.float64)
    if y.shape[-1] == 0:
        raise ParameterError("rate_track requires a nonempty series")
    lo = y.min(axis=-1, keepdims=True)
    hi = y.max(axis=-1, keepdims=True)
    span = hi - lo
    degenerate = span == 0.0
    if degenerate.any():
        safe = np.where(degenerate, 1.0, span)
        lam = lambda0 * ((y - lo) / safe)
        return np.where(degenerate, lambda0 / 2.0, lam)
    # Normalize before scaling so the extremes map to 0 and lambda0 exactly.
    return lambda0 * ((y - lo) / span)


def apply_poisson(y: np.ndarray, spec: NoiserSpec, g) -> np.ndarray:
    lam = rate_track(y, spec.lambda0)
    return poisson(g, lam).astype(np.float64)


def apply_gen_gamma(y: np.ndarray, spec: NoiserSpec, g) -> np.ndarray:
    """Gamma draws with shape kappa and mean lambda_t, raised to the power zeta.

    Drawn as standard Gamma(kappa) scaled by lambda_t / kappa, so zero-rate
    positions come out exactly zero.
    """
    lam = rate_track(y, spec.lambda0)
    raw = gamma(g, spec.kappa, 1.0, size=lam.shape) * (lam / spec.kappa)
    zeta = 1.0 if spec.zeta is None else spec.zeta
    return raw ** zeta


def apply_lognormal(y: np.ndarray, spec: NoiserSpec, g) -> np.ndarray:
    lam = rate_track(y, spec.lambda0)
    return lognormal(g, lam, spec.kappa)


def apply(y: np.ndarray, spec: NoiserSpec, g=None) -> np.ndarray:
    """Dispatch on the family; passthrough returns the input unchanged."""
    if spec.family == PASSTHROUGH:
        return y
    if g is None:
        raise ParameterError("stochastic noisers need a random stream")
    if spec.family == POISSON:
        return apply_poisson(y, spec, g)
    if spec.family == GEN_GAMMA:
        return apply_gen_gamma(y, spec, g)
    if spec.family == LOGNORMAL:
        return apply_lognormal(y, spec, g)
    raise ParameterError(f"unknown noiser family {spec.family!r}")
