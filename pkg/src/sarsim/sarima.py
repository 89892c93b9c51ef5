"""Seasonal autoregressive integrated moving-average simulation.

A resolved spec carries the orders, the expanded (stable) lag-polynomial
coefficients, the seasonal period, and the integration orders. Unrolling a
spec runs four stages over a batch of trajectories:

  1. warmup: presample the initial state and innovations,
  2. recursion: the sequential time-domain loop (compiled kernel),
  3. seasonal integration: one in-order pass y[t] += y[t-s] when enabled,
  4. fractional integration of order d' in [0, 1], realized as the FIR
     differencing filter of order 1-d' followed by a cumulative sum, so the
     endpoints recover the identity (d'=0) and the plain integrator (d'=1).

The nonseasonal and seasonal AR parts are never mixed in one sampled spec:
their joint stability region is thin and nonconvex, so a fair coin keeps one
of the two, each of which is stable by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import scipy.fft as _fft

from . import kernels
from .errors import DivergenceError, ParameterError
from .polyroots import AR, MA, expand, sample_pole_set
from .rng import StreamKey, uniform

__all__ = [
    "SarimaSpec",
    "SeriesBatch",
    "sample_spec",
    "warmup_length",
    "unroll",
    "integrate",
    "frac_diff_filter",
    "apply_fractional_integration",
    "DIVERGENCE_CLIP",
    "DEFAULT_FIR_TAPS",
]

# Values beyond this modulus abort the batch: heavy integration schedules can
# overflow doubles even when every pole is stable.
DIVERGENCE_CLIP = 1e12

# Fractional filter truncation; coefficients decay like i^(-1-d'), tail mass
# beyond 512 taps is below 1e-3 relative for d' <= 1.
DEFAULT_FIR_TAPS = 512

_EMPTY = np.empty(0, dtype=np.float64)


@dataclass(frozen=True)
class SarimaSpec:
    """A fully resolved parameterization of the simulated process."""

    p: int
    q: int
    P: int
    Q: int
    s: int
    d_frac: float
    D: int
    ar: np.ndarray = field(default_factory=lambda: _EMPTY)
    ma: np.ndarray = field(default_factory=lambda: _EMPTY)
    sar: np.ndarray = field(default_factory=lambda: _EMPTY)
    sma: np.ndarray = field(default_factory=lambda: _EMPTY)
    innovation_sigma: float = 1.0

    def __post_init__(self):
        for name in ("ar", "ma", "sar", "sma"):
            object.__setattr__(self, name,
                               np.asarray(getattr(self, name), dtype=np.float64))
        if len(self.ar) != self.p or len(self.ma) != self.q:
            raise ParameterError("ar/ma coefficient lengths must match p/q")
        if len(self.sar) != self.P or len(self.sma) != self.Q:
            raise ParameterError("sar/sma coefficient lengths must match P/Q")
        if self.s <= 1 and (self.P or self.Q or self.D):
            raise ParameterError("seasonal orders require a period s >= 2")
        if self.D not in (0, 1):
            raise ParameterError("seasonal integration order must be 0 or 1")
        if not 0.0 <= self.d_frac <= 1.0:
            raise ParameterError("fractional order must lie in [0, 1]")
        if not self.innovation_sigma > 0.0:
            raise ParameterError("innovation sigma must be positive")

    def stationary(self) -> "SarimaSpec":
        """The same dynamics with every integrator switched off."""
        return replace(self, d_frac=0.0, D=0)

    def to_dict(self) -> dict:
        return {
            "p": self.p, "q": self.q, "P": self.P, "Q": self.Q,
            "s": self.s, "d_frac": self.d_frac, "D": self.D,
            "ar": self.ar.tolist(), "ma": self.ma.tolist(),
            "sar": self.sar.tolist(), "sma": self.sma.tolist(),
            "innovation_sigma": self.innovation_sigma,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SarimaSpec":
        return cls(**d)


@dataclass
class SeriesBatch:
    """B trajectories of equal length sharing one generating spec."""

    data: np.ndarray
    spec: SarimaSpec
    stream_key: StreamKey


def sample_spec(g, config, season: int | None = None) -> SarimaSpec:
    """Draw a full spec: orders, mixture coin, period, poles, coefficients.

    `season` pins the period (the superposition layer uses this); otherwise
    the period is drawn uniformly from {0..max_season}.
    """
    p = int(g.integers(0, config.max_ar_order + 1))
    q = int(g.integers(0, config.max_ma_order + 1))
    P = int(g.integers(0, config.max_seasonal_ar_order + 1))
    Q = int(g.integers(0, config.max_seasonal_ma_order + 1))
    # Fair coin keeps exactly one of the two AR sides.
    if uniform(g, 0.0, 1.0) < 0.5:
        p = 0
    else:
        P = 0
    if season is None:
        s = int(g.integers(0, config.max_season + 1))
    else:
        s = int(season)
    d_frac = float(uniform(g, 0.0, 1.0))
    if s <= 1:
        P = Q = 0
        D = 0
    else:
        D = 1
    ar = expand(sample_pole_set(g, p, config.ar_radius_max), AR).coefficients
    ma = expand(sample_pole_set(g, q, config.ar_radius_max), MA).coefficients
    sar = expand(sample_pole_set(g, P, config.seasonal_radius_max), AR).coefficients
    sma = expand(sample_pole_set(g, Q, config.seasonal_radius_max), MA).coefficients
    return SarimaSpec(p=p, q=q, P=P, Q=Q, s=s, d_frac=d_frac, D=D,
                      ar=ar, ma=ma, sar=sar, sma=sma)


def warmup_length(spec: SarimaSpec) -> int:
    """Presampled prefix covering the longest lag dependency.

    The nonseasonal integration is fractional with order at most one, so its
    contribution to the lag budget is a single step.
    """
    return max(spec.p, spec.q, spec.P * spec.s, spec.Q * spec.s,
               1 + spec.D * spec.s)


def unroll(spec: SarimaSpec, key: StreamKey, batch_size: int, length: int,
           fir_taps: int = DEFAULT_FIR_TAPS,
           clip: float = DIVERGENCE_CLIP) -> SeriesBatch:
    """Simulate `batch_size` trajectories of `length` samples.

    The warmup prefix stays in band; trimming it is the pipeline's concern.
    Raises DivergenceError when any intermediate value is non-finite or
    exceeds the clip; the caller resamples.
    """
    if batch_size < 1:
        raise ParameterError("batch_size must be at least 1")
    w = warmup_length(spec)
    if length <= w:
        raise ParameterError(
            f"length {length} must exceed the warmup length {w}")
    g = key.stream()
    sigma = spec.innovation_sigma
    warmup = g.standard_normal((batch_size, w))
    eps = g.standard_normal((batch_size, length))
    if sigma != 1.0:
        warmup *= sigma
        eps *= sigma
    y = np.empty((batch_size, length))
    y[:, :w] = warmup
    diverged = kernels.recursion(y, eps, spec.ar, spec.ma, spec.sar, spec.sma,
                                 spec.s, w, clip)
    if diverged:
        raise DivergenceError("recursion diverged", None)
    if spec.D == 1:
        y = integrate(y, season=spec.s)
    y = apply_fractional_integration(y, spec.d_frac, taps=min(length, fir_taps))
    # max(|y|) <= clip is False for NaN and inf alike, one pass over the data.
    if not np.abs(y).max() <= clip:
        raise DivergenceError("integrator pass diverged", None)
    return SeriesBatch(y, spec, key)


def integrate(data: np.ndarray, season: int | None = None) -> np.ndarray:
    """One in-order integrator pass: y[t] += y[t-1], or y[t] += y[t-season].

    The seasonal pass is a cumulative sum over each phase class, which is
    element-for-element the same additions as the sequential loop.
    """
    data = np.asarray(data, dtype=np.float64)
    if season is None:
        return np.cumsum(data, axis=-1)
    if season < 2:
        raise ParameterError(f"seasonal integration requires s >= 2, got {season}")
    n = data.shape[-1]
    pad = -n % season
    if pad:
        shape = data.shape[:-1] + (pad,)
        padded = np.concatenate([data, np.zeros(shape)], axis=-1)
    else:
        padded = data.copy()
    cycles = padded.reshape(data.shape[:-1] + (-1, season))
    np.cumsum(cycles, axis=-2, out=cycles)
    return padded[..., :n]


def frac_diff_filter(d_prime: float, taps: int) -> np.ndarray:
    """Binomial-coefficient FIR of the differencing operator of order d_prime.

    Built via the stable recurrence rho_0 = 1, rho_i = rho_{i-1} (i-1-d')/i,
    algebraically equal to the gamma-function ratio form.
    """
    if not 0.0 <= d_prime <= 1.0:
        raise ParameterError("d_prime must lie in [0, 1]")
    if taps < 1:
        raise ParameterError("taps must be positive")
    i = np.arange(1, taps, dtype=np.float64)
    # cumprod applies the recurrence factors in index order, exactly as a
    # sequential loop would.
    return np.concatenate([[1.0], np.cumprod((i - 1.0 - d_prime) / i)])


def _causal_convolve(data: np.ndarray, h: np.ndarray) -> np.ndarray:
    n = data.shape[-1]
    nfft = _fft.next_fast_len(n + len(h) - 1, real=True)
    spec = _fft.rfft(data, n=nfft, axis=-1)
    spec *= _fft.rfft(h, n=nfft)
    return _fft.irfft(spec, n=nfft, axis=-1)[..., :n]


def apply_fractional_integration(data: np.ndarray, d_prime: float,
                                 taps: int | None = None) -> np.ndarray:
    """Integrate to fractional order d_prime along the last axis.

    Realized as differencing of order (1 - d_prime) followed by a cumulative
    sum. d_prime = 0 short-circuits to an exact identity.
    """
    if not 0.0 <= d_prime <= 1.0:
        raise ParameterError("d_prime must lie in [0, 1]")
    data = np.asarray(data, dtype=np.float64)
    if d_prime == 0.0:
        return data.copy()
    if d_prime == 1.0:
        return np.cumsum(data, axis=-1)
    if taps is None:
        taps = min(data.shape[-1], DEFAULT_FIR_TAPS)
    h = frac_diff_filter(1.0 - d_prime, taps)
    return np.cumsum(_causal_convolve(data, h), axis=-1)
