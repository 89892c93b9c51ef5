"""Reference generators used for throughput comparison.

Two competing synthetic-series approaches are reproduced here so the bench
harness can measure them under one roof: a multiplicative error-trend-
seasonality generator with Weibull noise, and a Gaussian-process generator
that composes random kernels and draws one path per covariance factorization.
Neither belongs to the main pipeline; both exist to quantify how much faster
recursion-based simulation is.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import GenerationError, ParameterError
from .rng import normal, uniform, weibull

__all__ = [
    "SeasonalComponent",
    "ForecastPfnSpec",
    "sample_forecastpfn_spec",
    "forecastpfn_generate",
    "KernelAtom",
    "KernelNode",
    "default_kernel_bank",
    "sample_kernel_expr",
    "kernel_matrix",
    "kernelsynth_generate",
    "BenchRow",
    "bench_compare",
]

# ---------------------------------------------------------------------------
# Error-trend-seasonality generator
# ---------------------------------------------------------------------------

STANDARD_PERIODS = {"week": 7.0, "month": 30.5, "year": 365.25}


@dataclass(frozen=True)
class SeasonalComponent:
    """One multiplicative seasonal factor with unit-normalized Fourier mix."""

    period: float
    amplitude: float
    sin_coeffs: np.ndarray
    cos_coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "sin_coeffs",
                           np.asarray(self.sin_coeffs, dtype=np.float64))
        object.__setattr__(self, "cos_coeffs",
                           np.asarray(self.cos_coeffs, dtype=np.float64))
        if len(self.sin_coeffs) != len(self.cos_coeffs):
            raise ParameterError("sin/cos coefficient lengths must match")


@dataclass(frozen=True)
class ForecastPfnSpec:
    m_lin: float
    c_lin: float
    m_exp: float
    c_exp: float
    components: tuple[SeasonalComponent, ...]
    m_noise: float
    weibull_shape: float


@dataclass(frozen=True)
class ForecastPfnPriors:
    """Prior widths; only the 1/f Fourier scaling is inherent to the scheme."""

    m_lin_sd: float = 0.01
    c_lin_sd: float = 0.5
    m_exp_sd: float = 0.05
    c_exp_sd: float = 0.001
    amplitude_max: float = 1.0
    m_noise_max: float = 0.5
    weibull_shape_range: tuple = (1.0, 5.0)


def _normalized_fourier(g, n_harmonics: int) -> tuple[np.ndarray, np.ndarray]:
    f = np.arange(1, n_harmonics + 1, dtype=np.float64)
    sin_c = normal(g, 0.0, 1.0, size=n_harmonics) / np.sqrt(f)
    cos_c = normal(g, 0.0, 1.0, size=n_harmonics) / np.sqrt(f)
    norm = math.sqrt(float(np.sum(sin_c**2) + np.sum(cos_c**2)))
    return sin_c / norm, cos_c / norm


def sample_forecastpfn_spec(g, priors: ForecastPfnPriors | None = None) -> ForecastPfnSpec:
    priors = priors or ForecastPfnPriors()
    comps = []
    for period in STANDARD_PERIODS.values():
        sin_c, cos_c = _normalized_fourier(g, int(period // 2))
        comps.append(SeasonalComponent(
            period=period,
            amplitude=float(uniform(g, 0.0, priors.amplitude_max)),
            sin_coeffs=sin_c, cos_coeffs=cos_c))
    return ForecastPfnSpec(
        m_lin=float(normal(g, 0.0, priors.m_lin_sd)),
        c_lin=float(normal(g, 0.0, priors.c_lin_sd)),
        m_exp=float(normal(g, 1.0, priors.m_exp_sd)),
        c_exp=float(normal(g, 1.0, priors.c_exp_sd)),
        components=tuple(comps),
        m_noise=float(uniform(g, 0.0, priors.m_noise_max)),
        weibull_shape=float(uniform(g, *priors.weibull_shape_range)))


def forecastpfn_generate(g, spec: ForecastPfnSpec, length: int) -> np.ndarray:
    """trend(t) * seasonal(t) * noise(t) on the integer grid t = 0..length-1."""
    if length < 1:
        raise ParameterError("length must be positive")
    t = np.arange(length, dtype=np.float64)
    trend = (1.0 + spec.m_lin * t + spec.c_lin) * (spec.m_exp * spec.c_exp**t)
    seasonal = np.ones(length)
    for comp in spec.components:
        f = np.arange(1, len(comp.sin_coeffs) + 1, dtype=np.float64)
        phase = 2.0 * np.pi * np.outer(t, f) / comp.period
        mix = np.sin(phase) @ comp.sin_coeffs + np.cos(phase) @ comp.cos_coeffs
        seasonal *= 1.0 + comp.amplitude * mix
    if spec.m_noise == 0.0:
        return trend * seasonal
    z = weibull(g, 1.0, spec.weibull_shape, size=length)
    z_bar = math.log(2.0) ** (1.0 / spec.weibull_shape)
    noise = 1.0 + spec.m_noise * (z - z_bar)
    return trend * seasonal * noise


# ---------------------------------------------------------------------------
# Kernel-composition generator
# ---------------------------------------------------------------------------

CONSTANT = "constant"
WHITE = "white"
LINEAR = "linear"
RBF = "rbf"
RATIONAL_QUADRATIC = "rational_quadratic"
PERIODIC = "periodic"

PERIODIC_CYCLE_COUNTS = (4, 6, 12, 24, 26, 30, 48, 52, 60, 96, 365, 730)


@dataclass(frozen=True)
class KernelAtom:
    kind: str
    params: dict = field(default_factory=dict)

    def matrix(self, t: np.ndarray) -> np.ndarray:
        delta = t[:, None] - t[None, :]
        p = self.params
        if self.kind == CONSTANT:
            return np.full((len(t), len(t)), p.get("variance", 1.0))
        if self.kind == WHITE:
            return p.get("variance", 1.0) * np.eye(len(t))
        if self.kind == LINEAR:
            return p.get("variance", 1.0) * np.outer(t, t)
        if self.kind == RBF:
            ell = p.get("lengthscale", 0.1)
            return np.exp(-(delta**2) / (2.0 * ell**2))
        if self.kind == RATIONAL_QUADRATIC:
            ell = p.get("lengthscale", 0.1)
            alpha = p.get("alpha", 1.0)
            return (1.0 + delta**2 / (2.0 * alpha * ell**2)) ** (-alpha)
        if self.kind == PERIODIC:
            ell = p.get("lengthscale", 1.0)
            period = p["period"]
            return np.exp(-2.0 * np.sin(np.pi * delta / period) ** 2 / ell**2)
        raise ParameterError(f"unknown kernel kind {self.kind!r}")


@dataclass(frozen=True)
class KernelNode:
    """Binary composition of two kernel expressions by + or *."""

    op: str
    left: "KernelNode | KernelAtom"
    right: "KernelNode | KernelAtom"

    def __post_init__(self):
        if self.op not in ("+", "*"):
            raise ParameterError(f"unknown kernel operator {self.op!r}")


def default_kernel_bank(length: int = 1024) -> list[KernelAtom]:
    """Atom bank on the unit grid; periodic periods are cycle counts / length."""
    bank = [
        KernelAtom(CONSTANT, {"variance": 1.0}),
        KernelAtom(WHITE, {"variance": 1.0}),
        KernelAtom(LINEAR, {"variance": 1.0}),
    ]
    for ell in (0.01, 0.1, 1.0):
        bank.append(KernelAtom(RBF, {"lengthscale": ell}))
    for alpha in (0.1, 1.0, 10.0):
        bank.append(KernelAtom(RATIONAL_QUADRATIC,
                               {"lengthscale": 0.1, "alpha": alpha}))
    for cycles in PERIODIC_CYCLE_COUNTS:
        bank.append(KernelAtom(PERIODIC,
                               {"lengthscale": 1.0, "period": cycles / length}))
    return bank


def sample_kernel_expr(g, bank: list[KernelAtom],
                       max_kernels: int = 5) -> "KernelNode | KernelAtom":
    """Pick 1..max_kernels atoms with replacement, fold with random + or *."""
    if max_kernels < 1:
        raise ParameterError("max_kernels must be at least 1")
    j = int(g.integers(1, max_kernels + 1))
    expr: KernelNode | KernelAtom = bank[int(g.integers(0, len(bank)))]
    for _ in range(j - 1):
        atom = bank[int(g.integers(0, len(bank)))]
        op = "+" if uniform(g, 0.0, 1.0) < 0.5 else "*"
        expr = KernelNode(op, expr, atom)
    return expr


def kernel_matrix(expr: "KernelNode | KernelAtom", t: np.ndarray) -> np.ndarray:
    if isinstance(expr, KernelAtom):
        return expr.matrix(t)
    left = kernel_matrix(expr.left, t)
    right = kernel_matrix(expr.right, t)
    return left + right if expr.op == "+" else left * right


def _jittered_cholesky(cov: np.ndarray) -> np.ndarray:
    n = len(cov)
    trace = float(np.trace(cov))
    base = max(1e-10 * trace / n, 1e-12)
    ceiling = max(1e-4 * trace / n, base)
    jitter = base
    while True:
        try:
            return np.linalg.cholesky(cov + jitter * np.eye(n))
        except np.linalg.LinAlgError:
            if jitter >= ceiling:
                raise GenerationError(
                    f"covariance not factorizable at max jitter {jitter:g}")
            jitter = min(2.0 * jitter, ceiling)


def kernelsynth_generate(g, bank: list[KernelAtom] | None = None,
                         max_kernels: int = 5, length: int = 1024) -> np.ndarray:
    """Draw one path from a zero-mean GP with a randomly composed kernel."""
    if length < 1:
        raise ParameterError("length must be positive")
    if bank is None:
        bank = default_kernel_bank(length)
    t = np.arange(length, dtype=np.float64) / length
    expr = sample_kernel_expr(g, bank, max_kernels)
    cov = kernel_matrix(expr, t)
    cov = 0.5 * (cov + cov.T)
    chol = _jittered_cholesky(cov)
    return chol @ g.standard_normal(length)


# ---------------------------------------------------------------------------
# Throughput harness
# ---------------------------------------------------------------------------

@dataclass
class BenchRow:
    generator: str
    series_len: int
    count: int
    total_seconds: float
    per_series_seconds: float
    series_per_second: float


def bench_compare(generators: dict[str, Callable[[int], object]],
                  series_len: int, counts: dict[str, int] | int) -> list[BenchRow]:
    """Time each generator producing its count of series of one length.

    Each callable takes the number of series and must fully materialize them;
    the wall clock around that call is the measurement.
    """
    rows = []
    for name, produce in generators.items():
        n = counts[name] if isinstance(counts, dict) else counts
        if n < 1:
            raise ParameterError(f"count for {name} must be at least 1")
        start = time.perf_counter()
        produce(n)
        elapsed = time.perf_counter() - start
        per_series = elapsed / n
        rows.append(BenchRow(
            generator=name, series_len=series_len, count=n,
            total_seconds=elapsed, per_series_seconds=per_series,
            series_per_second=(1.0 / per_series if per_series > 0 else
                               float("inf"))))
    return rows
