"""Forecast evaluation kit: pinball loss, multi-horizon multi-quantile loss,
CRPS via uniform quantile averaging, its scaled variant, and MASE against the
seasonal-naive forecast.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

__all__ = [
    "QuantileForecast",
    "EvalFrame",
    "quantile_loss",
    "mhmq_loss",
    "crps",
    "scrps",
    "mase",
    "aggregate",
    "DEFAULT_QUANTILE_LEVELS",
]

# The usual decile grid; the evaluation grid is a knob, not a constant.
DEFAULT_QUANTILE_LEVELS = tuple(np.round(np.arange(1, 10) * 0.1, 1))


def _check_levels(levels) -> np.ndarray:
    levels = np.asarray(levels, dtype=np.float64)
    if levels.ndim != 1 or len(levels) == 0:
        raise ParameterError("quantile levels must be a nonempty 1-d sequence")
    if np.any(levels <= 0.0) or np.any(levels >= 1.0):
        raise ParameterError("quantile levels must lie strictly inside (0, 1)")
    if np.any(np.diff(levels) <= 0.0):
        raise ParameterError("quantile levels must be strictly increasing")
    return levels


@dataclass(frozen=True)
class QuantileForecast:
    """H x Q matrix of predicted quantiles with its level grid."""

    levels: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "levels", _check_levels(self.levels))
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[1] != len(self.levels):
            raise ParameterError(
                f"values must be H x {len(self.levels)}, got {values.shape}")
        object.__setattr__(self, "values", values)

    def is_monotone(self) -> bool:
        """Whether quantiles are nondecreasing across levels at each horizon."""
        return bool(np.all(np.diff(self.values, axis=1) >= 0.0))


@dataclass(frozen=True)
class EvalFrame:
    """Actuals plus the history needed to scale errors by a seasonal naive."""

    actuals: np.ndarray
    history: np.ndarray
    seasonality: int = 1

    def __post_init__(self):
        object.__setattr__(self, "actuals",
                           np.asarray(self.actuals, dtype=np.float64))
        object.__setattr__(self, "history",
                           np.asarray(self.history, dtype=np.float64))
        if self.seasonality < 1:
            raise ParameterError("seasonality must be at least 1")
        if len(self.history) < self.seasonality:
            raise ParameterError("history must cover at least one season")

    def seasonal_naive(self) -> np.ndarray:
        """Repeat the last observed season across the horizon."""
        s = self.seasonality
        h = np.arange(len(self.actuals))
        return self.history[len(self.history) - s + (h % s)]


def quantile_loss(y, yhat, tau: float):
    """Pinball loss tau * (y - yhat)_+ + (1 - tau) * (yhat - y)_+."""
    if not 0.0 < tau < 1.0:
        raise ParameterError("tau must lie in (0, 1)")
    diff = np.asarray(y, dtype=np.float64) - np.asarray(yhat, dtype=np.float64)
    return tau * np.maximum(diff, 0.0) + (1.0 - tau) * np.maximum(-diff, 0.0)


def mhmq_loss(actuals, forecast: QuantileForecast) -> float:
    """Mean pinball loss over every horizon and quantile level."""
    actuals = np.asarray(actuals, dtype=np.float64)
    if actuals.shape != (forecast.values.shape[0],):
        raise ParameterError(
            f"actuals shape {actuals.shape} does not match horizon "
            f"{forecast.values.shape[0]}")
    total = 0.0
    for j, tau in enumerate(forecast.levels):
        total += float(np.sum(quantile_loss(actuals, forecast.values[:, j], tau)))
    return total / forecast.values.size


def crps(y: float, forecast_row, levels) -> float:
    """Quantile-averaged CRPS: (2 / Q) * sum_tau pinball(y, yhat_tau)."""
    levels = _check_levels(levels)
    forecast_row = np.asarray(forecast_row, dtype=np.float64)
    if forecast_row.shape != levels.shape:
        raise ParameterError("forecast row and levels must have equal length")
    total = sum(float(quantile_loss(y, forecast_row[j], tau))
                for j, tau in enumerate(levels))
    return 2.0 * total / len(levels)


def scrps(actuals, forecasts, levels) -> float:
    """Sum of CRPS over all slots divided by the sum of absolute actuals."""
    levels = _check_levels(levels)
    actuals = np.asarray(actuals, dtype=np.float64)
    forecasts = np.asarray(forecasts, dtype=np.float64)
    if forecasts.shape != actuals.shape + (len(levels),):
        raise ParameterError(
            f"forecasts shape {forecasts.shape} must be actuals shape "
            f"{actuals.shape} plus a quantile axis of {len(levels)}")
    denom = float(np.sum(np.abs(actuals)))
    if denom == 0.0:
        raise ParameterError("sCRPS is undefined for all-zero actuals")
    flat_y = actuals.reshape(-1)
    flat_f = forecasts.reshape(-1, len(levels))
    num = 0.0
    for j, tau in enumerate(levels):
        num += float(np.sum(quantile_loss(flat_y, flat_f[:, j], tau)))
    return 2.0 * num / len(levels) / denom


def mase(actuals, point_forecast, history, seasonality: int = 1) -> float:
    """Absolute error of the forecast scaled by the seasonal-naive error."""
    frame = EvalFrame(actuals, history, seasonality)
    point_forecast = np.asarray(point_forecast, dtype=np.float64)
    if point_forecast.shape != frame.actuals.shape:
        raise ParameterError("forecast and actuals must have equal length")
    naive = frame.seasonal_naive()
    denom = float(np.sum(np.abs(frame.actuals - naive)))
    if denom == 0.0:
        raise ParameterError(
            "MASE is undefined: actuals equal the seasonal-naive forecast")
    return float(np.sum(np.abs(frame.actuals - point_forecast))) / denom


def aggregate(scores, weights=None, mode: str = "weighted_mean") -> float:
    """Combine per-dataset scores.

    weighted_mean: arithmetic mean under the given weights (uniform when
    omitted). geometric_mean_ratio: geometric mean of the given score ratios,
    which must be positive.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 1 or len(scores) == 0:
        raise ParameterError("scores must be a nonempty 1-d sequence")
    if mode == "weighted_mean":
        if weights is None:
            weights = np.ones_like(scores)
        weights = np.asarray(weights, dtype=np.float64)
        if weights.shape != scores.shape or np.any(weights < 0.0) \
                or weights.sum() == 0.0:
            raise ParameterError("weights must be nonnegative and sum to > 0")
        return float(np.sum(weights * scores) / np.sum(weights))
    if mode == "geometric_mean_ratio":
        if np.any(scores <= 0.0):
            raise ParameterError("geometric mean requires positive scores")
        return float(np.exp(np.mean(np.log(scores))))
    raise ParameterError(f"unknown aggregation mode {mode!r}")
