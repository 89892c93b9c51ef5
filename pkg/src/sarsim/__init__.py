"""Deterministic high-throughput synthetic time-series engine.

Structured dynamics come from stable-pole seasonal ARMA recursions with
integer and fractional integration; an interaction layer superposes a fast
base with a slow envelope; a rate-conditioned noise layer adds count spikes,
bursts and multiplicative shocks. Everything downstream of a (config, seed)
pair is reproducible byte for byte.
"""

from ._version import __version__
from .errors import (DivergenceError, FormatError, GenerationError,
                     ParameterError)
from .kernels import active_backend
from .metrics import (DEFAULT_QUANTILE_LEVELS, EvalFrame, QuantileForecast,
                      aggregate, crps, mase, mhmq_loss, quantile_loss, scrps)
from .noisers import NoiserSpec, rate_track
from .noisers import apply as apply_noiser
from .pipeline import (GenerationRecipe, SimulatorConfig, TrainingWindow,
                       extract_window, generate_batch, replay, sample_recipe,
                       stream, windows)
from .polyroots import (LagPolynomial, PoleSet, expand, sample_pole_set,
                        verify_stability)
from .rng import StreamKey
from .sarima import (SarimaSpec, SeriesBatch, apply_fractional_integration,
                     frac_diff_filter, integrate, sample_spec, unroll,
                     warmup_length)
from .sarima2 import (Sarima2Spec, compose, normalize_envelope,
                      sample_sarima2_spec, upsample_hold)

__all__ = [
    "__version__",
    "active_backend",
    "ParameterError", "GenerationError", "DivergenceError", "FormatError",
    "StreamKey",
    "PoleSet", "LagPolynomial", "sample_pole_set", "expand", "verify_stability",
    "SarimaSpec", "SeriesBatch", "sample_spec", "warmup_length", "unroll",
    "integrate", "frac_diff_filter", "apply_fractional_integration",
    "Sarima2Spec", "sample_sarima2_spec", "normalize_envelope",
    "upsample_hold", "compose",
    "NoiserSpec", "rate_track", "apply_noiser",
    "SimulatorConfig", "GenerationRecipe", "TrainingWindow",
    "sample_recipe", "generate_batch", "replay", "extract_window",
    "stream", "windows",
    "QuantileForecast", "EvalFrame", "quantile_loss", "mhmq_loss", "crps",
    "scrps", "mase", "aggregate", "DEFAULT_QUANTILE_LEVELS",
]
