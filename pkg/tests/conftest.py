import numpy as np
import pytest

from sarsim import SimulatorConfig
from sarsim.rng import StreamKey


@pytest.fixture
def small_config():
    """A short, cheap configuration for pipeline-level tests."""
    return SimulatorConfig(sequence_length=1200, batch_size=8,
                           context_length=512, horizon=128, pad_max=504)


@pytest.fixture
def g():
    """A throwaway generator with a fixed lane."""
    return StreamKey(2024, (97,)).stream()


def relative_error(actual: np.ndarray, expected: np.ndarray) -> float:
    actual = np.asarray(actual, dtype=np.float64)
    expected = np.asarray(expected, dtype=np.float64)
    scale = max(1.0, float(np.max(np.abs(expected))) if expected.size else 1.0)
    if actual.size == 0 and expected.size == 0:
        return 0.0
    return float(np.max(np.abs(actual - expected))) / scale
