"""Backend dispatch for the recursion kernel.

The compiled extension is preferred when importable; otherwise, or when
SARSIM_PURE_PYTHON is set, the numpy fallback runs. Both produce bit-identical
output, so backend choice never changes generated data.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

try:
    from . import _kernels  # type: ignore[attr-defined]
except ImportError:
    _kernels = None

__all__ = ["recursion", "active_backend", "HAVE_COMPILED"]

HAVE_COMPILED = _kernels is not None


def _force_python() -> bool:
    return os.environ.get("SARSIM_PURE_PYTHON", "") not in ("", "0")


def active_backend() -> str:
    return "compiled" if (HAVE_COMPILED and not _force_python()) else "python"


def recursion(y: np.ndarray, eps: np.ndarray,
              ar: np.ndarray, ma: np.ndarray,
              sar: np.ndarray, sma: np.ndarray,
              season: int, start: int, clip: float,
              backend: str | None = None) -> bool:
    """Run the batched recursion in place; True means the batch diverged."""
    if backend is None:
        backend = active_backend()
    if backend == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled kernel requested but not built")
        impl = _kernels.recursion
    elif backend == "python":
        impl = _kernels_py.recursion
    else:
        raise ValueError(f"unknown backend {backend!r}")
    if y.dtype != np.float64 or not y.flags["C_CONTIGUOUS"]:
        raise ValueError("y must be a C-contiguous float64 array (filled in place)")
    f64 = np.float64
    return bool(impl(y,
                     np.ascontiguousarray(eps, dtype=f64),
                     np.ascontiguousarray(ar, dtype=f64),
                     np.ascontiguousarray(ma, dtype=f64),
                     np.ascontiguousarray(sar, dtype=f64),
                     np.ascontiguousarray(sma, dtype=f64),
                     season, start, clip))
