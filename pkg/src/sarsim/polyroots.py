"""Pole sampling inside the stability region and exact root-to-coefficient
expansion for the autoregressive and moving-average lag polynomials.

Sampling coefficients directly destabilizes the recursion; sampling poles of
modulus below a radius bound and expanding the product of degree-one factors
guarantees well-behaved dynamics by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .rng import uniform

__all__ = [
    "PoleSet",
    "LagPolynomial",
    "sample_pole_set",
    "expand",
    "verify_stability",
    "companion_poles",
]

AR = "AR"
MA = "MA"

# Slack for eigenvalue rounding when checking pole moduli against a bound.
_STABILITY_EPS = 1e-9


@dataclass(frozen=True)
class PoleSet:
    """Poles of one transfer function, closed under complex conjugation."""

    poles: tuple[complex, ...]
    radius_bound: float

    @property
    def order(self) -> int:
        return len(self.poles)


@dataclass(frozen=True)
class LagPolynomial:
    """Coefficients c_1..c_n of 1 - sum c_i L^i (AR) or 1 + sum c_i L^i (MA)."""

    coefficients: np.ndarray
    convention: str

    def __post_init__(self):
        if self.convention not in (AR, MA):
            raise ParameterError(f"unknown convention {self.convention!r}")
        object.__setattr__(self, "coefficients",
                           np.asarray(self.coefficients, dtype=np.float64))

    @property
    def order(self) -> int:
        return len(self.coefficients)


def sample_pole_set(g, order: int, radius_max: float) -> PoleSet:
    """Draw `order` poles with modulus at most radius_max.

    Conjugate pairs are drawn jointly (radius uniform on (0, radius_max),
    angle uniform on (0, pi), conjugate added) so that expanded coefficients
    are real; an odd order adds one real pole uniform on (-radius_max, radius_max).
    """
    if order < 0:
        raise ParameterError(f"order must be nonnegative, got {order}")
    if not 0.0 < radius_max < 1.0:
        raise ParameterError(f"radius_max must lie in (0, 1), got {radius_max}")
    poles: list[complex] = []
    for _ in range(order // 2):
        r = uniform(g, 0.0, radius_max)
        theta = uniform(g, 0.0, math.pi)
        z = complex(r * math.cos(theta), r * math.sin(theta))
        poles.append(z)
        poles.append(z.conjugate())
    if order % 2:
        poles.append(complex(uniform(g, -radius_max, radius_max), 0.0))
    return PoleSet(tuple(poles), radius_max)


def _pair_up(poles: tuple[complex, ...]):
    """Split into real poles and one representative per conjugate pair."""
    reals: list[float] = []
    pairs: list[complex] = []
    pending: list[complex] = []
    for z in poles:
        if z.imag == 0.0:
            reals.append(z.real)
            continue
        for k, other in enumerate(pending):
            if other == z.conjugate():
                pending.pop(k)
                pairs.append(z)
                break
        else:
            pending.append(z)
    if pending:
        raise ParameterError(
            f"pole set is not closed under conjugation: {pending}")
    return reals, pairs


def expand(poles: PoleSet, convention: str) -> LagPolynomial:
    """Expand prod(1 - pole_i L) and rearrange to the requested convention.

    Conjugate pairs are multiplied into real quadratics first, so the result
    carries no imaginary residue at all.
    """
    reals, pairs = _pair_up(poles.poles)
    coeffs = np.array([1.0])
    for r in reals:
        coeffs = np.convolve(coeffs, [1.0, -r])
    for z in pairs:
        # (1 - zL)(1 - conj(z)L) = 1 - 2 Re(z) L + |z|^2 L^2
        coeffs = np.convolve(coeffs, [1.0, -2.0 * z.real, abs(z) ** 2])
    tail = coeffs[1:]
    if convention == AR:
        return LagPolynomial(-tail, AR)
    if convention == MA:
        return LagPolynomial(tail, MA)
    raise ParameterError(f"unknown convention {convention!r}")


def companion_poles(poly: LagPolynomial) -> np.ndarray:
    """Poles of an AR-convention polynomial via companion-matrix eigenvalues."""
    if poly.convention != AR:
        raise ParameterError("companion_poles expects the AR convention")
    n = poly.order
    if n == 0:
        return np.empty(0, dtype=np.complex128)
    comp = np.zeros((n, n))
    comp[0, :] = poly.coefficients
    if n > 1:
        comp[np.arange(1, n), np.arange(0, n - 1)] = 1.0
    return np.linalg.eigvals(comp)


def verify_stability(poly: LagPolynomial, bound: float) -> bool:
    """True iff every pole modulus is at most bound (plus rounding slack)."""
    roots = companion_poles(poly)
    if len(roots) == 0:
        return True
    return bool(np.max(np.abs(roots)) <= bound + _STABILITY_EPS)
