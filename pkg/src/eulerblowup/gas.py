"""Polytropic equation of state p = A rho**gamma and its sound speed."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

# Upper end of the physical range for polytropic ideal gases.
POLYTROPIC_GAMMA_MAX = 5.0 / 3.0


class PolytropicRangeWarning(UserWarning):
    """gamma is valid for the estimates but outside the polytropic ideal-gas range."""


@dataclass(frozen=True)
class GasParams:
    """Isentropic gas: entropy constant ``A`` and adiabatic index ``gamma``."""

    A: float
    gamma: float

    def __post_init__(self):
        if not np.isfinite(self.A) or self.A <= 0:
            raise ValueError(f"entropy constant A must be positive, got {self.A}")
        if not np.isfinite(self.gamma) or self.gamma <= 1:
            raise ValueError(f"adiabatic index gamma must exceed 1, got {self.gamma}")
        if self.gamma > POLYTROPIC_GAMMA_MAX:
            warnings.warn(
                f"gamma={self.gamma} lies outside the polytropic range (1, 5/3]",
                PolytropicRangeWarning,
                stacklevel=3,
            )


def _check_nonnegative(x, name):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise ValueError(f"{name} must be non-negative")
    return x


def _pow0(x, e):
    """``x**e`` for ``x >= 0`` and ``e > 0`` with 0**e pinned to exactly 0."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] ** e
    return out


def _like_input(x, out):
    return float(out) if np.ndim(x) == 0 else out


def pressure(rho, g: GasParams):
    """Pressure ``A * rho**gamma``; exactly zero at vacuum."""
    r = _check_nonnegative(rho, "density")
    return _like_input(rho, g.A * _pow0(r, g.gamma))


def sound_speed(rho, g: GasParams):
    """Sound speed ``sqrt(A gamma) rho**((gamma-1)/2)``."""
    r = _check_nonnegative(rho, "density")
    return _like_input(rho, np.sqrt(g.A * g.gamma) * _pow0(r, 0.5 * (g.gamma - 1.0)))


def density_from_sound_speed(c, g: GasParams):
    """Inverse of :func:`sound_speed`: ``(A gamma)**(-1/(gamma-1)) c**(2/(gamma-1))``."""
    cc = _check_nonnegative(c, "sound speed")
    # Raise c / sqrt(A gamma) to one power instead of combining two powers;
    # keeps the round trip within a few ulps.
    scaled = cc / np.sqrt(g.A * g.gamma)
    return _like_input(c, _pow0(scaled, 2.0 / (g.gamma - 1.0)))
