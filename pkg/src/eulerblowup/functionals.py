"""Weighted density functionals and the blow-up estimates built on them.

For ``dim = 3`` the functional is ``F(t) = int rho exp(-r)/r dx``; for
``dim = 2`` it is ``G(t) = int rho K0(r) dx``. Both are called ``F`` here.
Along smooth solutions with vacuum at the origin they satisfy

    F'' >= A F**gamma / W**(gamma-1),      W = int w dx,
    F'  >= C F**((gamma+1)/2),             C = sqrt(A/(gamma+1)) W**(-(gamma-1)/2),

once the initial rate dominates, and the second inequality forces
``F`` to infinity no later than ``2 F(0)**(-(gamma-1)/2) / ((gamma-1) C)``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .gas import GasParams
from .radial import FluidState, integrate_weighted, mass_in_ball
from .weights import WeightKind, k0, weight_function


@dataclass(frozen=True)
class FunctionalValue:
    F: float
    Fdot: float
    t: float


@functools.lru_cache(maxsize=None)
def _bessel_volume_integral() -> float:
    # int_0^inf r K0(r) dr with r = exp(u); the integrand exp(2u) K0(exp(u)) is
    # smooth and negligible outside [-30, 4.5].
    x, wq = np.polynomial.legendre.leggauss(16)
    edges = np.linspace(-30.0, 4.5, 141)
    half = 0.5 * np.diff(edges)
    u = (edges[:-1, None] + half[:, None] * (x[None, :] + 1.0)).ravel()
    r = np.exp(u)
    vals = (r * r * k0(r)).reshape(len(half), -1)
    return 2.0 * np.pi * float(np.sum((vals @ wq) * half))


def weight_volume_integral(dim: int) -> float:
    """``int_{R^dim} w dx``: 4 pi for ``exp(-r)/r``, quadrature of K0 in 2D."""
    if dim == 3:
        return 4.0 * np.pi
    if dim == 2:
        return _bessel_volume_integral()
    raise ValueError(f"dim must be 2 or 3, got {dim}")


def f_value(state: FluidState) -> float:
    """Weighted density integral of ``state`` for its own dimension."""
    w, _ = weight_function(WeightKind.for_dim(state.dim))
    return integrate_weighted(state.rho, w, state.grid, state.dim)


def f_rate(state: FluidState) -> float:
    """Time derivative of :func:`f_value` implied by mass conservation.

    Integrating ``rho_t = -div(rho u)`` against ``w`` by parts gives
    ``int rho v w'(r) dx``; the boundary term at the origin vanishes for
    radial flows.
    """
    _, wp = weight_function(WeightKind.for_dim(state.dim))
    return integrate_weighted(state.rho * state.v, wp, state.grid, state.dim)


def functional_value(state: FluidState) -> FunctionalValue:
    return FunctionalValue(F=f_value(state), Fdot=f_rate(state), t=state.time)


def c_const(g: GasParams, dim: int) -> float:
    """Riccati constant (``C_0`` in 3D, ``C_1`` in 2D)."""
    W = weight_volume_integral(dim)
    return math.sqrt(g.A / (g.gamma + 1.0)) * W ** (-(g.gamma - 1.0) / 2.0)


def convexity_rhs(F, g: GasParams, dim: int):
    """Lower bound on ``F''`` from Jensen/Hoelder: ``A F**gamma / W**(gamma-1)``."""
    F_arr = np.asarray(F, dtype=float)
    if np.any(F_arr < 0):
        raise ValueError("functional value must be non-negative")
    W = weight_volume_integral(dim)
    out = g.A * F_arr**g.gamma / W ** (g.gamma - 1.0)
    return float(out) if np.ndim(F) == 0 else out


def riccati_rhs(F, g: GasParams, dim: int, c: Optional[float] = None):
    """``C F**((gamma+1)/2)``, the lower bound on ``F'``."""
    C = c_const(g, dim) if c is None else c
    return C * np.asarray(F, dtype=float) ** ((g.gamma + 1.0) / 2.0)


def blowup_time_bound(F0: float, g: GasParams, dim: int, c: Optional[float] = None) -> float:
    """Time by which the Riccati lower bound for ``F`` becomes infinite.

    ``c`` overrides the dimension's constant (useful for normalised checks).
    """
    if not F0 > 0:
        raise ValueError(f"F0 must be positive, got {F0}")
    C = c_const(g, dim) if c is None else c
    return 2.0 * F0 ** (-(g.gamma - 1.0) / 2.0) / ((g.gamma - 1.0) * C)


def envelope(t, F0: float, g: GasParams, dim: int, c: Optional[float] = None):
    """Closed-form lower bound ``(F0**(-k) - k C t)**(-1/k)``, ``k = (gamma-1)/2``."""
    C = c_const(g, dim) if c is None else c
    t_star = blowup_time_bound(F0, g, dim, c=C)
    tt = np.asarray(t, dtype=float)
    if np.any(tt < 0) or np.any(tt >= t_star):
        raise ValueError(f"envelope is only finite for 0 <= t < {t_star}")
    k = 0.5 * (g.gamma - 1.0)
    out = (F0 ** (-k) - k * C * tt) ** (-1.0 / k)
    return float(out) if np.ndim(t) == 0 else out


def localization_split(state: FluidState, r0: float, mass0: float) -> tuple[float, float]:
    """Upper bound on ``F`` split into the ball part and the tail part.

    The tail uses ``sup_{r >= r0} w(r)`` times the initial mass, which bounds
    the current mass since mass only leaves the domain. In 3D the supremum
    ``exp(-r0)/r0`` is replaced by the coarser ``1/r0``.
    """
    kind = WeightKind.for_dim(state.dim)
    w, _ = weight_function(kind)
    ball = mass_in_ball(state, r0, w)
    if kind is WeightKind.THREE_D:
        tail = mass0 / r0
    else:
        tail = k0(r0) * mass0
    return ball, tail
