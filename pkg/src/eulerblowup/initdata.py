"""Radial initial data with vacuum at the origin and the blow-up admissibility test.

The profile family is built on the sound speed,

    c0(r) = s r**alpha exp(-beta r**2),    v0(r) = -m r exp(-beta r**2),

so ``c0`` vanishes at the origin (hence so does the density), ``v0`` is odd
in ``r`` (a smooth radial field) and ``m > 0`` means inflow.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .functionals import blowup_time_bound, c_const, f_rate, f_value
from .gas import GasParams, density_from_sound_speed
from .radial import FluidState, RadialGrid, mass

# Extrapolated origin density below this fraction of max(rho) counts as vacuum.
VACUUM_ORIGIN_RTOL = 1e-6


@dataclass(frozen=True)
class ProfileSpec:
    s: float
    m: float
    alpha: float = 2.0
    beta: float = 1.0

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError(f"sound-speed amplitude s must be positive, got {self.s}")
        if not self.beta > 0:
            raise ValueError(f"decay rate beta must be positive, got {self.beta}")
        if not self.alpha >= 2:
            raise ValueError(f"shape exponent alpha must be >= 2, got {self.alpha}")
        if not math.isfinite(self.m):
            raise ValueError("inflow amplitude m must be finite")

    def sound_speed(self, r):
        return self.s * r**self.alpha * np.exp(-self.beta * r * r)

    def velocity(self, r):
        return -self.m * r * np.exp(-self.beta * r * r)


@dataclass(frozen=True)
class InitialDataReport:
    cond_vacuum: bool
    cond_mass: float
    lhs: float
    rhs: float
    cond_momentum_margin: float
    relative_margin: float
    F0: float
    Fdot0: float
    m_min: Optional[float]
    t_star: float

    @property
    def admissible(self) -> bool:
        return math.isfinite(self.t_star)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["admissible"] = self.admissible
        for key, val in d.items():
            if isinstance(val, float) and not math.isfinite(val):
                d[key] = None
        return d


def build_initial_data(spec: ProfileSpec, g: GasParams, grid: RadialGrid, dim: int) -> FluidState:
    r = grid.centers
    rho = density_from_sound_speed(spec.sound_speed(r), g)
    return FluidState(grid=grid, dim=dim, rho=rho, v=spec.velocity(r), time=0.0)


def _vacuum_at_origin(rho: np.ndarray) -> bool:
    top = rho.max()
    if top == 0:
        return True
    # rho is even in r: fit a + b r**2 through the first two cell centres.
    origin = (9.0 * rho[0] - rho[1]) / 8.0
    return bool(origin <= VACUUM_ORIGIN_RTOL * top)


def momentum_condition(state: FluidState, g: GasParams) -> tuple[float, float]:
    """Both sides of the initial momentum condition for the state's dimension.

    The left side is the initial rate of the weighted functional,
    ``int rho v w'(r) dx``; the right side is ``C F(0)**((gamma+1)/2)``.
    """
    F0 = f_value(state)
    lhs = f_rate(state)
    rhs = c_const(g, state.dim) * F0 ** ((g.gamma + 1.0) / 2.0)
    return lhs, rhs


def minimal_inflow_amplitude(spec: ProfileSpec, g: GasParams, grid: RadialGrid, dim: int) -> float:
    """Inflow amplitude at which the momentum condition holds with equality.

    The left side is linear in ``m`` and the right side does not depend on
    it, so one evaluation at ``m = 1`` suffices.
    """
    unit = ProfileSpec(s=spec.s, m=1.0, alpha=spec.alpha, beta=spec.beta)
    lhs, rhs = momentum_condition(build_initial_data(unit, g, grid, dim), g)
    if not lhs > 0:
        raise ValueError(
            f"profile gives a non-positive rate per unit inflow ({lhs:g}); no amplitude works"
        )
    return rhs / lhs


def check_admissibility(
    state: FluidState, g: GasParams, spec: Optional[ProfileSpec] = None
) -> InitialDataReport:
    """Evaluate the vacuum, mass and momentum conditions on initial data.

    Equality in the momentum condition is reported as inadmissible. Passing
    ``spec`` additionally fills in ``m_min``.
    """
    vac = _vacuum_at_origin(state.rho)
    total = mass(state)
    lhs, rhs = momentum_condition(state, g)
    F0 = f_value(state)
    margin = lhs - rhs
    rel = margin / rhs if rhs > 0 else (math.inf if margin > 0 else -math.inf)
    ok = vac and total > 0 and margin > 0
    t_star = blowup_time_bound(F0, g, state.dim) if ok else math.inf
    m_min = None
    if spec is not None:
        try:
            m_min = minimal_inflow_amplitude(spec, g, state.grid, state.dim)
        except ValueError:
            m_min = None
    return InitialDataReport(
        cond_vacuum=vac,
        cond_mass=total,
        lhs=lhs,
        rhs=rhs,
        cond_momentum_margin=margin,
        relative_margin=rel,
        F0=F0,
        Fdot0=lhs,
        m_min=m_min,
        t_star=t_star,
    )
