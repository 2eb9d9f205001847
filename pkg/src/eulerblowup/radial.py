"""Uniform radial grids, fluid states and weighted volume integrals.

Cell values are finite-volume cell averages. A weighted integral
``int f(|x|) w(|x|) dx`` over R^dim is reduced to

    sum_i f_i * |S^(dim-1)| * int_{cell i} w(r) r**(dim-1) dr,

where the per-cell weight moments are computed once per (weight, grid, dim)
with Gauss-Legendre nodes inside each cell. Nodes are strictly interior, so
weights singular at r = 0 are never evaluated there. With ``w = 1`` the
moments are the exact cell volumes the solver conserves mass on.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

GAUSS_NODES_PER_CELL = 8

SPHERE_AREA = {2: 2.0 * np.pi, 3: 4.0 * np.pi}


def sphere_area(dim: int) -> float:
    """Area of the unit sphere S^(dim-1) for dim in {2, 3}."""
    try:
        return SPHERE_AREA[dim]
    except KeyError:
        raise ValueError(f"dim must be 2 or 3, got {dim}") from None


@dataclass(frozen=True)
class RadialGrid:
    """Uniform cell-centred grid on [0, r_max] with centres (i + 1/2) dr."""

    r_max: float = 40.0
    n_cells: int = 2000

    def __post_init__(self):
        if not self.r_max > 0:
            raise ValueError(f"r_max must be positive, got {self.r_max}")
        if int(self.n_cells) != self.n_cells or self.n_cells < 8:
            raise ValueError(f"n_cells must be an integer >= 8, got {self.n_cells}")
        object.__setattr__(self, "n_cells", int(self.n_cells))
        object.__setattr__(self, "r_max", float(self.r_max))

    @property
    def dr(self) -> float:
        return self.r_max / self.n_cells

    @property
    def centers(self) -> np.ndarray:
        return (np.arange(self.n_cells) + 0.5) * self.dr

    @property
    def faces(self) -> np.ndarray:
        return np.arange(self.n_cells + 1) * self.dr


@dataclass(frozen=True, eq=False)
class FluidState:
    """Cell-averaged density and radial velocity at one instant."""

    grid: RadialGrid
    dim: int
    rho: np.ndarray
    v: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        sphere_area(self.dim)
        rho = np.array(self.rho, dtype=float)
        v = np.array(self.v, dtype=float)
        n = self.grid.n_cells
        if rho.shape != (n,) or v.shape != (n,):
            raise ValueError(f"rho and v must both have length n_cells={n}")
        if not np.all(rho >= 0):
            raise ValueError("density must be non-negative (and not NaN)")
        if not np.all(np.isfinite(v)):
            raise ValueError("velocity must be finite")
        rho.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "time", float(self.time))

    @property
    def momentum(self) -> np.ndarray:
        return self.rho * self.v

    def replace(self, **changes) -> "FluidState":
        kw = dict(grid=self.grid, dim=self.dim, rho=self.rho, v=self.v, time=self.time)
        kw.update(changes)
        return FluidState(**kw)


@functools.lru_cache(maxsize=64)
def _moments(w, grid: RadialGrid, dim: int) -> np.ndarray:
    area = sphere_area(dim)
    lo = grid.faces[:-1]
    hi = grid.faces[1:]
    if w is None:
        out = area * (hi**dim - lo**dim) / dim
    else:
        x, wq = np.polynomial.legendre.leggauss(GAUSS_NODES_PER_CELL)
        nodes = lo[:, None] + 0.5 * (x[None, :] + 1.0) * grid.dr
        vals = np.asarray(w(nodes.ravel()), dtype=float).reshape(nodes.shape)
        if not np.all(np.isfinite(vals)):
            raise ValueError("weight is not finite at every quadrature node")
        out = area * (vals * nodes ** (dim - 1)) @ (0.5 * grid.dr * wq)
    out.flags.writeable = False
    return out


def cell_moments(w: Optional[Callable], grid: RadialGrid, dim: int) -> np.ndarray:
    """``|S^(dim-1)| int_{cell} w(r) r**(dim-1) dr`` for every cell (cached).

    ``w=None`` stands for the constant weight 1, i.e. the cell volumes.
    """
    return _moments(w, grid, dim)


def cell_volumes(grid: RadialGrid, dim: int) -> np.ndarray:
    return _moments(None, grid, dim)


def integrate_weighted(f, w: Optional[Callable], grid: RadialGrid, dim: int) -> float:
    """Volume integral of the cell field ``f`` against the radial weight ``w``."""
    m = cell_moments(w, grid, dim)
    f = np.asarray(f, dtype=float)
    if f.shape != m.shape:
        raise ValueError(f"field has shape {f.shape}, expected {m.shape}")
    return float(f @ m)


def mass(state: FluidState) -> float:
    """Total mass ``int rho dx``."""
    return integrate_weighted(state.rho, None, state.grid, state.dim)


def mass_in_ball(state: FluidState, r0: float, w: Optional[Callable] = None) -> float:
    """``int_{|x| < r0} rho w dx`` restricted to cells whose centre lies below r0."""
    grid = state.grid
    if not (0 < r0 <= grid.r_max):
        raise ValueError(f"r0 must lie in (0, {grid.r_max}], got {r0}")
    inside = grid.centers < r0
    m = cell_moments(w, grid, state.dim)
    return float(state.rho[inside] @ m[inside])

