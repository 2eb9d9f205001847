import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from eulerblowup.radial import (
    FluidState,
    RadialGrid,
    cell_moments,
    cell_volumes,
    integrate_weighted,
    mass,
    mass_in_ball,
    sphere_area,
)
from eulerblowup.weights import k0, w3


def state_from(f, dim, grid=RadialGrid()):
    r = grid.centers
    return FluidState(grid=grid, dim=dim, rho=f(r), v=np.zeros_like(r))


def test_grid_geometry():
    g = RadialGrid(40.0, 2000)
    assert g.dr == 0.02
    assert g.centers[0] == pytest.approx(0.01)
    assert g.centers[-1] == pytest.approx(39.99)
    assert np.all(g.centers > 0)
    assert g.faces.shape == (2001,) and g.faces[0] == 0.0 and g.faces[-1] == pytest.approx(40.0)
    assert RadialGrid() == RadialGrid(40.0, 2000)
    assert hash(RadialGrid(10.0, 100)) == hash(RadialGrid(10.0, 100))


@pytest.mark.parametrize("kw", [dict(r_max=0.0), dict(r_max=-1.0), dict(n_cells=7), dict(n_cells=10.5)])
def test_grid_validation(kw):
    with pytest.raises(ValueError):
        RadialGrid(**kw)


def test_state_validation():
    g = RadialGrid(1.0, 10)
    with pytest.raises(ValueError):
        FluidState(g, 3, np.ones(9), np.zeros(10))
    with pytest.raises(ValueError):
        FluidState(g, 3, -np.ones(10), np.zeros(10))
    with pytest.raises(ValueError):
        FluidState(g, 4, np.ones(10), np.zeros(10))
    with pytest.raises(ValueError):
        FluidState(g, 3, np.ones(10), np.full(10, np.nan))


def test_state_is_immutable():
    g = RadialGrid(1.0, 10)
    rho = np.ones(10)
    s = FluidState(g, 3, rho, np.zeros(10))
    rho[0] = 5.0  # caller's array is copied
    assert s.rho[0] == 1.0
    with pytest.raises(ValueError):
        s.rho[0] = 2.0
    t = s.replace(time=1.5)
    assert t.time == 1.5 and s.time == 0.0
    assert np.array_equal(s.momentum, s.rho * s.v)


def test_sphere_area():
    assert sphere_area(3) == 4 * math.pi
    assert sphere_area(2) == 2 * math.pi
    with pytest.raises(ValueError):
        sphere_area(1)


def test_weight_normalizations():
    grid = RadialGrid(40.0, 4000)
    assert integrate_weighted(np.ones(4000), w3, grid, 3) == pytest.approx(4 * math.pi, rel=1e-6)
    assert integrate_weighted(np.ones(4000), k0, grid, 2) == pytest.approx(2 * math.pi, rel=1e-6)
    assert integrate_weighted(np.zeros(4000), w3, grid, 3) == 0.0


def test_cell_volumes_exact():
    grid = RadialGrid(3.0, 30)
    assert cell_volumes(grid, 3).sum() == pytest.approx(4 / 3 * math.pi * 27, rel=1e-14)
    assert cell_volumes(grid, 2).sum() == pytest.approx(math.pi * 9, rel=1e-14)
    # Gauss moments of w = 1 agree with the closed form
    assert np.allclose(cell_moments(lambda r: np.ones_like(r), grid, 3), cell_volumes(grid, 3), rtol=1e-13)


def test_moments_cached_and_read_only():
    grid = RadialGrid(5.0, 50)
    a = cell_moments(w3, grid, 3)
    assert cell_moments(w3, grid, 3) is a
    with pytest.raises(ValueError):
        a[0] = 1.0


def test_gaussian_masses():
    # second-order quadrature of point samples: use a fine grid
    grid = RadialGrid(10.0, 20000)
    assert mass(state_from(lambda r: np.exp(-r * r), 3, grid)) == pytest.approx(math.pi**1.5, rel=1e-6)
    assert mass(state_from(lambda r: np.exp(-r * r), 2, grid)) == pytest.approx(math.pi, rel=1e-6)


def test_gaussian_masses_default_grid_second_order():
    coarse, fine = RadialGrid(40.0, 2000), RadialGrid(40.0, 4000)
    exact = math.pi**1.5
    e1 = abs(mass(state_from(lambda r: np.exp(-r * r), 3, coarse)) - exact)
    e2 = abs(mass(state_from(lambda r: np.exp(-r * r), 3, fine)) - exact)
    assert e1 / exact < 1e-4
    assert e1 / e2 > 3.9


def test_vacuum_mass_zero():
    assert mass(state_from(np.zeros_like, 3)) == 0.0


def test_mass_in_ball():
    grid = RadialGrid(10.0, 1000)
    s = state_from(lambda r: np.exp(-r), 3, grid)
    assert mass_in_ball(s, grid.r_max) == mass(s)
    assert mass_in_ball(s, 0.5 * grid.dr * 0.99) == 0.0
    ones = state_from(np.ones_like, 3, grid)
    assert mass_in_ball(ones, 1.0) == pytest.approx(4 * math.pi / 3, rel=1e-12)
    for r0 in (0.0, -1.0, 10.5):
        with pytest.raises(ValueError):
            mass_in_ball(s, r0)


def test_richardson_second_order():
    f = lambda r: np.exp(-0.5 * r * r) * (1 + r)
    vals = []
    for n in (500, 1000, 2000):
        grid = RadialGrid(20.0, n)
        vals.append(integrate_weighted(f(grid.centers), w3, grid, 3))
    d1, d2 = abs(vals[1] - vals[0]), abs(vals[2] - vals[1])
    assert d1 / d2 >= 3.9


def test_tail_control():
    f = lambda r: r**4 * np.exp(-r * r)
    a = integrate_weighted(f(RadialGrid(40.0, 2000).centers), w3, RadialGrid(40.0, 2000), 3)
    b = integrate_weighted(f(RadialGrid(60.0, 3000).centers), w3, RadialGrid(60.0, 3000), 3)
    assert abs(a - b) / abs(a) < 1e-10


@settings(max_examples=30)
@given(
    arrays(float, 64, elements=st.floats(-10, 10)),
    arrays(float, 64, elements=st.floats(-10, 10)),
    st.floats(-5, 5),
    st.sampled_from([2, 3]),
)
def test_linearity(f, g, a, dim):
    grid = RadialGrid(4.0, 64)
    w = w3 if dim == 3 else k0
    lhs = integrate_weighted(a * f + g, w, grid, dim)
    rhs = a * integrate_weighted(f, w, grid, dim) + integrate_weighted(g, w, grid, dim)
    scale = integrate_weighted(np.abs(a * f) + np.abs(g), w, grid, dim) + 1e-300
    assert abs(lhs - rhs) <= 1e-12 * scale


def test_shape_mismatch():
    with pytest.raises(ValueError):
        integrate_weighted(np.ones(5), w3, RadialGrid(1.0, 10), 3)
