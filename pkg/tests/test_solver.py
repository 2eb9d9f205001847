import math

import numpy as np
import pytest

import eulerblowup.solver as solver
from eulerblowup.functionals import blowup_time_bound
from eulerblowup.gas import GasParams
from eulerblowup.initdata import ProfileSpec, build_initial_data, minimal_inflow_amplitude
from eulerblowup.radial import FluidState, RadialGrid, mass
from eulerblowup.solver import (
    SERIES_COLUMNS,
    Reconstruction,
    SolverConfig,
    Termination,
    cfl_dt,
    max_velocity_gradient,
    max_wave_speed,
    run,
    step,
    step_with_outflow,
)
from eulerblowup.verifier import detect_singularity

from conftest import DEMO_GAMMAS, demo_case

RECONS = list(Reconstruction)


@pytest.mark.parametrize(
    "kw", [dict(cfl=0.0), dict(cfl=1.0), dict(t_end=-1.0), dict(t_end=math.inf), dict(snapshot_stride=0),
           dict(limiter_theta=0.5), dict(limiter_theta=2.5), dict(dt_floor=0.0)]
)
def test_config_validation(kw):
    args = dict(t_end=1.0)
    args.update(kw)
    with pytest.raises(ValueError):
        SolverConfig(**args)


def test_config_defaults():
    cfg = SolverConfig(t_end=2.0)
    assert cfg.dt_floor == pytest.approx(2e-10)
    assert SolverConfig(t_end=0.0).dt_floor == 1e-10
    assert SolverConfig(t_end=1.0, reconstruction="first_order").reconstruction is Reconstruction.FIRST_ORDER


@pytest.mark.parametrize("dim", [2, 3])
@pytest.mark.parametrize("recon", RECONS)
def test_uniform_state_at_rest_preserved(dim, recon):
    g = GasParams(1.0, 1.4)
    grid = RadialGrid(5.0, 100)
    s0 = FluidState(grid, dim, np.full(100, 0.7), np.zeros(100))
    cfg = SolverConfig(t_end=1e9, reconstruction=recon)
    s = s0
    dt = cfl_dt(s0, g, cfg)
    for _ in range(1000):
        s = step(s, g, cfg, dt)
    assert np.max(np.abs(s.rho - 0.7)) < 1e-12 * 0.7
    assert np.max(np.abs(s.v)) < 1e-12


@pytest.mark.parametrize("recon", RECONS)
def test_vacuum_unchanged(recon):
    g = GasParams(1.0, 2.0)
    grid = RadialGrid(5.0, 50)
    s0 = FluidState(grid, 3, np.zeros(50), np.zeros(50))
    s = step(s0, g, SolverConfig(t_end=1.0, reconstruction=recon), 0.1)
    assert np.all(s.rho == 0) and np.all(s.v == 0)


def test_cfl_dt():
    g = GasParams(1.0, 2.0)
    grid = RadialGrid(5.0, 50)
    cfg = SolverConfig(t_end=2.5, cfl=0.4)
    empty = FluidState(grid, 3, np.zeros(50), np.zeros(50))
    assert cfl_dt(empty, g, cfg) == 2.5
    r = grid.centers
    s = FluidState(grid, 3, np.zeros(50), np.zeros(50)).replace(v=np.sin(r))
    s2 = s.replace(v=2 * np.sin(r))
    assert max_wave_speed(s2, g) == 2 * max_wave_speed(s, g)
    assert cfl_dt(s2, g, cfg) == pytest.approx(0.5 * cfl_dt(s, g, cfg), rel=1e-15)
    assert cfl_dt(s, g, cfg) == pytest.approx(0.4 * grid.dr / max_wave_speed(s, g))


def test_max_velocity_gradient():
    grid = RadialGrid(1.0, 100)
    r = grid.centers
    s = FluidState(grid, 3, np.ones(100), 3.0 * r)
    assert max_velocity_gradient(s) == pytest.approx(3.0, rel=1e-12)


@pytest.mark.parametrize("dim", [2, 3])
@pytest.mark.parametrize("recon", RECONS)
def test_mass_change_equals_outflow_each_step(dim, recon):
    g = GasParams(1.0, 1.4)
    grid = RadialGrid(3.0, 120)
    r = grid.centers
    s = FluidState(grid, dim, r**2 * np.exp(-((r - 2.5) ** 2)) + 0.01, 1.5 * np.ones_like(r))
    cfg = SolverConfig(t_end=10.0, reconstruction=recon)
    total_out = 0.0
    m0 = mass(s)
    for _ in range(50):
        before = mass(s)
        s, out = step_with_outflow(s, g, cfg, cfl_dt(s, g, cfg))
        assert out > 0
        assert abs(mass(s) - (before - out)) <= 1e-12 * before
        total_out += out
    assert abs(mass(s) + total_out - m0) <= 1e-12 * m0


def test_t_end_zero_single_snapshot():
    g, _, s0, _, _ = demo_case(3, 2.0)
    tr = run(s0, g, SolverConfig(t_end=0.0))
    assert len(tr.snapshots) == 1
    assert tr.n_steps == 0
    assert tr.termination is Termination.REACHED_T_END
    assert set(tr.series) == set(SERIES_COLUMNS)


def test_snapshot_stride_and_final():
    g, _, s0, _, _ = demo_case(3, 2.0)
    tr = run(s0, g, SolverConfig(t_end=0.2, snapshot_stride=7))
    assert tr.final.time == pytest.approx(0.2, abs=1e-14)
    assert tr.series["t"][-1] == tr.final.time
    assert len(tr.snapshots) == tr.n_steps // 7 + 1 + (tr.n_steps % 7 != 0)
    assert np.all(np.diff(tr.series["t"]) > 0)


def test_deterministic():
    g, _, s0, _, _ = demo_case(2, 1.4)
    a = run(s0, g, SolverConfig(t_end=0.5))
    b = run(s0, g, SolverConfig(t_end=0.5))
    for key in SERIES_COLUMNS:
        assert np.array_equal(a.series[key], b.series[key])
    assert np.array_equal(a.final.rho, b.final.rho)


@pytest.mark.parametrize("dim", [2, 3])
@pytest.mark.parametrize("gamma", DEMO_GAMMAS)
def test_demo_conservation_and_positivity(dim, gamma):
    _, _, _, _, tr = demo_case(dim, gamma)
    assert tr.termination is Termination.REACHED_T_END
    m = tr.series["mass"]
    drift = np.abs(m + tr.series["outflow"] - m[0]) / m[0]
    assert drift.max() < 1e-10
    for s in tr.snapshots:
        assert np.all(s.rho >= 0)


@pytest.mark.parametrize("dim", [2, 3])
@pytest.mark.parametrize("gamma", DEMO_GAMMAS)
def test_gradient_grows_before_bound(dim, gamma):
    _, _, _, rep, tr = demo_case(dim, gamma)
    t_sing = detect_singularity(tr, 50.0)
    assert t_sing is not None and t_sing < rep.t_star


@pytest.mark.parametrize("dim", [2, 3])
def test_dt_decreases_as_front_steepens(dim):
    _, _, _, _, tr = demo_case(dim, 2.0)
    t = tr.series["t"]
    k = np.searchsorted(t, detect_singularity(tr))
    dt = np.diff(t[:k])[:-1]  # the final step may be clipped to t_end
    assert np.all(np.diff(dt) <= 0)


@pytest.mark.parametrize("dim", [2, 3])
@pytest.mark.parametrize("gamma", DEMO_GAMMAS)
def test_origin_symmetry(dim, gamma):
    _, _, _, _, tr = demo_case(dim, gamma)
    t_sing = detect_singularity(tr)
    for s in tr.snapshots:
        if s.time > t_sing:
            break
        assert abs(s.v[0]) <= 2 * abs(s.v[1])


@pytest.mark.parametrize("dim", [2, 3])
def test_origin_stays_vacuum_under_refinement(dim):
    """The first-cell density vanishes as dr -> 0 at a fixed time, as for rho(t, 0) = 0."""
    g = GasParams(1.0, 2.0)
    m = 1.1 * minimal_inflow_amplitude(ProfileSpec(1.0, 0.0), g, RadialGrid(), dim)
    ratios = []
    for n in (1000, 2000):
        s0 = build_initial_data(ProfileSpec(1.0, m), g, RadialGrid(40.0, n), dim)
        s = run(s0, g, SolverConfig(t_end=0.5)).final
        ratios.append(s.rho[0] / s.rho.max())
    assert ratios[0] / ratios[1] > 8.0


@pytest.mark.parametrize("dim", [2, 3])
@pytest.mark.parametrize("recon,order", [(Reconstruction.FIRST_ORDER, 0.8), (Reconstruction.MUSCL_MINMOD, 1.5)])
def test_self_convergence(dim, recon, order):
    g = GasParams(1.0, 2.0)
    m = 1.1 * minimal_inflow_amplitude(ProfileSpec(1.0, 0.0), g, RadialGrid(), dim)
    finals = {}
    for n in (500, 1000, 2000):
        s0 = build_initial_data(ProfileSpec(1.0, m), g, RadialGrid(10.0, n), dim)
        finals[n] = run(s0, g, SolverConfig(t_end=0.3, reconstruction=recon)).final.rho
    errs = [np.sum(np.abs(finals[n] - finals[2 * n].reshape(-1, 2).mean(axis=1))) * 10.0 / n for n in (500, 1000)]
    assert math.log2(errs[0] / errs[1]) >= order


def test_positivity_fault_reported(monkeypatch):
    g, _, s0, _, _ = demo_case(3, 2.0)

    def boom(state, gas, cfg, dt):
        raise solver.PositivityError("negative density -1e-3 in cell 0")

    monkeypatch.setattr(solver, "step_with_outflow", boom)
    tr = run(s0, g, SolverConfig(t_end=1.0))
    assert tr.termination is Termination.POSITIVITY_FAULT
    assert "negative density" in tr.message
    assert len(tr.snapshots) == 1


def test_check_positive_raises():
    with pytest.raises(solver.PositivityError):
        solver._check_positive(np.array([1.0, -1e-300]), 0.0)


def test_dt_floor_termination():
    g, _, s0, _, _ = demo_case(3, 2.0)
    tr = run(s0, g, SolverConfig(t_end=1.0, dt_floor=0.5))
    assert tr.termination is Termination.DT_FLOOR
    assert tr.n_steps == 0
    assert "below floor" in tr.message


def test_minmod_slope():
    dm = np.array([1.0, -1.0, 1.0, 2.0])
    dp = np.array([3.0, -0.5, -1.0, 2.0])
    s1 = solver._minmod_slope(dm, dp, 1.0)
    assert s1.tolist() == [1.0, -0.5, 0.0, 2.0]
    s2 = solver._minmod_slope(dm, dp, 2.0)
    assert s2.tolist() == [2.0, -0.75, 0.0, 2.0]
