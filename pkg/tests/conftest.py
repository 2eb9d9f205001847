import functools
import json
import warnings

import numpy as np
import pytest

from eulerblowup import (
    GasParams,
    ProfileSpec,
    RadialGrid,
    SolverConfig,
    build_initial_data,
    check_admissibility,
    minimal_inflow_amplitude,
    run,
)
from eulerblowup.gas import PolytropicRangeWarning

DEMO_GAMMAS = (1.4, 2.0, 3.0)


@functools.lru_cache(maxsize=None)
def demo_case(dim, gamma, t_end=3.0, n_cells=2000, stride=10):
    """Demo initial data (s=1, alpha=2, beta=1, m = 1.1 m_min) and its trajectory."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PolytropicRangeWarning)
        g = GasParams(1.0, gamma)
    grid = RadialGrid(40.0, n_cells)
    m_min = minimal_inflow_amplitude(ProfileSpec(1.0, 0.0), g, grid, dim)
    spec = ProfileSpec(1.0, 1.1 * m_min)
    state = build_initial_data(spec, g, grid, dim)
    report = check_admissibility(state, g, spec)
    traj = run(state, g, SolverConfig(t_end=t_end, snapshot_stride=stride))
    return g, spec, state, report, traj


@pytest.fixture
def write_config(tmp_path):
    def _write(overrides=None, name="cfg.json"):
        doc = {
            "gas": {"A": 1.0, "gamma": 2.0},
            "dim": 3,
            "grid": {"r_max": 40.0, "n_cells": 2000},
            "profile": {"s": 1.0, "m_factor": 1.1},
            "solver": {"t_end": 3.0},
            "output_dir": str(tmp_path / "out"),
        }
        for key, val in (overrides or {}).items():
            node = doc
            *path, leaf = key.split(".")
            for p in path:
                node = node.setdefault(p, {})
            node[leaf] = val
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return path

    return _write


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
