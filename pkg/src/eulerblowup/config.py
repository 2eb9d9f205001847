"""Run configuration: one JSON document per run, strictly validated.

Every section is optional and falls back to the demo defaults. Unknown keys
anywhere raise :class:`ConfigError`. The inflow amplitude is given either
directly as ``profile.m`` or as ``profile.m_factor``, a multiple of the
minimal admissible amplitude; ``solver.t_end = null`` means 1.05 times the
predicted blow-up bound.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from .gas import GasParams
from .initdata import ProfileSpec, minimal_inflow_amplitude
from .radial import RadialGrid
from .solver import Reconstruction, SolverConfig
from .verifier import VerifySettings

# t_end = null runs to this multiple of t_star.
T_END_STAR_FACTOR = 1.05

DEFAULTS: dict = {
    "gas": {"A": 1.0, "gamma": 2.0},
    "dim": 3,
    "grid": {"r_max": 40.0, "n_cells": 2000},
    "profile": {"s": 1.0, "m": None, "m_factor": 1.1, "alpha": 2.0, "beta": 1.0},
    "solver": {
        "cfl": 0.2,
        "reconstruction": "muscl_minmod",
        "t_end": 3.0,
        "snapshot_stride": 10,
        "dt_floor": None,
        "limiter_theta": 1.5,
    },
    "verify": {
        "tol": 1e-2,
        "singularity_factor": 50.0,
        "r0": [0.5, 1.0, 2.0],
        "ordering_tol": 0.05,
        "rate_tol": 1e-3,
        "negate_velocity": False,
    },
    "output_dir": "out",
    "sweep": {"gamma": [], "m_factor": [], "workers": None},
}


class ConfigError(ValueError):
    """The configuration document is malformed or violates an invariant."""


def _merge(defaults: dict, given: Any, where: str) -> dict:
    if not isinstance(given, dict):
        raise ConfigError(f"{where or 'config'} must be a JSON object")
    unknown = sorted(set(given) - set(defaults))
    if unknown:
        raise ConfigError(f"unknown key(s) in {where or 'config'}: {', '.join(unknown)}")
    out = copy.deepcopy(defaults)
    for key, val in given.items():
        if isinstance(defaults[key], dict):
            out[key] = _merge(defaults[key], val, f"{where}.{key}" if where else key)
        else:
            out[key] = val
    return out


def _number(x, name, allow_none=False):
    if x is None and allow_none:
        return None
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
        raise ConfigError(f"{name} must be a finite number, got {x!r}")
    return float(x)


def _number_list(xs, name):
    if not isinstance(xs, list):
        raise ConfigError(f"{name} must be a list of numbers")
    return [_number(x, f"{name}[{i}]") for i, x in enumerate(xs)]


@dataclass(frozen=True)
class RunConfig:
    gas: GasParams
    dim: int
    grid: RadialGrid
    s: float
    m: Optional[float]
    m_factor: Optional[float]
    alpha: float
    beta: float
    solver: dict
    verify: VerifySettings
    negate_velocity: bool
    output_dir: Path
    sweep: dict
    raw: dict

    def profile(self, m: float) -> ProfileSpec:
        return ProfileSpec(s=self.s, m=m, alpha=self.alpha, beta=self.beta)

    def inflow_amplitude(self) -> tuple[float, Optional[float]]:
        """(m, m_min); m_min is None when it was not needed and cannot be computed."""
        try:
            m_min = minimal_inflow_amplitude(self.profile(0.0), self.gas, self.grid, self.dim)
        except ValueError:
            m_min = None
        if self.m is not None:
            return self.m, m_min
        if m_min is None:
            raise ConfigError("m_factor given but the profile admits no minimal inflow amplitude")
        return self.m_factor * m_min, m_min

    def solver_config(self, t_star: Optional[float]) -> SolverConfig:
        opts = dict(self.solver)
        if opts["t_end"] is None:
            if t_star is None or not math.isfinite(t_star):
                raise ConfigError("solver.t_end = null needs admissible data (finite t_star)")
            opts["t_end"] = T_END_STAR_FACTOR * t_star
        return SolverConfig(**opts)

    def with_overrides(self, **changes) -> "RunConfig":
        """New config from ``raw`` with dotted-key overrides, e.g. ``{"gas.gamma": 3}``."""
        raw = copy.deepcopy(self.raw)
        for dotted, val in changes.items():
            node = raw
            *path, leaf = dotted.split(".")
            for key in path:
                node = node[key]
            node[leaf] = val
        # m and m_factor are alternatives; setting one clears the other
        if "profile.m" in changes:
            raw["profile"]["m_factor"] = None
        elif "profile.m_factor" in changes:
            raw["profile"]["m"] = None
        return parse_config(raw)


def parse_config(doc: Any) -> RunConfig:
    raw = _merge(DEFAULTS, doc, "")
    try:
        gas = GasParams(_number(raw["gas"]["A"], "gas.A"), _number(raw["gas"]["gamma"], "gas.gamma"))
        dim = raw["dim"]
        if isinstance(dim, bool) or dim not in (2, 3):
            raise ConfigError(f"dim must be 2 or 3, got {dim!r}")
        n = raw["grid"]["n_cells"]
        if isinstance(n, bool) or not isinstance(n, int):
            raise ConfigError(f"grid.n_cells must be an integer, got {n!r}")
        grid = RadialGrid(_number(raw["grid"]["r_max"], "grid.r_max"), n)

        p = raw["profile"]
        m = _number(p["m"], "profile.m", allow_none=True)
        m_factor = _number(p["m_factor"], "profile.m_factor", allow_none=True)
        if m is not None and doc.get("profile", {}).get("m_factor") is not None:
            raise ConfigError("give profile.m or profile.m_factor, not both")
        if m is not None:
            m_factor = None
        elif m_factor is None:
            raise ConfigError("one of profile.m and profile.m_factor is required")
        s, alpha, beta = (_number(p[k], f"profile.{k}") for k in ("s", "alpha", "beta"))
        ProfileSpec(s=s, m=0.0 if m is None else m, alpha=alpha, beta=beta)

        sv = dict(raw["solver"])
        try:
            sv["reconstruction"] = Reconstruction(sv["reconstruction"])
        except ValueError:
            names = ", ".join(r.value for r in Reconstruction)
            raise ConfigError(f"solver.reconstruction must be one of {names}") from None
        sv["cfl"] = _number(sv["cfl"], "solver.cfl")
        sv["t_end"] = _number(sv["t_end"], "solver.t_end", allow_none=True)
        sv["dt_floor"] = _number(sv["dt_floor"], "solver.dt_floor", allow_none=True)
        sv["limiter_theta"] = _number(sv["limiter_theta"], "solver.limiter_theta")
        stride = sv["snapshot_stride"]
        if isinstance(stride, bool) or not isinstance(stride, int):
            raise ConfigError("solver.snapshot_stride must be an integer")
        # validate everything except a deferred t_end
        SolverConfig(**{**sv, "t_end": 1.0 if sv["t_end"] is None else sv["t_end"]})

        vv = dict(raw["verify"])
        negate = vv.pop("negate_velocity")
        if not isinstance(negate, bool):
            raise ConfigError("verify.negate_velocity must be true or false")
        r0 = vv["r0"]
        vv["r0"] = tuple(_number_list(r0 if isinstance(r0, list) else [r0], "verify.r0"))
        for k in ("tol", "singularity_factor", "ordering_tol", "rate_tol"):
            vv[k] = _number(vv[k], f"verify.{k}")
        settings = VerifySettings(**vv)
        if any(x > grid.r_max for x in settings.r0):
            raise ConfigError("verify.r0 values must not exceed grid.r_max")

        out = raw["output_dir"]
        if not isinstance(out, str) or not out:
            raise ConfigError("output_dir must be a non-empty string")

        sw = raw["sweep"]
        workers = sw["workers"]
        if workers is not None and (isinstance(workers, bool) or not isinstance(workers, int) or workers < 1):
            raise ConfigError("sweep.workers must be a positive integer or null")
        sweep = {
            "gamma": _number_list(sw["gamma"], "sweep.gamma"),
            "m_factor": _number_list(sw["m_factor"], "sweep.m_factor"),
            "workers": workers,
        }
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc

    return RunConfig(
        gas=gas,
        dim=dim,
        grid=grid,
        s=s,
        m=m,
        m_factor=m_factor,
        alpha=alpha,
        beta=beta,
        solver=sv,
        verify=settings,
        negate_velocity=negate,
        output_dir=Path(out),
        sweep=sweep,
        raw=raw,
    )


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(doc)
