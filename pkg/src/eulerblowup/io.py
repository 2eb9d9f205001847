"""CSV and JSON writers with the resolved run configuration embedded.

CSV files open with ``# ``-prefixed lines, the first holding the resolved
configuration as compact JSON, followed by a plain header row. Floats are
written in shortest round-trip form so a reread reproduces them exactly and
two identical runs give byte-identical files. JSON reports carry the same
configuration under a top-level ``"config"`` key.
"""

from __future__ import annotations

import enum
import json
import math
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .radial import FluidState
from .solver import SERIES_COLUMNS, Trajectory



def fmt(x) -> str:
    """Shortest decimal that reads back as the same double."""
    return repr(float(x))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def config_line(config: dict) -> str:
    return json.dumps(_jsonable(config), sort_keys=True, separators=(",", ":"))


def write_csv(
    path,
    columns: Sequence[str],
    data: np.ndarray,
    config: dict,
    extra_header: Iterable[str] = (),
) -> Path:
    """Write a 2-D float array (rows x columns) with the config comment header."""
    path = Path(path)
    data = np.asarray(data, dtype=float)
    if data.ndim != 2 or data.shape[1] != len(columns):
        raise ValueError(f"data must have shape (rows, {len(columns)})")
    lines = [f"# config: {config_line(config)}"]
    lines += [f"# {h}" for h in extra_header]
    lines.append(",".join(columns))
    body = [",".join(map(fmt, row)) for row in data]
    path.write_text("\n".join(lines + body) + "\n")
    return path


def write_rows(path, columns: Sequence[str], rows: Sequence[dict], config: dict) -> Path:
    """Like :func:`write_csv` for heterogeneous rows (numbers, booleans, None)."""

    def cell(x):
        if x is None:
            return ""
        if isinstance(x, (bool, np.bool_)):
            return "1" if x else "0"
        if isinstance(x, (float, np.floating)):
            return fmt(x)
        return str(x)

    path = Path(path)
    lines = [f"# config: {config_line(config)}", ",".join(columns)]
    lines += [",".join(cell(row.get(c)) for c in columns) for row in rows]
    path.write_text("\n".join(lines) + "\n")
    return path


def write_json(path, payload: dict, config: Optional[dict]) -> Path:
    path = Path(path)
    doc = {"config": _jsonable(config)} if config is not None else {}
    doc.update(_jsonable(payload))
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def write_series(path, traj: Trajectory, config: dict) -> Path:
    data = np.column_stack([traj.series[c] for c in SERIES_COLUMNS])
    return write_csv(path, SERIES_COLUMNS, data, config, [f"termination: {traj.termination.value}"])


def write_snapshot(path, state: FluidState, config: dict) -> Path:
    data = np.column_stack([state.grid.centers, state.rho, state.v])
    return write_csv(path, ("r", "rho", "v"), data, config, [f"t: {fmt(state.time)}", f"dim: {state.dim}"])


def write_snapshots(directory, traj: Trajectory, config: dict) -> list:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    return [write_snapshot(directory / f"snap_{i:05d}.csv", s, config) for i, s in enumerate(traj.snapshots)]


def _column(values):
    try:
        return np.array([float(x) if x else math.nan for x in values], dtype=float)
    except ValueError:
        return np.array(values, dtype=object)


def read_csv(path) -> tuple[dict, dict]:
    """(config, columns) from a file written by this module.

    Numeric columns come back as float arrays (empty cells as NaN), anything
    else as object arrays of strings.
    """
    config, header, rows = None, None, []
    for line in Path(path).read_text().splitlines():
        if line.startswith("# config: "):
            config = json.loads(line[len("# config: "):])
        elif line.startswith("#"):
            continue
        elif header is None:
            header = line.split(",")
        elif line:
            rows.append(line.split(","))
    if header is None:
        raise ValueError(f"{path} has no header row")
    if any(len(r) != len(header) for r in rows):
        raise ValueError(f"{path} has rows of the wrong width")
    cols = list(zip(*rows)) if rows else [()] * len(header)
    return config, {name: _column(list(c)) for name, c in zip(header, cols)}


PLOT_SCRIPT = '''"""Plot the series and snapshots written next to this script (needs matplotlib)."""
import glob
import os

import matplotlib.pyplot as plt
import numpy as np

here = os.path.dirname(os.path.abspath(__file__))


def load(path):
    return np.genfromtxt(path, delimiter=",", comments="#", names=True)


s = load(os.path.join(here, "series.csv"))
fig, ax = plt.subplots(1, 3, figsize=(13, 3.8))
ax[0].plot(s["t"], s["F"])
ax[0].set_xlabel("t")
ax[0].set_ylabel("F")
ax[1].plot(s["t"], s["Fdot"])
ax[1].set_xlabel("t")
ax[1].set_ylabel("dF/dt")
ax[2].semilogy(s["t"], s["max_dvdr"])
ax[2].set_xlabel("t")
ax[2].set_ylabel("max |dv/dr|")
fig.tight_layout()
fig.savefig(os.path.join(here, "series.png"), dpi=120)

snaps = sorted(glob.glob(os.path.join(here, "snapshots", "snap_*.csv")))
if snaps:
    fig, ax = plt.subplots(1, 2, figsize=(10, 3.8))
    for path in snaps[:: max(1, len(snaps) // 8)]:
        d = load(path)
        ax[0].plot(d["r"], d["rho"], lw=0.8)
        ax[1].plot(d["r"], d["v"], lw=0.8)
    for a, lab in zip(ax, ("rho", "v")):
        a.set_xlim(0, 6)
        a.set_xlabel("r")
        a.set_ylabel(lab)
    fig.tight_layout()
    fig.savefig(os.path.join(here, "snapshots.png"), dpi=120)
'''


def write_plot_script(directory) -> Path:
    path = Path(directory) / "plot_run.py"
    path.write_text(PLOT_SCRIPT)
    return path
