"""Check the blow-up inequality chain along a simulated trajectory.

The inequalities are proved for smooth solutions, so they are asserted only
on the resolved window ``[0, min(t_end, t_sing, 0.95 t_star)]``; past the
onset of steepening they are still computed but never judged.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .functionals import (
    blowup_time_bound,
    FunctionalValue,
    c_const,
    convexity_rhs,
    envelope,
    f_value,
    localization_split,
)
from .gas import GasParams
from .initdata import InitialDataReport
from .solver import Termination, Trajectory

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"

# Fraction of the resolved window treated as the smooth initial interval.
SMOOTH_FRACTION = 0.25
# Checks on the Riccati bound and the envelope stop short of t_star.
T_STAR_FRACTION = 0.95
# Gradient-peak detector: a drop of this fraction below the running maximum,
# after the gradient has grown at least PEAK_MIN_GROWTH-fold, confirms a peak.
PEAK_DROP = 0.2
PEAK_MIN_GROWTH = 5.0


@dataclass
class CheckResult:
    name: str
    status: str
    worst_margin: Optional[float] = None
    t_worst: Optional[float] = None
    tol: Optional[float] = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def summary(self) -> str:
        if self.status == SKIPPED:
            return f"SKIP {self.name}: {self.detail}"
        tag = "PASS" if self.status == PASS else "FAIL"
        return (
            f"{tag} {self.name}: worst relative margin {self.worst_margin:+.3e} "
            f"at t={self.t_worst:.6g} (tol {self.tol:g})"
        )


@dataclass(frozen=True)
class VerifySettings:
    tol: float = 1e-2
    singularity_factor: float = 50.0
    r0: tuple = (0.5, 1.0, 2.0)
    ordering_tol: float = 0.05
    rate_tol: float = 1e-3

    def __post_init__(self):
        if not self.tol > 0 or not self.rate_tol > 0 or not self.ordering_tol >= 0:
            raise ValueError("tolerances must be positive")
        if not self.singularity_factor > 1:
            raise ValueError("singularity_factor must exceed 1")
        r0 = (self.r0,) if np.ndim(self.r0) == 0 else tuple(self.r0)
        if not r0 or any(not x > 0 for x in r0):
            raise ValueError("r0 values must be positive")
        object.__setattr__(self, "r0", tuple(float(x) for x in r0))


@dataclass
class CheckReport:
    admissibility: dict
    checks: dict
    t_sing: Optional[float]
    t_sing_gradient: Optional[float]
    t_sing_dt_floor: Optional[float]
    t_sing_gradient_peak: Optional[float]
    t_star: Optional[float]
    ordering_ok: bool
    t_window: Optional[float]
    termination: str
    settings: dict = field(default_factory=dict)

    @property
    def admissible(self) -> bool:
        return bool(self.admissibility.get("admissible"))

    @property
    def all_pass(self) -> bool:
        return self.admissible and self.ordering_ok and all(c.ok for c in self.checks.values())

    @property
    def gap(self) -> Optional[float]:
        if self.t_sing is None or self.t_star is None:
            return None
        return self.t_star - self.t_sing

    def to_dict(self) -> dict:
        return {
            "admissible": self.admissible,
            "all_pass": self.all_pass,
            "admissibility": self.admissibility,
            "checks": {k: asdict(v) for k, v in self.checks.items()},
            "t_sing": self.t_sing,
            "t_sing_gradient": self.t_sing_gradient,
            "t_sing_dt_floor": self.t_sing_dt_floor,
            "t_sing_gradient_peak": self.t_sing_gradient_peak,
            "t_star": self.t_star,
            "t_star_minus_t_sing": self.gap,
            "ordering_ok": self.ordering_ok,
            "t_window": self.t_window,
            "termination": self.termination,
            "settings": self.settings,
        }

    def summary_lines(self) -> list:
        lines = [c.summary() for c in self.checks.values()]
        ts = "none" if self.t_sing is None else f"{self.t_sing:.6g}"
        tstar = "inf" if self.t_star is None else f"{self.t_star:.6g}"
        tag = "PASS" if self.ordering_ok else "FAIL"
        lines.append(f"{tag} ordering: t_sing={ts} vs t_star={tstar}")
        return lines


def monitor(traj: Trajectory) -> list:
    """The (t, F, F') record of every step of ``traj``."""
    s = traj.series
    return [FunctionalValue(F=float(F), Fdot=float(Fd), t=float(t)) for t, F, Fd in zip(s["t"], s["F"], s["Fdot"])]


def _arrays(series):
    t = np.array([x.t for x in series], dtype=float)
    F = np.array([x.F for x in series], dtype=float)
    Fd = np.array([x.Fdot for x in series], dtype=float)
    return t, F, Fd


def _window(series, t_end):
    if t_end is None:
        return list(series)
    return [x for x in series if x.t <= t_end]


def _judge(name, margins, times, tol, detail=""):
    if len(margins) == 0:
        return CheckResult(name, SKIPPED, detail="no samples in the resolved window")
    k = int(np.argmin(margins))
    worst = float(margins[k])
    status = PASS if worst >= -tol else FAIL
    return CheckResult(name, status, worst, float(times[k]), tol, detail)


def _skip(name, why):
    return CheckResult(name, SKIPPED, detail=why)


def check_rate_monotone(series: Sequence[FunctionalValue], tol: float = 1e-2, admissible: bool = True) -> CheckResult:
    """``F'(t) >= F'(0) > 0``, relative to ``F'(0)``."""
    name = "rate_monotone"
    if not admissible:
        return _skip(name, "initial data inadmissible")
    t, _, Fd = _arrays(series)
    if Fd[0] <= 0:
        return CheckResult(name, FAIL, -1.0, float(t[0]), tol, "initial rate is not positive")
    return _judge(name, Fd / Fd[0] - 1.0, t, tol)


def check_convexity(
    series: Sequence[FunctionalValue], g: GasParams, dim: int, tol: float = 1e-2, admissible: bool = True
) -> CheckResult:
    """Integrated convexity: ``F'(t) - F'(0) >= int_0^t A F**gamma / W**(gamma-1) ds``.

    The right side is accumulated with the trapezoid rule on the recorded
    times; differencing F' twice would amplify step-to-step noise.
    """
    name = "convexity"
    if not admissible:
        return _skip(name, "initial data inadmissible")
    t, F, Fd = _arrays(series)
    if len(t) < 2:
        return _skip(name, "fewer than two samples")
    rhs = convexity_rhs(np.maximum(F, 0.0), g, dim)
    integral = np.concatenate(([0.0], np.cumsum(0.5 * (rhs[1:] + rhs[:-1]) * np.diff(t))))
    gain = Fd - Fd[0]
    live = integral > 0
    margins = gain[live] / integral[live] - 1.0
    return _judge(name, margins, t[live], tol)


def check_riccati_and_envelope(
    series: Sequence[FunctionalValue],
    F0: float,
    g: GasParams,
    dim: int,
    tol: float = 1e-2,
    t_star: Optional[float] = None,
    admissible: bool = True,
) -> tuple:
    """``F' >= C F**((gamma+1)/2)`` and ``F >= envelope(t)`` before 0.95 t_star."""
    if not admissible or t_star is None or not math.isfinite(t_star):
        why = "initial data inadmissible"
        return _skip("riccati", why), _skip("envelope", why)
    t, F, Fd = _arrays(series)
    # the envelope is only finite before the bound implied by F0 itself
    keep = t < T_STAR_FRACTION * min(t_star, blowup_time_bound(F0, g, dim))
    t, F, Fd = t[keep], F[keep], Fd[keep]
    C = c_const(g, dim)
    ric = Fd / (C * F ** ((g.gamma + 1.0) / 2.0)) - 1.0
    env = F / envelope(t, F0, g, dim) - 1.0
    return _judge("riccati", ric, t, tol), _judge("envelope", env, t, tol)


def check_rate_consistency(series: Sequence[FunctionalValue], tol: float = 1e-3) -> CheckResult:
    """Finite-difference dF/dt against the quadrature rate on the given samples.

    Errors are relative to ``max |F'|`` over the same samples; the first and
    last samples (one-sided differences) are excluded.
    """
    name = "rate_consistency"
    t, F, Fd = _arrays(series)
    if len(t) < 4:
        return _skip(name, "fewer than four samples")
    fd = np.gradient(F, t)
    scale = np.max(np.abs(Fd))
    if scale == 0:
        return _skip(name, "rate identically zero")
    err = np.abs(fd[1:-1] - Fd[1:-1]) / scale
    return _judge(name, -err, t[1:-1], tol)


def _gradient_peak(t, grad):
    """Time of the first peak of max |dv/dr| confirmed by a later drop.

    Once a shock is captured the discrete gradient is limited by the cell
    size, so it stops growing and falls back; the peak marks the onset even
    when the threshold factor is never reached (strong inflow steepens from
    an already large initial gradient).
    """
    if grad[0] <= 0:
        return None
    running = np.maximum.accumulate(grad)
    dropped = (grad < (1.0 - PEAK_DROP) * running) & (running >= PEAK_MIN_GROWTH * grad[0])
    hit = np.nonzero(dropped)[0]
    if not hit.size:
        return None
    return float(t[int(np.argmax(grad[: hit[0]]))])


def singularity_detectors(traj: Trajectory, factor: float = 50.0) -> tuple:
    """(gradient-threshold time, dt-floor time, gradient-peak time); any may be None."""
    s = traj.series
    g = s["max_dvdr"]
    t_grad = None
    if g[0] > 0:
        hit = np.nonzero(g > factor * g[0])[0]
        if hit.size:
            t_grad = float(s["t"][hit[0]])
    t_floor = float(s["t"][-1]) if traj.termination is Termination.DT_FLOOR else None
    return t_grad, t_floor, _gradient_peak(s["t"], g)


def detect_singularity(traj: Trajectory, factor: float = 50.0) -> Optional[float]:
    """Earliest onset time among the detectors: max |dv/dr| above ``factor``
    times its initial value, the time-step floor, or a confirmed gradient
    peak; None if none fires."""
    found = [x for x in singularity_detectors(traj, factor) if x is not None]
    return min(found) if found else None


def check_localization(traj: Trajectory, r0: float, tol: float = 1e-2) -> CheckResult:
    """``F <= int_{B_r0} rho w dx + sup_{r >= r0} w * mass(0)`` at every snapshot."""
    name = f"localization_r0={r0:g}"
    first = traj.snapshots[0]
    if not (0 < r0 <= first.grid.r_max):
        raise ValueError(f"r0 must lie in (0, {first.grid.r_max}]")
    mass0 = float(traj.series["mass"][0])
    margins, times = [], []
    for state in traj.snapshots:
        F = f_value(state)
        ball, tail = localization_split(state, r0, mass0)
        bound = ball + tail
        margins.append(1.0 - F / bound if bound > 0 else (0.0 if F == 0 else -math.inf))
        times.append(state.time)
    return _judge(name, np.asarray(margins), np.asarray(times), tol)


def negate_velocity(traj: Trajectory) -> Trajectory:
    """Copy of ``traj`` with every velocity (and hence every rate) sign-flipped."""
    snaps = [s.replace(v=-np.asarray(s.v)) for s in traj.snapshots]
    series = {k: np.array(v, copy=True) for k, v in traj.series.items()}
    series["Fdot"] = -series["Fdot"]
    return Trajectory(snapshots=snaps, series=series, termination=traj.termination, message=traj.message, config=traj.config)


def verify(
    traj: Trajectory,
    report: InitialDataReport,
    g: GasParams,
    settings: VerifySettings = VerifySettings(),
) -> CheckReport:
    """Run every check on ``traj`` and collect the results."""
    dim = traj.snapshots[0].dim
    admissible = report.admissible
    t_star = report.t_star if admissible else None
    t_grad, t_floor, t_peak = singularity_detectors(traj, settings.singularity_factor)
    t_sing = detect_singularity(traj, settings.singularity_factor)
    series = monitor(traj)
    ends = [series[-1].t]
    if t_sing is not None:
        ends.append(t_sing)
    if t_star is not None:
        ends.append(T_STAR_FRACTION * t_star)
    t_window = min(ends)
    resolved = _window(series, t_window)

    checks = {}
    checks["rate_monotone"] = check_rate_monotone(resolved, settings.tol, admissible)
    checks["convexity"] = check_convexity(resolved, g, dim, settings.tol, admissible)
    ric, env = check_riccati_and_envelope(resolved, report.F0, g, dim, settings.tol, t_star, admissible)
    checks["riccati"] = ric
    checks["envelope"] = env
    if admissible:
        smooth = _window(series, SMOOTH_FRACTION * t_window)
        checks["rate_consistency"] = check_rate_consistency(smooth, settings.rate_tol)
    else:
        checks["rate_consistency"] = _skip("rate_consistency", "initial data inadmissible")
    for r0 in settings.r0:
        c = check_localization(traj, r0, settings.tol)
        checks[c.name] = c

    ordering = t_star is not None and t_sing is not None and t_sing <= (1.0 + settings.ordering_tol) * t_star
    return CheckReport(
        admissibility=report.to_dict(),
        checks=checks,
        t_sing=t_sing,
        t_sing_gradient=t_grad,
        t_sing_dt_floor=t_floor,
        t_sing_gradient_peak=t_peak,
        t_star=t_star,
        ordering_ok=bool(ordering),
        t_window=t_window,
        termination=traj.termination.value,
        settings=asdict(settings),
    )

