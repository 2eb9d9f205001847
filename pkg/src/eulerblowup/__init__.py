"""Finite-time blow-up of radial isentropic Euler flows with a vacuum core.

Weighted density functionals, their blow-up estimates, a radial
finite-volume solver and a verifier that checks the estimates along
simulated trajectories.
"""

from .functionals import (
    FunctionalValue,
    blowup_time_bound,
    c_const,
    convexity_rhs,
    envelope,
    f_rate,
    f_value,
    localization_split,
    riccati_rhs,
    weight_volume_integral,
)
from .gas import GasParams, PolytropicRangeWarning, density_from_sound_speed, pressure, sound_speed
from .initdata import (
    InitialDataReport,
    ProfileSpec,
    build_initial_data,
    check_admissibility,
    minimal_inflow_amplitude,
    momentum_condition,
)
from .radial import FluidState, RadialGrid, integrate_weighted, mass, mass_in_ball
from .solver import Reconstruction, SolverConfig, Termination, Trajectory, run, step
from .verifier import CheckReport, VerifySettings, negate_velocity, verify
from .weights import WeightKind, k0, k0_prime, k0_second, w3, w3_prime, w3_second

__version__ = "0.1.0"
