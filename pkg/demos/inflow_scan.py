"""How the predicted bound and the observed steepening react to the inflow.

Run:  python demos/inflow_scan.py

The bound t* depends on the data only through F(0), so it stays put while
the inflow grows; the inflow only has to clear the threshold. The observed
steepening time moves with the inflow and sits far below t*.
"""

import warnings

from eulerblowup import (
    GasParams,
    ProfileSpec,
    RadialGrid,
    SolverConfig,
    build_initial_data,
    check_admissibility,
    minimal_inflow_amplitude,
    run,
    verify,
)
from eulerblowup.gas import PolytropicRangeWarning

warnings.simplefilter("ignore", PolytropicRangeWarning)
grid = RadialGrid()

print(" dim  gamma  m/m_min  admissible      t*     t_sing  all checks")
for dim in (3, 2):
    for gamma in (1.4, 2.0):
        g = GasParams(1.0, gamma)
        m_min = minimal_inflow_amplitude(ProfileSpec(1.0, 0.0), g, grid, dim)
        for factor in (0.8, 1.1, 2.0, 4.0):
            spec = ProfileSpec(1.0, factor * m_min)
            s0 = build_initial_data(spec, g, grid, dim)
            rep = check_admissibility(s0, g, spec)
            traj = run(s0, g, SolverConfig(t_end=2.5))
            cr = verify(traj, rep, g)
            t_star = f"{rep.t_star:7.2f}" if rep.admissible else "     --"
            t_sing = f"{cr.t_sing:6.3f}" if cr.t_sing is not None else "    --"
            print(f"  {dim}   {gamma:4.1f}   {factor:5.1f}   {str(rep.admissible):>9}  {t_star}   {t_sing}  "
                  f"{'pass' if cr.all_pass else ('n/a' if not rep.admissible else 'FAIL')}")
