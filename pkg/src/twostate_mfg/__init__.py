"""Solver suite for two-state mean field games on the simplex.

Three routes to the same dynamics: backward integration of the (N+1)-player
equilibrium system, a Godunov Hamilton-Jacobi solver for potential games, and
the scalar reduction of the value difference with its associated density
transport, plus the diagnostics used to study the emerging shocks.
"""

from .core import (
    ModelSpec,
    PotentialPair,
    SimplexPoint,
    ValuePair,
    drift_g,
    hamiltonian_h,
    optimal_rate,
    positive_part,
)
from .grids import (
    BlowUpError,
    RunArtifact,
    ScalarGrid,
    SchemeError,
    SolverConfig,
    ValueGrid,
    zeta_grid,
)
from .hjb import (
    HjConfig,
    derivative_of_upsilon,
    godunov_flux,
    reduced_hamiltonian,
    solve_hjb,
)
from .models import (
    CesParams,
    IsoParams,
    ces_productivity,
    consumer_model,
    isoelastic_utility,
    paradigm_model,
    shock_model,
)
from .nplayer import extract_w, rhs_nplayer, solve_nplayer
from .shock import (
    DensityGrid,
    ShockCurve,
    advection_coefficient,
    initial_density,
    jump_detector,
    max_slope_series,
    rankine_hugoniot_residual,
    scalar_source,
    sign_condition_check,
    snapshot_diagnostics,
    solve_density,
    solve_scalar,
    track_shock,
)

__all__ = [
    "BlowUpError",
    "CesParams",
    "DensityGrid",
    "HjConfig",
    "IsoParams",
    "ModelSpec",
    "PotentialPair",
    "RunArtifact",
    "ScalarGrid",
    "SchemeError",
    "ShockCurve",
    "SimplexPoint",
    "SolverConfig",
    "ValueGrid",
    "ValuePair",
    "advection_coefficient",
    "ces_productivity",
    "consumer_model",
    "derivative_of_upsilon",
    "drift_g",
    "extract_w",
    "godunov_flux",
    "hamiltonian_h",
    "initial_density",
    "isoelastic_utility",
    "jump_detector",
    "max_slope_series",
    "optimal_rate",
    "paradigm_model",
    "positive_part",
    "rankine_hugoniot_residual",
    "reduced_hamiltonian",
    "rhs_nplayer",
    "scalar_source",
    "shock_model",
    "sign_condition_check",
    "snapshot_diagnostics",
    "solve_density",
    "solve_hjb",
    "solve_nplayer",
    "solve_scalar",
    "track_shock",
    "zeta_grid",
]
