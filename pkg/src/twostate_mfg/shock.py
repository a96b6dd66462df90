"""Scalar reduction of the two-state system and its shock diagnostics.

Both the drift and the Hamiltonian depend on the values only through the
difference ``w = u1 - u2``, which closes into a scalar advection-reaction
equation

    -w_t + r(w, zeta) w_zeta = q(w, zeta),
    r = -a,   a(w, zeta) = ((1 - 2 zeta) |w| - w) / 2,
    q(w, zeta) = f(1, theta) - f(2, theta) - |w| w / 2,

(`a` coincides with the mean-field drift ``g1`` evaluated at ``(w, 0)``).
Alongside it lives the conservation law ``-P_t + d/dzeta (r P) = 0`` for a
probability density ``P`` over the simplex, solved here with a first-order
semidiscrete central-upwind flux.  Discontinuities of ``P`` obey the
Rankine-Hugoniot relation ``[P] s' = -[r P]``; the remaining helpers locate
jumps, track maximal slopes and check the boundary sign conditions
``w(0, t) >= 0``, ``w(1, t) <= 0``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import ModelSpec, SimplexPoint
from .grids import (
    BlowUpError,
    RunArtifact,
    ScalarGrid,
    SchemeError,
    SolverConfig,
    trapezoid_mass,
    zeta_grid,
)

SIGN_TOL = 1e-10
NEGATIVITY_TOL = -1e-12


def advection_coefficient(w, zeta):
    """Coefficient ``a(w, zeta) = ((1 - 2 zeta) |w| - w) / 2`` multiplying
    ``w_zeta``; identical to the drift ``g1((w, 0), theta)``."""
    return ((1.0 - 2.0 * zeta) * np.abs(w) - w) * 0.5


def scalar_source(w, zeta, model: ModelSpec):
    """Source ``q = f(1, theta) - f(2, theta) - |w| w / 2`` of the reduction."""
    theta = SimplexPoint(zeta)
    return model.f(1, theta) - model.f(2, theta) - 0.5 * np.abs(w) * w


def solve_scalar(
    model: ModelSpec, cfg: SolverConfig, keep_history: bool = True
) -> RunArtifact:
    """Integrate the scalar reduction backward from ``w(T) = psi1 - psi2``.

    The spatial derivative is the first-order one-sided difference chosen by
    the sign of ``a``: ``a(., 0) >= 0`` and ``a(., 1) <= 0`` always, so the
    selected stencils point inward and the ends need no exterior data.  With
    ``keep_history`` the per-step trajectory is stored on the artifact, which
    is what :func:`solve_density` reads.
    """
    n = cfg.n_grid
    zeta = zeta_grid(n)
    theta = SimplexPoint(zeta)
    w = np.broadcast_to(
        np.asarray(model.psi(1, theta), dtype=float)
        - np.asarray(model.psi(2, theta), dtype=float),
        zeta.shape,
    ).copy()
    source_const = np.broadcast_to(
        np.asarray(model.f(1, theta), dtype=float)
        - np.asarray(model.f(2, theta), dtype=float),
        zeta.shape,
    ).astype(float)

    n_steps = cfg.n_steps
    snap_steps = cfg.snapshot_steps()
    snap_at = {m: i for i, m in enumerate(snap_steps)}
    out = np.empty((len(snap_steps), n + 1))
    history = np.empty((n_steps + 1, n + 1)) if keep_history else None

    dt = cfg.dt
    inv_dz = float(n)
    one_minus_2z = 1.0 - 2.0 * zeta
    fwd = np.zeros(n + 1)
    bwd = np.zeros(n + 1)
    cfl_max = 0.0
    cfl_warned = False
    sign_violations = 0
    for j in range(n_steps + 1):
        m = n_steps - j
        if history is not None:
            history[m] = w
        i = snap_at.get(m)
        if i is not None:
            out[i] = w
        if w[0] < -SIGN_TOL or w[-1] > SIGN_TOL:
            sign_violations += 1
        if m == 0:
            break
        a = (one_minus_2z * np.abs(w) - w) * 0.5
        diffs = (w[1:] - w[:-1]) * inv_dz
        fwd[:-1] = diffs
        bwd[1:] = diffs
        w_z = np.where(a > 0.0, fwd, bwd)
        q = source_const - 0.5 * np.abs(w) * w
        w = w + dt * (a * w_z + q)
        cfl = dt * inv_dz * float(np.abs(a).max())
        if cfl > cfl_max:
            cfl_max = cfl
        if cfl > cfg.cfl_warn_threshold and not cfl_warned:
            warnings.warn(
                f"scalar advection CFL number {cfl:.3f} exceeds "
                f"{cfg.cfl_warn_threshold}",
                RuntimeWarning,
                stacklevel=2,
            )
            cfl_warned = True
        if np.abs(w).max() > cfg.blowup_bound:
            raise BlowUpError(
                f"|w| exceeded {cfg.blowup_bound:g} at t={cfg.step_time(m - 1):.6g}"
            )

    times = np.array([cfg.step_time(m) for m in snap_steps])
    step_times = (
        np.array([cfg.step_time(m) for m in range(n_steps + 1)])
        if keep_history
        else None
    )
    return RunArtifact(
        solver="scalar",
        model=model.name,
        n=n,
        zeta=zeta,
        times=times,
        fields={"w": out},
        info={
            "dt": dt,
            "steps": n_steps,
            "cfl_max": cfl_max,
            "cfl_warned": cfl_warned,
            "sign_violations": sign_violations,
        },
        step_times=step_times,
        step_values=history,
    )


@dataclass
class DensityGrid:
    """Probability density over the simplex grid at one time instant."""

    p: np.ndarray
    t: float

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=float)
        if self.p.min() < NEGATIVITY_TOL:
            raise SchemeError(
                f"density fell below {NEGATIVITY_TOL:g} at t={self.t:.6g} "
                f"(min {self.p.min():.3e})"
            )


def initial_density(n: int) -> DensityGrid:
    """Uniform density on the open interval, zero at the ends, normalised to
    unit trapezoidal mass."""
    p = np.ones(n + 1)
    p[0] = 0.0
    p[-1] = 0.0
    p /= trapezoid_mass(p, 1.0 / n)
    return DensityGrid(p, 0.0)


class _WSampler:
    """Linear-in-time, linear-in-space sampler of a stored w trajectory."""

    def __init__(self, run: RunArtifact, zeta_out: np.ndarray):
        if run.step_values is not None:
            self.times = run.step_times
            self.values = run.step_values
        elif "w" in run.fields:
            self.times = run.times
            self.values = run.fields["w"]
        else:
            raise ValueError(f"run '{run.solver}' does not carry a w field")
        if len(self.times) < 1:
            raise ValueError("w run has no samples")
        self.zeta_in = run.zeta
        self.zeta_out = zeta_out
        self.same_grid = self.zeta_in.shape == zeta_out.shape and np.array_equal(
            self.zeta_in, zeta_out
        )

    def __call__(self, t: float) -> np.ndarray:
        ts = self.times
        k = int(np.searchsorted(ts, t))
        if k <= 0:
            row = self.values[0]
        elif k >= len(ts):
            row = self.values[-1]
        else:
            t0, t1 = ts[k - 1], ts[k]
            if t - t0 <= 1e-12:
                row = self.values[k - 1]
            else:
                lam = (t - t0) / (t1 - t0)
                row = (1.0 - lam) * self.values[k - 1] + lam * self.values[k]
        if self.same_grid:
            return row
        return np.interp(self.zeta_out, self.zeta_in, row)


def solve_density(w_run: RunArtifact, cfg: SolverConfig) -> RunArtifact:
    """Advance the density ``P`` forward in time under the stored ``w``.

    Semidiscrete central-upwind flux with local one-sided speeds taken from
    the advection coefficient at the two cells of each face, forward Euler in
    time, homogeneous Dirichlet values at the ends (where the advection
    coefficient vanishes).  ``w`` is interpolated in time and, when the grids
    differ, linearly in space.  Mass lost through the boundary faces is
    accumulated so that interior mass plus outflow is conserved.
    """
    n = cfg.n_grid
    zeta = zeta_grid(n)
    dz = 1.0 / n
    sample_w = _WSampler(w_run, zeta)
    p = initial_density(n).p
    mass0 = trapezoid_mass(p, dz)

    n_steps = cfg.n_steps
    snap_steps = cfg.snapshot_steps()
    snap_at = {m: i for i, m in enumerate(snap_steps)}
    out = np.empty((len(snap_steps), n + 1))

    dt = cfg.dt
    one_minus_2z = 1.0 - 2.0 * zeta
    outflow = 0.0
    mass_drift_max = 0.0
    p_min = float(p.min())
    speed_max = 0.0
    cfl_warned = False
    for m in range(n_steps + 1):
        i = snap_at.get(m)
        if i is not None:
            out[i] = p
            DensityGrid(p, cfg.step_time(m))  # enforces the negativity bound
            drift = abs(trapezoid_mass(p, dz) + outflow - mass0)
            if drift > mass_drift_max:
                mass_drift_max = drift
        if m == n_steps:
            break
        w = sample_w(cfg.step_time(m))
        a = (one_minus_2z * np.abs(w) - w) * 0.5
        a_plus = np.maximum(np.maximum(a[:-1], a[1:]), 0.0)
        a_minus = np.minimum(np.minimum(a[:-1], a[1:]), 0.0)
        spread = a_plus - a_minus
        flux_node = a * p
        num = (
            a_plus * flux_node[:-1]
            - a_minus * flux_node[1:]
            + a_plus * a_minus * (p[1:] - p[:-1])
        )
        face_flux = np.divide(num, spread, out=np.zeros_like(num), where=spread > 0.0)
        p = p.copy()
        p[1:-1] -= (dt / dz) * (face_flux[1:] - face_flux[:-1])
        # interior trapezoidal mass changes by -dt * (last face - first face)
        outflow += dt * (float(face_flux[-1]) - float(face_flux[0]))
        pm = float(p.min())
        if pm < p_min:
            p_min = pm
        if pm < NEGATIVITY_TOL:
            raise SchemeError(
                f"density fell below {NEGATIVITY_TOL:g} at "
                f"t={cfg.step_time(m + 1):.6g} (min {pm:.3e})"
            )
        sm = float(spread.max())
        if sm > speed_max:
            speed_max = sm
        if dt * sm / dz > cfg.cfl_warn_threshold and not cfl_warned:
            warnings.warn(
                f"density CFL number {dt * sm / dz:.3f} exceeds "
                f"{cfg.cfl_warn_threshold}",
                RuntimeWarning,
                stacklevel=2,
            )
            cfl_warned = True

    times = np.array([cfg.step_time(m) for m in snap_steps])
    return RunArtifact(
        solver="density",
        model=w_run.model,
        n=n,
        zeta=zeta,
        times=times,
        fields={"p": out},
        info={
            "dt": dt,
            "steps": n_steps,
            "mass_initial": mass0,
            "outflow": outflow,
            "mass_drift_max": mass_drift_max,
            "p_min": p_min,
            "speed_max": speed_max,
        },
    )


def rankine_hugoniot_residual(
    p_left: float, p_right: float, r_left: float, r_right: float, s_dot: float
) -> float:
    """Residual of ``[P] s' = -[r P]``: zero on an admissible discontinuity."""
    return (p_right - p_left) * s_dot + (r_right * p_right - r_left * p_left)


def jump_detector(grid: ScalarGrid, threshold_factor: float) -> list:
    """Indices ``k`` whose one-cell jump ``|v_{k+1} - v_k|`` exceeds
    ``threshold_factor`` times the median one-cell jump."""
    v = grid.values
    if v.size < 4:
        raise ValueError("need at least 4 nodes to detect jumps")
    jumps = np.abs(np.diff(v))
    return [int(k) for k in np.nonzero(jumps > threshold_factor * np.median(jumps))[0]]


@dataclass
class ShockCurve:
    """Detected jump locations over time; ``locations`` holds the midpoint of
    the steepest flagged cell per snapshot."""

    times: np.ndarray
    locations: np.ndarray

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.locations = np.asarray(self.locations, dtype=float)
        if self.times.shape != self.locations.shape:
            raise ValueError("times and locations must have equal length")
        finite = self.locations[np.isfinite(self.locations)]
        if finite.size and (finite.min() < 0.0 or finite.max() > 1.0):
            raise ValueError("shock locations must lie in [0, 1]")


def track_shock(run: RunArtifact, threshold_factor: float = 5.0) -> ShockCurve:
    """Shock curve of a run: per snapshot the steepest detected cell midpoint,
    NaN when the detector stays quiet."""
    locations = []
    for idx in range(len(run.times)):
        grid = run.scalar_snapshot(idx)
        hits = jump_detector(grid, threshold_factor)
        if not hits:
            locations.append(np.nan)
            continue
        jumps = np.abs(np.diff(grid.values))
        k = max(hits, key=lambda h: jumps[h])
        locations.append(0.5 * (grid.zeta[k] + grid.zeta[k + 1]))
    return ShockCurve(run.times.copy(), np.asarray(locations))


def max_slope_series(run: RunArtifact) -> np.ndarray:
    """Per-snapshot maximal one-cell slope, as rows ``(t, max_k |dv/dzeta|)``."""
    if len(run.times) < 2:
        raise ValueError("need at least 2 snapshots for a slope series")
    rows = []
    for idx in range(len(run.times)):
        grid = run.scalar_snapshot(idx)
        rows.append(
            (float(run.times[idx]), float(np.abs(np.diff(grid.values)).max() * grid.n))
        )
    return np.asarray(rows)


def sign_condition_check(grid: ScalarGrid) -> tuple:
    """Boundary sign conditions ``(w_0 >= 0, w_N <= 0)`` up to 1e-10."""
    return (
        bool(grid.values[0] >= -SIGN_TOL),
        bool(grid.values[-1] <= SIGN_TOL),
    )


def snapshot_diagnostics(run: RunArtifact, threshold_factor: float = 5.0) -> list:
    """Per-snapshot diagnostic rows: trapezoidal mass, maximal slope, detected
    jump range and boundary sign flags of the run's scalar view."""
    rows = []
    dz = 1.0 / run.n
    for idx in range(len(run.times)):
        grid = run.scalar_snapshot(idx)
        hits = jump_detector(grid, threshold_factor)
        if hits:
            mids = [0.5 * (grid.zeta[k] + grid.zeta[k + 1]) for k in hits]
            zmin, zmax = min(mids), max(mids)
        else:
            zmin = zmax = float("nan")
        ok_left, ok_right = sign_condition_check(grid)
        rows.append(
            {
                "t": float(run.times[idx]),
                "mass": trapezoid_mass(grid.values, dz),
                "max_slope": float(np.abs(np.diff(grid.values)).max() * run.n),
                "shock_zeta_min": zmin,
                "shock_zeta_max": zmax,
                "sign_ok_left": ok_left,
                "sign_ok_right": ok_right,
            }
        )
    return rows
