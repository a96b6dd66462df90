"""Backward integration of the (N+1)-player equilibrium system.

The values ``u^i_k(t)`` of the two states live on the nodes ``zeta_k = k/N``.
Marching runs backward from the terminal data with explicit Euler steps,
``u(t - dt) = u(t) + dt * rhs``, where ``rhs`` collects the switching terms of
the other players and the Hamiltonian source:

    rhs(u1)_k = N (1-zeta_k) (u2_{k+1}-u1_{k+1})+ (u1_{k+1}-u1_k)
              + N zeta_k     (u1_k-u2_k)+         (u1_{k-1}-u1_k)
              + f(1, theta_k) - ((u1_k-u2_k)+)^2 / 2

and symmetrically for state 2 with the incoming rate taken at ``k-1``.  The
``zeta_k`` and ``(1-zeta_k)`` factors vanish at the two ends, so no ghost
values are ever read and no boundary condition is imposed.
"""

from __future__ import annotations

import warnings

import numpy as np

from .core import ModelSpec, SimplexPoint
from .grids import (
    BlowUpError,
    RunArtifact,
    ScalarGrid,
    SolverConfig,
    ValueGrid,
    zeta_grid,
)


def _rhs_expr(u1, u2, d, nz, nmz, f1, f2):
    """Backward right-hand sides, so that ``u(t - dt) = u(t) + dt * expr``.

    ``d = u1 - u2`` is passed in because the caller needs it anyway; ``nz``
    and ``nmz`` are the precomputed factors ``N*zeta`` and ``N*(1-zeta)``.
    """
    p12 = np.maximum(d, 0.0)
    p21 = np.maximum(-d, 0.0)
    r1 = f1 - 0.5 * p12 * p12
    r2 = f2 - 0.5 * p21 * p21
    # switching of the other players; end factors are zero so the slices
    # never need values outside the grid
    r1[:-1] += nmz[:-1] * p21[1:] * (u1[1:] - u1[:-1])
    r1[1:] += nz[1:] * p12[1:] * (u1[:-1] - u1[1:])
    r2[:-1] += nmz[:-1] * p21[:-1] * (u2[1:] - u2[:-1])
    r2[1:] += nz[1:] * p12[:-1] * (u2[:-1] - u2[1:])
    return r1, r2


def rhs_nplayer(grid: ValueGrid, model: ModelSpec):
    """Time derivatives ``(du1/dt, du2/dt)`` of the value arrays.

    The system is posed backward in time, ``-du/dt = rhs``; the returned
    derivatives are therefore the negated right-hand sides.
    """
    zeta = zeta_grid(grid.n)
    theta = SimplexPoint(zeta)
    f1 = np.broadcast_to(model.f(1, theta), zeta.shape).astype(float)
    f2 = np.broadcast_to(model.f(2, theta), zeta.shape).astype(float)
    d = grid.u1 - grid.u2
    r1, r2 = _rhs_expr(grid.u1, grid.u2, d, grid.n * zeta, grid.n * (1.0 - zeta), f1, f2)
    return -r1, -r2


def solve_nplayer(model: ModelSpec, cfg: SolverConfig) -> RunArtifact:
    """March the equilibrium system backward from ``psi`` and record snapshots.

    Raises :class:`BlowUpError` when any value exceeds ``cfg.blowup_bound``
    (the usual symptom of a time step too large for the advection rates).
    """
    n = cfg.n_grid
    zeta = zeta_grid(n)
    theta = SimplexPoint(zeta)
    u1 = np.broadcast_to(model.psi(1, theta), zeta.shape).astype(float).copy()
    u2 = np.broadcast_to(model.psi(2, theta), zeta.shape).astype(float).copy()
    f1 = np.broadcast_to(model.f(1, theta), zeta.shape).astype(float)
    f2 = np.broadcast_to(model.f(2, theta), zeta.shape).astype(float)
    nz = n * zeta
    nmz = n * (1.0 - zeta)

    n_steps = cfg.n_steps
    snap_steps = cfg.snapshot_steps()
    snap_at = {m: i for i, m in enumerate(snap_steps)}
    out1 = np.empty((len(snap_steps), n + 1))
    out2 = np.empty((len(snap_steps), n + 1))

    dt = cfg.dt
    cfl_max = 0.0
    cfl_warned = False
    # loop index j counts backward steps; the state sits at forward index
    # m = n_steps - j, i.e. at time cfg.step_time(m)
    for j in range(n_steps + 1):
        m = n_steps - j
        i = snap_at.get(m)
        if i is not None:
            out1[i] = u1
            out2[i] = u2
        if m == 0:
            break
        d = u1 - u2
        wmax = float(np.abs(d).max())
        cfl = dt * n * wmax
        if cfl > cfl_max:
            cfl_max = cfl
        if cfl > cfg.cfl_warn_threshold and not cfl_warned:
            warnings.warn(
                f"advection CFL number {cfl:.3f} exceeds "
                f"{cfg.cfl_warn_threshold} at t={cfg.step_time(m):.6g}",
                RuntimeWarning,
                stacklevel=2,
            )
            cfl_warned = True
        r1, r2 = _rhs_expr(u1, u2, d, nz, nmz, f1, f2)
        u1 = u1 + dt * r1
        u2 = u2 + dt * r2
        if max(np.abs(u1).max(), np.abs(u2).max()) > cfg.blowup_bound:
            raise BlowUpError(
                f"value magnitude exceeded {cfg.blowup_bound:g} at "
                f"t={cfg.step_time(m - 1):.6g}"
            )

    times = np.array([cfg.step_time(m) for m in snap_steps])
    return RunArtifact(
        solver="nplayer",
        model=model.name,
        n=n,
        zeta=zeta,
        times=times,
        fields={"u1": out1, "u2": out2},
        info={"dt": dt, "steps": n_steps, "cfl_max": cfl_max, "cfl_warned": cfl_warned},
    )


def extract_w(grid: ValueGrid) -> ScalarGrid:
    """Pointwise value difference ``w = u1 - u2``."""
    return ScalarGrid(grid.n, grid.u1 - grid.u2, grid.t)
