"""Godunov solver for the reduced Hamilton-Jacobi equation of potential games.

For a potential game the value system is the gradient of a Hamilton-Jacobi
equation; on the simplex line it reduces to a scalar unknown ``Upsilon(zeta, t)``
with Hamiltonian

    H(p, zeta) = -zeta (p+)^2 / 2 - (1-zeta) ((-p)+)^2 / 2 + F(zeta, 1-zeta),

concave and piecewise quadratic in ``p`` with its vertex at ``p = 0``.  The
scheme marches backward with the monotone Godunov flux (interval extremisation
of ``H``) and realises the state-constraint boundaries by capped Dirichlet
updates whose missing one-sided slope is replaced by the vertex.

The update in time is forward Euler in reverse time; with the time steps used
here the temporal error is negligible against the O(dz) spatial one, and the
integrator is isolated in :func:`solve_hjb` should a higher-order one ever be
wanted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ModelSpec
from .grids import BlowUpError, RunArtifact, ScalarGrid, SolverConfig, zeta_grid


@dataclass
class HjConfig(SolverConfig):
    """Solver configuration plus the Dirichlet cap ``c_d``.

    ``c_d = None`` selects ``10 * (1 + max Psi0)`` on the grid; the cap must
    dominate every boundary value reachable over the horizon.
    """

    c_d: float | None = None

    def resolve_cap(self, psi0_max: float) -> float:
        cap = 10.0 * (1.0 + psi0_max) if self.c_d is None else float(self.c_d)
        if cap <= psi0_max:
            raise ValueError(
                f"Dirichlet cap {cap:g} must exceed the largest terminal "
                f"potential value {psi0_max:g}"
            )
        return cap


def _require_potential(model: ModelSpec):
    if model.potential is None:
        raise ValueError(f"model '{model.name}' has no potential pair")
    return model.potential


def _h_tilde(p, zeta, f_pot):
    pp = np.maximum(p, 0.0)
    pm = np.maximum(-p, 0.0)
    return -0.5 * zeta * pp * pp - 0.5 * (1.0 - zeta) * pm * pm + f_pot


def _hat_h(alpha, beta, zeta, f_pot):
    """Godunov numerical Hamiltonian: min of H over [alpha, beta] when
    alpha <= beta, max over [beta, alpha] otherwise.

    H is concave in p, so the minimum sits at an interval endpoint and the
    maximum at the vertex p = 0 projected onto the interval.
    """
    lo = np.minimum(alpha, beta)
    hi = np.maximum(alpha, beta)
    h_lo = _h_tilde(lo, zeta, f_pot)
    h_hi = _h_tilde(hi, zeta, f_pot)
    minimum = np.minimum(h_lo, h_hi)
    maximum = _h_tilde(np.clip(0.0, lo, hi), zeta, f_pot)
    return np.where(alpha <= beta, minimum, maximum)


def reduced_hamiltonian(p: float, zeta: float, model: ModelSpec):
    """``H(p, zeta)`` of the model's potential; requires a potential pair."""
    potential = _require_potential(model)
    return _h_tilde(p, zeta, potential.F(zeta, 1.0 - zeta))


def godunov_flux(alpha: float, beta: float, zeta: float, model: ModelSpec):
    """Exact interval extremisation of the reduced Hamiltonian.

    Candidates are the interval endpoints and the parabola vertex ``p = 0``;
    no sampling resolution is involved.
    """
    potential = _require_potential(model)
    return _hat_h(alpha, beta, zeta, potential.F(zeta, 1.0 - zeta))


def solve_hjb(model: ModelSpec, cfg: HjConfig) -> RunArtifact:
    """March ``Upsilon`` backward from the terminal potential ``Psi0``."""
    potential = _require_potential(model)
    n = cfg.n_grid
    zeta = zeta_grid(n)
    dz = 1.0 / n
    ups = np.asarray(potential.Psi0(zeta, 1.0 - zeta), dtype=float).copy()
    f_pot = np.asarray(potential.F(zeta, 1.0 - zeta), dtype=float)
    cap = cfg.resolve_cap(float(ups.max()))

    n_steps = cfg.n_steps
    snap_steps = cfg.snapshot_steps()
    snap_at = {m: i for i, m in enumerate(snap_steps)}
    out = np.empty((len(snap_steps), n + 1))

    dt = cfg.dt
    inv_dz = 1.0 / dz
    zeta_int = zeta[1:-1]
    f_int = f_pot[1:-1]
    for j in range(n_steps + 1):
        m = n_steps - j
        i = snap_at.get(m)
        if i is not None:
            out[i] = ups
        if m == 0:
            break
        slopes = (ups[1:] - ups[:-1]) * inv_dz  # one-sided differences at the faces
        # backward march of -Upsilon_t = H: in reverse time the equation is
        # Upsilon_s + (-H)(Upsilon_z) = 0, whose Godunov flux is the interval
        # extremisation of H with the slope arguments swapped and added
        nxt = np.empty_like(ups)
        nxt[1:-1] = ups[1:-1] + dt * _hat_h(slopes[1:], slopes[:-1], zeta_int, f_int)
        nxt[0] = min(ups[0] + dt * float(_hat_h(slopes[0], 0.0, 0.0, f_pot[0])), cap)
        nxt[-1] = min(ups[-1] + dt * float(_hat_h(0.0, slopes[-1], 1.0, f_pot[-1])), cap)
        ups = nxt
        if np.abs(ups).max() > cfg.blowup_bound:
            raise BlowUpError(
                f"potential magnitude exceeded {cfg.blowup_bound:g} at "
                f"t={cfg.step_time(m - 1):.6g}"
            )

    times = np.array([cfg.step_time(m) for m in snap_steps])
    return RunArtifact(
        solver="hjb",
        model=model.name,
        n=n,
        zeta=zeta,
        times=times,
        fields={"upsilon": out},
        info={"dt": dt, "steps": n_steps, "c_d": cap},
    )


def derivative_of_upsilon(grid: ScalarGrid) -> ScalarGrid:
    """Spatial derivative of a scalar field: centred differences in the
    interior, one-sided at the two endpoints."""
    v = grid.values
    if v.size < 3:
        raise ValueError("need at least 3 nodes for the derivative stencil")
    dz = 1.0 / grid.n
    out = np.empty_like(v)
    out[1:-1] = (v[2:] - v[:-2]) / (2.0 * dz)
    out[0] = (v[1] - v[0]) / dz
    out[-1] = (v[-1] - v[-2]) / dz
    return ScalarGrid(grid.n, out, grid.t)
