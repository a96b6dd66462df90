"""Grid containers, solver configuration and run bookkeeping.

Every solver works on the nodes ``zeta_k = k / N`` of the unit interval and
returns a :class:`RunArtifact`: the snapshots it was asked to record plus a
small info dict (CFL statistics, boundary outflow, ...).  Snapshot times are
the times of the nearest time step, never interpolated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class BlowUpError(RuntimeError):
    """A solution value exceeded the configured magnitude bound."""


class SchemeError(RuntimeError):
    """A scheme guarantee (positivity, ...) was violated at run time."""


def zeta_grid(n: int) -> np.ndarray:
    """Nodes ``k / n`` for ``k = 0..n``."""
    if n < 1:
        raise ValueError(f"grid size must be >= 1, got {n}")
    return np.arange(n + 1) / n


def trapezoid_mass(values: np.ndarray, dz: float) -> float:
    """Trapezoidal integral of nodal values over [0, 1]."""
    v = np.asarray(values, dtype=float)
    return float(dz * (0.5 * v[0] + v[1:-1].sum() + 0.5 * v[-1]))


@dataclass
class ValueGrid:
    """Values of both states on the simplex grid at one time instant."""

    n: int
    u1: np.ndarray
    u2: np.ndarray
    t: float

    def __post_init__(self):
        self.u1 = np.asarray(self.u1, dtype=float)
        self.u2 = np.asarray(self.u2, dtype=float)
        for name, arr in (("u1", self.u1), ("u2", self.u2)):
            if arr.shape != (self.n + 1,):
                raise ValueError(f"{name} must have length n+1={self.n + 1}")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite entries")

    @property
    def zeta(self) -> np.ndarray:
        return zeta_grid(self.n)


@dataclass
class ScalarGrid:
    """A single real field over the simplex grid at one time instant."""

    n: int
    values: np.ndarray
    t: float

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.n + 1,):
            raise ValueError(f"values must have length n+1={self.n + 1}")

    @property
    def zeta(self) -> np.ndarray:
        return zeta_grid(self.n)


@dataclass
class SolverConfig:
    """Grid size, time step, horizon and snapshot schedule of a run.

    ``dt`` must divide ``t_final`` up to rounding.  ``blowup_bound`` is the
    magnitude at which a run is aborted with :class:`BlowUpError`;
    ``cfl_warn_threshold`` triggers a warning when ``dt * N * max|w|``
    exceeds it.
    """

    n_grid: int = 100
    dt: float = 1e-4
    t_final: float = 10.0
    snapshot_times: tuple = ()
    blowup_bound: float = 1e6
    cfl_warn_threshold: float = 0.5

    def __post_init__(self):
        if self.n_grid < 1:
            raise ValueError("n_grid must be a positive integer")
        if self.dt <= 0.0 or self.t_final <= 0.0:
            raise ValueError("dt and t_final must be positive")
        steps = self.n_steps
        if steps < 1 or abs(steps * self.dt - self.t_final) > 1e-8 * max(self.t_final, 1.0):
            raise ValueError("dt must divide t_final up to rounding")
        if not self.snapshot_times:
            self.snapshot_times = (0.0, self.t_final)
        self.snapshot_times = tuple(float(s) for s in self.snapshot_times)
        if list(self.snapshot_times) != sorted(self.snapshot_times):
            raise ValueError("snapshot_times must be sorted")
        if self.snapshot_times[0] < 0.0 or self.snapshot_times[-1] > self.t_final:
            raise ValueError("snapshot_times must lie in [0, t_final]")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt))

    def step_time(self, m: int) -> float:
        """Time of step index ``m`` counted forward from 0; the last index is
        pinned to ``t_final`` so the terminal data carry an exact stamp."""
        return self.t_final if m == self.n_steps else m * self.dt

    def snapshot_steps(self) -> list:
        """Forward step indices nearest the requested snapshot times, deduplicated."""
        steps = []
        for s in self.snapshot_times:
            m = min(max(int(round(s / self.dt)), 0), self.n_steps)
            if m not in steps:
                steps.append(m)
        return sorted(steps)


@dataclass
class RunArtifact:
    """Time-indexed snapshots of one solver run plus diagnostics metadata.

    ``fields`` maps a column name ("u1", "u2", "w", "upsilon", "p") to an
    array of shape ``(len(times), n + 1)``; ``times`` is ascending.  Scalar
    runs optionally keep the per-step history needed to drive the density
    transport solver.
    """

    solver: str
    model: str
    n: int
    zeta: np.ndarray
    times: np.ndarray
    fields: dict
    info: dict = field(default_factory=dict)
    step_times: np.ndarray | None = None
    step_values: np.ndarray | None = None

    def snapshot_index(self, t: float) -> int:
        """Index of the snapshot recorded at time ``t``; the stamp must match
        to within half a time step."""
        idx = int(np.argmin(np.abs(self.times - t)))
        tol = 0.5 * float(self.info.get("dt", 0.0)) + 1e-12
        if abs(float(self.times[idx]) - t) > tol:
            raise ValueError(
                f"no snapshot at t={t} in run '{self.solver}' (times {self.times})"
            )
        return idx

    def scalar_snapshot(self, idx: int) -> ScalarGrid:
        """Canonical scalar view of snapshot ``idx``: the value difference
        u1 - u2 for value runs, the stored field otherwise."""
        if self.solver == "nplayer":
            values = self.fields["u1"][idx] - self.fields["u2"][idx]
        else:
            (name,) = self.fields.keys()
            values = self.fields[name][idx]
        return ScalarGrid(self.n, values.copy(), float(self.times[idx]))

    def value_snapshot(self, idx: int) -> ValueGrid:
        if self.solver != "nplayer":
            raise ValueError(f"run '{self.solver}' has no value pair snapshots")
        return ValueGrid(
            self.n,
            self.fields["u1"][idx].copy(),
            self.fields["u2"][idx].copy(),
            float(self.times[idx]),
        )
