"""Config-driven experiment runner.

An experiment is described by an INI-style file with ``[experiment]``,
``[model]`` and ``[solver]`` sections; every key has a matching command-line
flag that overrides the file.  Each run writes one CSV per snapshot (columns
``t, zeta, u1, u2`` for value runs, ``t, zeta, value`` otherwise), one
diagnostics CSV (``t, mass, max_slope, shock_zeta_min, shock_zeta_max,
sign_ok_left, sign_ok_right``) and, with ``--plot``, one PNG per snapshot.
Reals are rendered with 17 significant digits so files re-parse exactly and
are byte-stable across runs.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import models
from .core import ModelSpec
from .grids import BlowUpError, RunArtifact, SchemeError, SolverConfig
from .hjb import HjConfig, derivative_of_upsilon, solve_hjb
from .nplayer import solve_nplayer
from .shock import snapshot_diagnostics, solve_density, solve_scalar

SOLVERS = ("nplayer", "hjb", "scalar", "density", "compare")
MODELS = ("shock", "paradigm", "consumer")


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass
class ExperimentConfig:
    """Everything one run needs: model, solver, discretisation, outputs."""

    model: str = "shock"
    solver: str = "nplayer"
    out_dir: str = "out"
    plot: bool = False
    # model parameters (used by the model the run selects)
    a1: float = 0.5
    a2: float = 0.9
    r: float = 0.75
    eta: float = 1.0
    s1: float = 0.1
    s2: float = 0.075
    clamp_eps: float | None = None  # None: 1 / (10 * n_grid)
    # solver parameters
    n_grid: int = 100
    dt: float = 1e-4
    t_final: float = 10.0
    snapshots: tuple = field(default=())
    c_d: float | None = None
    p_grid: int = 125
    threshold_factor: float = 5.0

    def validate(self) -> None:
        if self.model not in MODELS:
            raise ConfigError(f"unknown model '{self.model}' (choose from {MODELS})")
        if self.solver not in SOLVERS:
            raise ConfigError(f"unknown solver '{self.solver}' (choose from {SOLVERS})")
        if self.solver in ("hjb", "compare") and self.model != "shock":
            raise ConfigError(
                f"solver '{self.solver}' needs a model with a potential; "
                f"'{self.model}' has none"
            )

    def build_model(self) -> ModelSpec:
        if self.model == "shock":
            return models.shock_model()
        if self.model == "paradigm":
            return models.paradigm_model(models.CesParams(self.a1, self.a2, self.r))
        eps = self.clamp_eps
        if eps is None:
            eps = 1.0 / (10.0 * self.n_grid)
        return models.consumer_model(models.IsoParams(self.eta, self.s1, self.s2), eps)

    def solver_config(self, n: int | None = None) -> SolverConfig:
        return SolverConfig(
            n_grid=self.n_grid if n is None else n,
            dt=self.dt,
            t_final=self.t_final,
            snapshot_times=self.snapshots or _default_snapshots(self.t_final),
        )

    def hjb_config(self) -> HjConfig:
        return HjConfig(
            n_grid=self.n_grid,
            dt=self.dt,
            t_final=self.t_final,
            snapshot_times=self.snapshots or _default_snapshots(self.t_final),
            c_d=self.c_d,
        )


def _default_snapshots(t_final: float) -> tuple:
    return tuple(t_final * k / 4.0 for k in range(5))


_SECTION_KEYS = {
    "experiment": ("model", "solver", "out_dir", "plot"),
    "model": ("a1", "a2", "r", "eta", "s1", "s2", "clamp_eps"),
    "solver": (
        "n_grid",
        "dt",
        "t_final",
        "snapshots",
        "c_d",
        "p_grid",
        "threshold_factor",
    ),
}


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key in ("model", "solver", "out_dir"):
        return raw
    if key == "plot":
        if raw.lower() in ("true", "1", "yes", "on"):
            return True
        if raw.lower() in ("false", "0", "no", "off"):
            return False
        raise ConfigError(f"plot must be a boolean, got '{raw}'")
    if key == "snapshots":
        try:
            return tuple(float(s) for s in raw.split(",") if s.strip())
        except ValueError as exc:
            raise ConfigError(f"bad snapshot list '{raw}'") from exc
    if key in ("n_grid", "p_grid"):
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigError(f"{key} must be an integer, got '{raw}'") from exc
    if key in ("c_d", "clamp_eps") and raw.lower() in ("auto", "none", ""):
        return None
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{key} must be a number, got '{raw}'") from exc


def load_config(path) -> ExperimentConfig:
    """Parse an experiment file; unknown sections or keys are errors."""
    parser = configparser.ConfigParser()
    try:
        read = parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse '{path}': {exc}") from exc
    if not read:
        raise ConfigError(f"config file '{path}' not found")
    cfg = ExperimentConfig()
    for section in parser.sections():
        if section not in _SECTION_KEYS:
            raise ConfigError(f"unknown section [{section}] in '{path}'")
        for key, raw in parser.items(section):
            if key not in _SECTION_KEYS[section]:
                raise ConfigError(f"unknown key '{key}' in section [{section}]")
            setattr(cfg, key, _parse_value(key, raw))
    return cfg


def _fmt(x) -> str:
    """17 significant digits: round-trips every double exactly."""
    return format(float(x), ".17g")


def write_values_csv(path: Path, t: float, zeta: np.ndarray, columns: dict) -> None:
    names = list(columns)
    with open(path, "w", newline="") as fh:
        fh.write("t,zeta," + ",".join(names) + "\n")
        for k in range(zeta.size):
            row = [_fmt(t), _fmt(zeta[k])] + [_fmt(columns[c][k]) for c in names]
            fh.write(",".join(row) + "\n")


def read_values_csv(path) -> dict:
    """Inverse of :func:`write_values_csv`: column name to float array."""
    with open(path, newline="") as fh:
        header = fh.readline().strip().split(",")
        data = [[] for _ in header]
        for line in fh:
            for slot, cell in zip(data, line.strip().split(",")):
                slot.append(float(cell))
    return {name: np.array(col) for name, col in zip(header, data)}


def write_diagnostics_csv(path: Path, rows: list) -> None:
    keys = (
        "t",
        "mass",
        "max_slope",
        "shock_zeta_min",
        "shock_zeta_max",
        "sign_ok_left",
        "sign_ok_right",
    )
    with open(path, "w", newline="") as fh:
        fh.write(",".join(keys) + "\n")
        for row in rows:
            cells = []
            for key in keys:
                value = row[key]
                cells.append(
                    ("true" if value else "false")
                    if isinstance(value, bool)
                    else _fmt(value)
                )
            fh.write(",".join(cells) + "\n")


def _write_run(run: RunArtifact, out_dir: Path, prefix: str, threshold: float) -> list:
    paths = []
    for idx in range(len(run.times)):
        path = out_dir / f"{prefix}_{idx:03d}.csv"
        if run.solver == "nplayer":
            columns = {
                "u1": run.fields["u1"][idx],
                "u2": run.fields["u2"][idx],
            }
        else:
            (name,) = run.fields.keys()
            columns = {"value": run.fields[name][idx]}
        write_values_csv(path, float(run.times[idx]), run.zeta, columns)
        paths.append(path)
    diag_path = out_dir / f"{prefix}_diagnostics.csv"
    write_diagnostics_csv(diag_path, snapshot_diagnostics(run, threshold))
    paths.append(diag_path)
    return paths


def compare_runs(
    a: RunArtifact,
    b: RunArtifact,
    norm: str = "l1",
    exclude=(),
    t: float | None = None,
) -> float:
    """Discrete norm of the difference of two runs' comparison fields.

    The comparison field is ``u1 - u2`` for value runs, the spatial
    derivative for potential runs and the stored field otherwise; ``b`` is
    linearly interpolated onto ``a``'s grid when the grids differ.
    ``exclude`` lists node indices (on ``a``'s grid) left out of the norm;
    ``t`` defaults to the first snapshot time of ``a``.
    """
    if norm not in ("l1", "linf"):
        raise ValueError(f"norm must be 'l1' or 'linf', got {norm!r}")
    if t is None:
        t = float(a.times[0])
    va = _comparison_values(a, a.snapshot_index(t))
    vb = _comparison_values(b, b.snapshot_index(t))
    if b.n != a.n:
        vb = np.interp(a.zeta, b.zeta, vb)
    keep = np.ones(a.n + 1, dtype=bool)
    for k in exclude:
        if 0 <= k <= a.n:
            keep[k] = False
    diff = np.abs(va - vb)[keep]
    if norm == "linf":
        return float(diff.max())
    return float(diff.sum() / a.n)


def _comparison_values(run: RunArtifact, idx: int) -> np.ndarray:
    if run.solver == "hjb":
        return derivative_of_upsilon(run.scalar_snapshot(idx)).values
    return run.scalar_snapshot(idx).values


def run_experiment(cfg: ExperimentConfig) -> list:
    """Execute the configured pipeline and return the written file paths."""
    cfg.validate()
    model = cfg.build_model()
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    threshold = cfg.threshold_factor

    paths = []
    if cfg.solver == "nplayer":
        run = solve_nplayer(model, cfg.solver_config())
        paths += _write_run(run, out_dir, "nplayer", threshold)
    elif cfg.solver == "hjb":
        run = solve_hjb(model, cfg.hjb_config())
        paths += _write_run(run, out_dir, "hjb", threshold)
    elif cfg.solver == "scalar":
        run = solve_scalar(model, cfg.solver_config(), keep_history=False)
        paths += _write_run(run, out_dir, "scalar", threshold)
    elif cfg.solver == "density":
        w_run = solve_scalar(model, cfg.solver_config(), keep_history=True)
        run = solve_density(w_run, cfg.solver_config(n=cfg.p_grid))
        paths += _write_run(run, out_dir, "density", threshold)
    else:  # compare
        np_run = solve_nplayer(model, cfg.solver_config())
        hj_run = solve_hjb(model, cfg.hjb_config())
        paths += _write_run(np_run, out_dir, "nplayer", threshold)
        paths += _write_run(hj_run, out_dir, "hjb", threshold)
        paths.append(_write_comparison(np_run, hj_run, out_dir))
    if cfg.plot:
        plottable = [
            p
            for p in paths
            if p.suffix == ".csv" and not p.name.endswith("_diagnostics.csv")
        ]
        paths += [_plot_csv(p) for p in plottable]
    return paths


def _write_comparison(np_run: RunArtifact, hj_run: RunArtifact, out_dir: Path) -> Path:
    t = float(np_run.times[0])
    w = _comparison_values(np_run, np_run.snapshot_index(t))
    du = _comparison_values(hj_run, hj_run.snapshot_index(t))
    if hj_run.n != np_run.n:
        du = np.interp(np_run.zeta, hj_run.zeta, du)
    path = out_dir / "comparison.csv"
    write_values_csv(path, t, np_run.zeta, {"w_nplayer": w, "dupsilon": du})
    return path


def _plot_csv(path: Path) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    data = read_values_csv(path)
    out = path.with_suffix(".png")
    fig, ax = plt.subplots(figsize=(6, 4))
    x_name = "zeta" if "zeta" in data else "t"
    for name, values in data.items():
        if name in ("t", "zeta"):
            continue
        ax.plot(data[x_name], values, label=name)
    ax.set_xlabel(x_name)
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(out, dpi=110)
    plt.close(fig)
    return out


def _add_override_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", choices=MODELS)
    parser.add_argument("--solver", choices=SOLVERS)
    parser.add_argument("--out-dir", dest="out_dir")
    parser.add_argument("--plot", action="store_true", default=None)
    parser.add_argument("--n-grid", dest="n_grid", type=int)
    parser.add_argument("--dt", type=float)
    parser.add_argument("--t-final", dest="t_final", type=float)
    parser.add_argument("--snapshots", help="comma-separated times")
    parser.add_argument("--c-d", dest="c_d", type=float)
    parser.add_argument("--p-grid", dest="p_grid", type=int)
    parser.add_argument("--threshold-factor", dest="threshold_factor", type=float)
    for name in ("a1", "a2", "r", "eta", "s1", "s2", "clamp_eps"):
        parser.add_argument(f"--{name.replace('_', '-')}", dest=name, type=float)


def _apply_overrides(cfg: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    updates = {}
    for f in fields(ExperimentConfig):
        value = getattr(args, f.name, None)
        if value is None:
            continue
        if f.name == "snapshots":
            value = tuple(float(s) for s in value.split(",") if s.strip())
        updates[f.name] = value
    return replace(cfg, **updates)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="twostate-mfg",
        description="Two-state mean field game solvers and shock diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_parser = sub.add_parser("run", help="run one experiment from a config file")
    run_parser.add_argument("config", help="path to the experiment file")
    _add_override_flags(run_parser)
    args = parser.parse_args(argv)

    try:
        cfg = _apply_overrides(load_config(args.config), args)
        paths = run_experiment(cfg)
    except (ConfigError, ValueError) as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 2
    except (BlowUpError, SchemeError) as exc:
        print(f"error: numerical: {exc}", file=sys.stderr)
        return 3
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
