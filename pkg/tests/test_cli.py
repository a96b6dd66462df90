import numpy as np
import pytest

from twostate_mfg import RunArtifact, SimplexPoint, shock_model, zeta_grid
from twostate_mfg.cli import (
    ConfigError,
    ExperimentConfig,
    compare_runs,
    load_config,
    main,
    read_values_csv,
    run_experiment,
    write_values_csv,
)

TINY = """
[experiment]
model = shock
solver = nplayer

[solver]
n_grid = 20
dt = 1e-3
t_final = 0.5
snapshots = 0, 0.25, 0.5
"""


@pytest.fixture
def tiny_config(tmp_path):
    path = tmp_path / "exp.ini"
    path.write_text(TINY)
    return path


def test_load_config(tiny_config):
    cfg = load_config(tiny_config)
    assert cfg.model == "shock"
    assert cfg.n_grid == 20
    assert cfg.snapshots == (0.0, 0.25, 0.5)


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "absent.ini")
    bad = tmp_path / "bad.ini"
    bad.write_text("[solver]\nn_grid = many\n")
    with pytest.raises(ConfigError, match="integer"):
        load_config(bad)
    bad.write_text("[solver]\nwidth = 3\n")
    with pytest.raises(ConfigError, match="unknown key"):
        load_config(bad)
    bad.write_text("[extras]\nx = 1\n")
    with pytest.raises(ConfigError, match="unknown section"):
        load_config(bad)


def test_validate_rejects_bad_combinations():
    with pytest.raises(ConfigError):
        ExperimentConfig(model="unknown").validate()
    with pytest.raises(ConfigError):
        ExperimentConfig(solver="unknown").validate()
    with pytest.raises(ConfigError):
        ExperimentConfig(model="consumer", solver="hjb").validate()


def test_values_csv_round_trip(tmp_path):
    rng = np.random.default_rng(41)
    zeta = zeta_grid(13)
    columns = {
        "u1": rng.uniform(-1e3, 1e3, size=14),
        "u2": rng.standard_normal(14) * 1e-7,
    }
    path = tmp_path / "values.csv"
    write_values_csv(path, 0.1234567890123456789, zeta, columns)
    back = read_values_csv(path)
    np.testing.assert_array_equal(back["zeta"], zeta)
    np.testing.assert_array_equal(back["u1"], columns["u1"])
    np.testing.assert_array_equal(back["u2"], columns["u2"])


def test_run_experiment_writes_terminal_psi(tmp_path, tiny_config):
    cfg = load_config(tiny_config)
    cfg.out_dir = str(tmp_path / "out")
    paths = run_experiment(cfg)
    names = sorted(p.name for p in paths)
    assert names == [
        "nplayer_000.csv",
        "nplayer_001.csv",
        "nplayer_002.csv",
        "nplayer_diagnostics.csv",
    ]
    terminal = read_values_csv(tmp_path / "out" / "nplayer_002.csv")
    model = shock_model()
    theta = SimplexPoint(terminal["zeta"])
    np.testing.assert_array_equal(terminal["u1"], model.psi(1, theta))
    np.testing.assert_array_equal(terminal["u2"], model.psi(2, theta))
    assert terminal["t"][0] == 0.5


def test_compare_pipeline_outputs(tmp_path, tiny_config):
    cfg = load_config(tiny_config)
    cfg.solver = "compare"
    cfg.out_dir = str(tmp_path / "cmp")
    paths = run_experiment(cfg)
    names = {p.name for p in paths}
    assert "comparison.csv" in names
    assert "hjb_000.csv" in names and "nplayer_000.csv" in names
    data = read_values_csv(tmp_path / "cmp" / "comparison.csv")
    assert set(data) == {"t", "zeta", "w_nplayer", "dupsilon"}
    assert data["t"][0] == 0.0


def test_density_pipeline_outputs(tmp_path, tiny_config):
    cfg = load_config(tiny_config)
    cfg.solver = "density"
    cfg.p_grid = 25
    cfg.out_dir = str(tmp_path / "dens")
    paths = run_experiment(cfg)
    data = read_values_csv(tmp_path / "dens" / "density_000.csv")
    assert data["zeta"].size == 26
    assert data["value"][0] == 0.0 and data["value"][-1] == 0.0


def test_determinism_byte_identical(tmp_path, tiny_config):
    outs = []
    for name in ("a", "b"):
        code = main(["run", str(tiny_config), "--out-dir", str(tmp_path / name)])
        assert code == 0
        outs.append(sorted((tmp_path / name).glob("*.csv")))
    for left, right in zip(*outs):
        assert left.name == right.name
        assert left.read_bytes() == right.read_bytes()


def test_cli_overrides(tmp_path, tiny_config):
    out = tmp_path / "ovr"
    code = main(
        ["run", str(tiny_config), "--out-dir", str(out), "--n-grid", "10",
         "--snapshots", "0,0.5"]
    )
    assert code == 0
    data = read_values_csv(out / "nplayer_000.csv")
    assert data["zeta"].size == 11
    assert len(list(out.glob("nplayer_0*.csv"))) == 2


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_cli_exit_codes(tmp_path, tiny_config):
    assert main(["run", str(tmp_path / "none.ini")]) == 2
    assert main(["run", str(tiny_config), "--solver", "hjb", "--model", "consumer",
                 "--out-dir", str(tmp_path / "x")]) == 2
    # a time step far beyond the stability limit blows up -> numerical failure
    code = main(["run", str(tiny_config), "--dt", "0.25", "--t-final", "50",
                 "--snapshots", "0,50", "--out-dir", str(tmp_path / "y")])
    assert code == 3


def test_plot_outputs(tmp_path, tiny_config):
    cfg = load_config(tiny_config)
    cfg.out_dir = str(tmp_path / "plots")
    cfg.plot = True
    paths = run_experiment(cfg)
    pngs = [p for p in paths if p.suffix == ".png"]
    assert len(pngs) == 3  # one per snapshot, diagnostics not plotted
    for png in pngs:
        assert png.exists() and png.stat().st_size > 0


def _flat_run(value, solver="scalar", n=10, times=(0.0,)):
    rows = np.full((len(times), n + 1), float(value))
    return RunArtifact(
        solver=solver, model="t", n=n, zeta=zeta_grid(n),
        times=np.asarray(times, dtype=float),
        fields={"w": rows}, info={"dt": 0.1},
    )


def test_compare_runs_basic():
    a = _flat_run(1.0)
    assert compare_runs(a, a) == 0.0
    b = _flat_run(2.0)
    assert compare_runs(a, b, norm="linf") == 1.0
    assert compare_runs(a, b, norm="l1") == pytest.approx(1.1)  # 11 nodes / 10 cells


def test_compare_runs_interpolates_and_excludes():
    a = _flat_run(1.0, n=10)
    b = _flat_run(2.0, n=20)
    assert compare_runs(a, b, norm="linf") == 1.0
    # excluding every node of a constant-difference field leaves nothing
    assert compare_runs(a, b, norm="l1", exclude=range(11)) == 0.0


def test_compare_runs_time_mismatch():
    a = _flat_run(1.0, times=(0.0,))
    b = _flat_run(1.0, times=(5.0,))
    with pytest.raises(ValueError, match="no snapshot"):
        compare_runs(a, b)
    with pytest.raises(ValueError, match="norm"):
        compare_runs(a, a, norm="l7")
