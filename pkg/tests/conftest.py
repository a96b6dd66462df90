"""Shared fixtures: the reference runs at paper scale are expensive (about
two to six seconds each), so they are computed once per session and reused
by the acceptance suite and the slower invariant tests."""

import time

import pytest

from twostate_mfg import (
    CesParams,
    HjConfig,
    IsoParams,
    SolverConfig,
    consumer_model,
    paradigm_model,
    shock_model,
    solve_density,
    solve_hjb,
    solve_nplayer,
    solve_scalar,
)

FULL = dict(dt=1e-4, t_final=10.0)


@pytest.fixture(scope="session")
def ex1_nplayer():
    cfg = SolverConfig(
        n_grid=100, snapshot_times=(0.0, 1.0, 2.5, 5.0, 7.5, 9.0, 10.0), **FULL
    )
    start = time.perf_counter()
    run = solve_nplayer(shock_model(), cfg)
    run.info["wall_seconds"] = time.perf_counter() - start
    return run


@pytest.fixture(scope="session")
def ex1_hjb():
    cfg = HjConfig(n_grid=100, snapshot_times=(0.0, 5.0, 10.0), **FULL)
    return solve_hjb(shock_model(), cfg)


@pytest.fixture(scope="session")
def ex1_scalar():
    cfg = SolverConfig(
        n_grid=100, snapshot_times=(0.0, 1.0, 2.5, 5.0, 9.0, 10.0), **FULL
    )
    return solve_scalar(shock_model(), cfg, keep_history=True)


@pytest.fixture(scope="session")
def ex1_density(ex1_scalar):
    cfg = SolverConfig(n_grid=125, snapshot_times=(0.0, 1.0, 2.5, 5.0, 10.0), **FULL)
    return solve_density(ex1_scalar, cfg)


@pytest.fixture(scope="session")
def ex2_nplayer():
    cfg = SolverConfig(n_grid=100, snapshot_times=(0.0, 10.0), **FULL)
    return solve_nplayer(paradigm_model(CesParams(0.5, 0.9, 0.75)), cfg)


@pytest.fixture(scope="session")
def ex3_nplayer():
    # N = 200 (the upper desk-scale grid) resolves the plateau past the jump;
    # the clamp floor follows the grid as 1 / (10 N)
    n = 200
    cfg = SolverConfig(n_grid=n, snapshot_times=(0.0, 10.0), **FULL)
    model = consumer_model(IsoParams(1.0, 0.1, 0.075), clamp_eps=1.0 / (10 * n))
    return solve_nplayer(model, cfg)
