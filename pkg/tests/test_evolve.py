import numpy as np
import pytest

from ym2d.algebra import su
from ym2d.evolve import (
    EvolveConfig,
    analytic_potential,
    array_from_state,
    evolve_and_monitor,
    from_half_wave,
    picard_iterate,
    records_to_csv,
    state_from_array,
    step_half_wave,
    step_second_order,
    temporal_order,
    to_half_wave,
)
from ym2d.spectral import TorusGrid
from ym2d.ym import project_gauss_data, state_from_potential

SPEC = su(2)


def _state(seed=0, N=32, scale=1e-2, project=False):
    grid = TorusGrid(N)
    a, a_dot = analytic_potential(SPEC, grid, seed, scale)
    if project:
        return project_gauss_data(a, a_dot, tol=1e-10)
    return state_from_potential(a, a_dot)


def test_config_validation():
    with pytest.raises(ValueError):
        EvolveConfig(dt=0.0, t_end=1.0)
    with pytest.raises(ValueError):
        EvolveConfig(dt=1e-3, t_end=1.0, stepper="Euler")


def test_array_state_roundtrip():
    st = _state()
    y = array_from_state(st)
    assert y.shape == (6, 2, SPEC.dim, 32, 32)
    st2 = state_from_array(SPEC, TorusGrid(32), y)
    assert np.array_equal(array_from_state(st2), y)


def test_half_wave_roundtrip():
    st = _state(seed=1)
    hw = to_half_wave(st)
    st2 = from_half_wave(SPEC, TorusGrid(32), hw)
    d = np.max(np.abs(array_from_state(st2) - array_from_state(st)))
    assert d < 1e-12


def test_zero_data_stays_zero():
    st = _state(scale=0.0)
    cfg = EvolveConfig(dt=1e-2, t_end=0.05, monitor_every=1)
    records = evolve_and_monitor(st, cfg)
    for rec in records:
        assert rec.energy == 0.0
        assert rec.lorenz == 0.0 and rec.gauss == 0.0 and rec.compat == 0.0
        assert rec.twin_diff == 0.0


def test_constraints_propagate_on_projected_data():
    st = _state(seed=2, project=True)
    cfg = EvolveConfig(dt=2e-3, t_end=0.05, monitor_every=5)
    records = evolve_and_monitor(st, cfg)
    e0 = records[0].energy
    for rec in records:
        assert rec.lorenz < 1e-7
        assert rec.gauss < 1e-7
        assert rec.compat < 1e-7
        assert abs(rec.energy - e0) < 1e-8 * e0
        assert rec.twin_diff < 1e-9


def test_half_wave_matches_second_order():
    st = _state(seed=3, project=True)
    grid = TorusGrid(32)
    dt, steps = 1e-3, 40
    hw = to_half_wave(st)
    ref = st
    for _ in range(steps):
        hw = step_half_wave(SPEC, grid, hw, dt, "ExpRK2")
        ref = step_second_order(ref, dt)
    d = np.max(
        np.abs(array_from_state(from_half_wave(SPEC, grid, hw)) - array_from_state(ref))
    )
    assert d < 1e-7


def test_exp_euler_less_accurate_than_exp_rk2():
    st = _state(seed=3, project=True)
    grid = TorusGrid(32)
    dt, steps = 2e-3, 20
    ref = st
    for _ in range(steps):
        ref = step_second_order(ref, dt)
    yref = array_from_state(ref)
    errs = {}
    for stepper in ("ExpEuler", "ExpRK2"):
        hw = to_half_wave(st)
        for _ in range(steps):
            hw = step_half_wave(SPEC, grid, hw, dt, stepper)
        errs[stepper] = np.max(
            np.abs(array_from_state(from_half_wave(SPEC, grid, hw)) - yref)
        )
    assert errs["ExpRK2"] < errs["ExpEuler"]


def test_temporal_order_is_fourth():
    grid = TorusGrid(16)
    a, a_dot = analytic_potential(SPEC, grid, 5, 1e-2)
    st = state_from_potential(a, a_dot)
    order = temporal_order(SPEC, grid, st, 4e-3, 0.04)
    assert order >= 3.5


def test_rk4_nan_guard():
    st = _state(seed=6, scale=10.0, N=16)
    with pytest.raises(FloatingPointError):
        s = st
        for _ in range(200):
            s = step_second_order(s, 0.5)


def test_picard_contracts():
    st = _state(seed=7, project=True)
    diffs, ratios = picard_iterate(st, 3, 0.1, 5e-3)
    assert len(diffs) == 3 and len(ratios) == 2
    assert all(r <= 0.5 for r in ratios)
    assert diffs[0] > diffs[1] > diffs[2]


def test_records_to_csv_schema(tmp_path):
    st = _state(scale=0.0, N=16)
    cfg = EvolveConfig(dt=1e-2, t_end=0.02, monitor_every=1)
    records = evolve_and_monitor(st, cfg)
    out = tmp_path / "diag.csv"
    records_to_csv(records, out)
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "t,energy,lorenz,gauss,compat,twinDiff"
    assert len(lines) == 1 + len(records)
    assert all(len(row.split(",")) == 6 for row in lines[1:])
