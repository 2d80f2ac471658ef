# Copyright (c) 2025 takotime808

import numpy as np
import pytest

from isingbench.errors import DimensionMismatchError, InvalidArgumentError
from isingbench.kernels.energy import delta_energy, ising_energy
from isingbench.problems.instance import gen_complete_pm1
from isingbench.problems.oracle import ground_state
from isingbench.problems.state import SpinState
from isingbench.solvers.base import TraceConfig
from isingbench.solvers.hopfield import HNConfig, HopfieldSolver, hn_solve
from isingbench.utils.utils import make_rng
from tests.builders import random_int_instance, random_pm1_instance, random_spins


def test_triangle_from_all_up(triangle):
    x0 = SpinState.from_spins(triangle, [1, 1, 1])
    out = hn_solve(triangle, x0)
    # spin 0 flips first (h_0 = -2), then nothing improves
    assert out.final_state.spins.tolist() == [-1, 1, 1]
    assert out.final_energy.value == -1
    assert out.converged is True
    assert out.sweeps == 2
    # x0 untouched
    assert x0.spins.tolist() == [1, 1, 1]


def test_zero_field_keeps_spin(square):
    # every local field is zero here
    x0 = SpinState.from_spins(square, [1, 1, -1, -1])
    assert not x0.fields.any()
    out = hn_solve(square, x0)
    assert out.final_state.spins.tolist() == [1, 1, -1, -1]
    assert out.final_energy.value == 0
    assert out.sweeps == 1 and out.converged


def test_terminated_runs_are_local_optima():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        n = int(rng.integers(2, 65))
        inst = random_pm1_instance(rng, n, density=float(rng.uniform(0.3, 1.0)))
        x0 = SpinState.from_spins(inst, random_spins(rng, n))
        out = hn_solve(inst, x0)
        assert out.converged
        x = out.final_state
        assert all(delta_energy(inst, x, i) >= 0 for i in range(n))
        assert out.final_energy == ising_energy(inst, x)


def test_some_small_case_is_worse_than_optimum():
    worse = False
    for seed in range(40):
        inst = gen_complete_pm1(12, seed=seed)
        best, _ = ground_state(inst)
        out = HopfieldSolver().run(inst, seed=seed)
        assert out.final_energy.value >= best
        if out.final_energy.value > best:
            worse = True
            break
    assert worse


def test_traces_are_monotone_non_increasing(rng):
    for _ in range(30):
        inst = random_int_instance(rng, 30)
        out = hn_solve(inst, SpinState.from_spins(inst, random_spins(rng, 30)))
        energies = out.trace.energies
        assert all(b <= a for a, b in zip(energies, energies[1:]))
        assert energies[-1] == out.final_energy.value


def test_max_sweeps_bound():
    inst = gen_complete_pm1(60, seed=1)
    x0 = SpinState.random(inst, make_rng(0))
    out = hn_solve(inst, x0, max_sweeps=1)
    assert out.sweeps == 1
    assert len(out.trace) == 2


def test_random_order_terminates_at_local_optimum():
    inst = gen_complete_pm1(40, seed=4)
    rng = make_rng(8)
    out = hn_solve(inst, SpinState.random(inst, rng), order="random", rng=rng)
    assert out.converged
    assert all(delta_energy(inst, out.final_state, i) >= 0 for i in range(40))


def test_random_order_needs_generator(triangle):
    with pytest.raises(InvalidArgumentError):
        hn_solve(triangle, SpinState.from_spins(triangle, [1, 1, 1]), order="random")


def test_dimension_mismatch(triangle, square):
    with pytest.raises(DimensionMismatchError):
        hn_solve(triangle, SpinState.from_spins(square, [1, 1, 1, 1]))


@pytest.mark.parametrize("cfg", [HNConfig(max_sweeps=0), HNConfig(order="shuffled")])
def test_config_validation(cfg):
    with pytest.raises(InvalidArgumentError):
        cfg.validate()


def test_solver_is_deterministic_per_seed(k12):
    a = HopfieldSolver().run(k12, seed=3, trace_cfg=TraceConfig(clock="model"))
    b = HopfieldSolver().run(k12, seed=3, trace_cfg=TraceConfig(clock="model"))
    assert a.final_state == b.final_state
    assert a.trace.samples == b.trace.samples


def test_stop_on_target(k12):
    best, _ = ground_state(k12)
    cfg = TraceConfig(clock="model", target=10**6, stop_on_target=True)
    out = HopfieldSolver().run(k12, seed=1, trace_cfg=cfg)
    assert out.reached_target
    assert out.first_hit[0] == 0
    assert out.sweeps == 0
    assert out.converged is False
    assert best <= out.final_energy.value
