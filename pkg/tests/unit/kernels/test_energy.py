# Copyright (c) 2025 takotime808

import numpy as np
import pytest

from isingbench.errors import DimensionMismatchError
from isingbench.kernels.energy import (
    Energy,
    apply_flip,
    cut_from_energy,
    cut_value,
    delta_energy,
    energy_from_fields,
    ising_energy,
)
from isingbench.problems.instance import IsingInstance
from isingbench.problems.state import SpinState
from tests.builders import (
    naive_cut,
    naive_energy,
    random_int_instance,
    random_pm1_instance,
    random_real_instance,
    random_spins,
)


def test_triangle_cut_and_energy(triangle):
    x = np.array([1, -1, 1], dtype=np.int8)
    assert cut_value(triangle, x) == 2
    assert ising_energy(triangle, x).value == -1
    assert cut_value(triangle, np.ones(3, dtype=np.int8)) == 0
    assert ising_energy(triangle, np.ones(3, dtype=np.int8)).value == 3


def test_single_edge_negative_weight():
    inst = IsingInstance.from_edges(2, [(0, 1, -1)])
    assert cut_value(inst, np.array([1, -1])) == -1
    assert ising_energy(inst, np.array([1, 1])).value == -1


def test_empty_graph_is_zero():
    inst = IsingInstance.from_weights(np.zeros((4, 4), dtype=np.int32))
    x = np.array([1, -1, 1, -1])
    assert cut_value(inst, x) == 0
    assert ising_energy(inst, x).value == 0


def test_energy_per_spin():
    assert Energy(value=-10, n=4).per_spin == -2.5


def test_identity_cut_from_energy_exact_on_fuzz(rng):
    for _ in range(300):
        n = int(rng.integers(2, 16))
        inst = random_int_instance(rng, n) if rng.random() < 0.5 else random_pm1_instance(rng, n, density=0.6)
        x = random_spins(rng, n)
        w = inst.dense_weights().tolist()
        xs = x.tolist()
        e = ising_energy(inst, x).value
        c = cut_value(inst, x)
        assert isinstance(e, int) and isinstance(c, int)
        assert e == naive_energy(w, xs)
        assert c == naive_cut(w, xs)
        assert 2 * c == inst.total_weight - e
        assert cut_from_energy(inst, e) == c


def test_real_weights_identity(rng):
    inst = random_real_instance(rng, 9)
    x = random_spins(rng, 9)
    e = ising_energy(inst, x).value
    assert e == pytest.approx(naive_energy(inst.dense_weights().tolist(), x.tolist()))
    assert cut_value(inst, x) == pytest.approx((inst.total_weight - e) / 2)


def test_dimension_mismatch(triangle):
    with pytest.raises(DimensionMismatchError):
        cut_value(triangle, np.array([1, 1]))
    with pytest.raises(DimensionMismatchError):
        ising_energy(triangle, np.array([1, 1, 1, 1]))


def test_energy_from_fields_matches_scratch(rng):
    for _ in range(50):
        n = int(rng.integers(2, 20))
        inst = random_int_instance(rng, n)
        s = SpinState.from_spins(inst, random_spins(rng, n))
        assert energy_from_fields(inst, s) == ising_energy(inst, s)


def test_delta_energy_equals_flip_difference(rng):
    for _ in range(100):
        n = int(rng.integers(2, 20))
        inst = random_int_instance(rng, n)
        s = SpinState.from_spins(inst, random_spins(rng, n))
        i = int(rng.integers(0, n))
        before = ising_energy(inst, s).value
        d = delta_energy(inst, s, i)
        flipped = s.spins.copy()
        flipped[i] = -flipped[i]
        assert d == ising_energy(inst, flipped).value - before


def test_delta_energy_index_out_of_range(triangle):
    s = SpinState.from_spins(triangle, [1, 1, 1])
    with pytest.raises(IndexError):
        delta_energy(triangle, s, 3)
    with pytest.raises(IndexError):
        delta_energy(triangle, s, -1)
    with pytest.raises(IndexError):
        apply_flip(triangle, s, 5)


def test_apply_flip_keeps_caches_consistent_over_many_flips(rng):
    inst = random_int_instance(rng, 40)
    s = SpinState.from_spins(inst, random_spins(rng, 40))
    energy = ising_energy(inst, s).value
    for _ in range(1000):
        i = int(rng.integers(0, 40))
        energy += delta_energy(inst, s, i)
        apply_flip(inst, s, i)
    assert s.is_consistent(inst)
    assert energy == ising_energy(inst, s).value


def test_double_flip_restores_state(k12, rng):
    s = SpinState.from_spins(k12, random_spins(rng, 12))
    before = s.copy()
    apply_flip(k12, s, 4)
    assert s != before
    apply_flip(k12, s, 4)
    assert s == before
    assert np.array_equal(s.bits, before.bits)


def test_apply_flip_real_weights_stay_close(rng):
    inst = random_real_instance(rng, 15)
    s = SpinState.from_spins(inst, random_spins(rng, 15))
    for _ in range(500):
        apply_flip(inst, s, int(rng.integers(0, 15)))
    assert s.is_consistent(inst)


@pytest.mark.parametrize("weights", [(-1, 1), (-7, 3000000000), (-0.5, 2.25)])
def test_apply_flip_on_sparse_layout(rng, weights):
    n = 300
    edges = [(i, (i + 1) % n, weights[i % 2]) for i in range(n)]
    edges += [(i, i + 150, weights[0]) for i in range(0, 150, 7)]
    inst = IsingInstance.from_edges(n, edges)
    assert inst.is_sparse
    s = SpinState.from_spins(inst, random_spins(rng, n))
    energy = ising_energy(inst, s).value
    for _ in range(2000):
        i = int(rng.integers(0, n))
        energy += delta_energy(inst, s, i)
        apply_flip(inst, s, i)
    assert s.is_consistent(inst)
    scratch = ising_energy(inst, s).value
    if inst.is_integral:
        assert energy == scratch == energy_from_fields(inst, s).value
    else:
        assert energy == pytest.approx(scratch)
        assert energy_from_fields(inst, s).value == pytest.approx(scratch)
