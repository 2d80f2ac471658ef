# Copyright (c) 2025 takotime808

import numpy as np
import pytest

from isingbench.errors import MissingBitplaneError
from isingbench.kernels.energy import delta_energy
from isingbench.kernels.packed import (
    delta_energy_packed,
    fields_packed,
    pack_bits,
    pack_pairs,
    pack_rows,
    unpack_bits,
)
from isingbench.problems.instance import IsingInstance, gen_complete_pm1
from isingbench.problems.state import SpinState
from tests.builders import random_pm1_instance, random_spins


def test_pack_bits_little_endian():
    assert pack_bits(np.array([True, False, True])).tolist() == [5]
    mask = np.zeros(65, dtype=bool)
    mask[64] = True
    assert pack_bits(mask).tolist() == [0, 1]


def test_pack_rows_and_unpack():
    m = np.array([[True, False, False, True], [False, True, True, False]])
    rows = pack_rows(m)
    assert rows.dtype == np.uint64
    assert rows[:, 0].tolist() == [0b1001, 0b0110]
    assert np.array_equal(unpack_bits(rows[1], 4), m[1])


def test_bitplane_semantics():
    inst = IsingInstance.from_edges(3, [(0, 1, -1), (0, 2, 1)])
    assert int(inst.edge_plane[0, 0]) == 0b110
    assert int(inst.sign_plane[0, 0]) == 0b010
    assert int(inst.edge_plane[1, 0]) == 0b001
    assert int(inst.sign_plane[1, 0]) == 0b001
    assert int(inst.sign_plane[2, 0]) == 0


def test_packed_fields_match_dense(rng):
    for n in (2, 63, 64, 65, 130):
        inst = random_pm1_instance(rng, n, density=0.7)
        s = SpinState.from_spins(inst, random_spins(rng, n))
        assert np.array_equal(fields_packed(inst, s.bits), s.fields)


def test_packed_delta_energy_equals_naive_on_fuzz(rng):
    cases = 0
    while cases < 10_000:
        n = int(rng.integers(2, 150))
        inst = random_pm1_instance(rng, n, density=float(rng.uniform(0.2, 1.0)))
        for _ in range(50):
            s = SpinState.from_spins(inst, random_spins(rng, n))
            for i in rng.integers(0, n, size=4):
                assert delta_energy_packed(inst, s, int(i)) == delta_energy(inst, s, int(i))
                cases += 1


def test_packed_delta_energy_after_flips(rng):
    from isingbench.kernels.energy import apply_flip

    inst = gen_complete_pm1(100, seed=9)
    s = SpinState.from_spins(inst, random_spins(rng, 100))
    for _ in range(1000):
        apply_flip(inst, s, int(rng.integers(0, 100)))
    for i in range(100):
        assert delta_energy_packed(inst, s, i) == delta_energy(inst, s, i)


def test_packed_kernel_requires_bitplanes():
    inst = IsingInstance.from_edges(3, [(0, 1, 2)])
    s = SpinState.from_spins(inst, [1, 1, 1])
    with pytest.raises(MissingBitplaneError):
        delta_energy_packed(inst, s, 0)
    with pytest.raises(MissingBitplaneError):
        fields_packed(inst, s.bits)


def test_packed_kernel_index_check(triangle):
    s = SpinState.from_spins(triangle, [1, 1, 1])
    with pytest.raises(IndexError):
        delta_energy_packed(triangle, s, 3)


def test_pack_pairs_matches_pack_rows(rng):
    for n in (1, 64, 65, 130):
        mask = rng.random((n, n)) < 0.1
        rows, cols = np.nonzero(mask)
        assert np.array_equal(pack_pairs(n, rows, cols), pack_rows(mask))


def test_packed_kernel_on_sparse_layout(rng):
    inst = random_pm1_instance(rng, 200, density=0.05)
    assert inst.is_sparse
    s = SpinState.from_spins(inst, random_spins(rng, 200))
    assert np.array_equal(fields_packed(inst, s.bits), s.fields)
    for i in range(200):
        assert delta_energy_packed(inst, s, i) == delta_energy(inst, s, i)
