# Copyright (c) 2025 takotime808

from dataclasses import dataclass

import pytest

from isingbench.errors import DivergenceError, InvalidArgumentError
from isingbench.kernels.energy import ising_energy
from isingbench.problems.state import SpinState
from isingbench.solvers.base import TRACE_COLUMNS, BaseSolver, TraceConfig, TraceRecorder


@dataclass
class _Cfg:
    boom: bool = False
    bad: bool = False

    def validate(self):
        if self.bad:
            raise InvalidArgumentError("bad config")


class _Dummy(BaseSolver):
    solver_id = "dummy"
    config_type = _Cfg

    def _solve(self, inst, config, seed, trace_cfg):
        if config.boom:
            raise DivergenceError(7, "dummy")
        rec = TraceRecorder(inst, self.solver_id, trace_cfg)
        rec.start()
        s = SpinState.from_spins(inst, [1] * inst.n)
        e = ising_energy(inst, s)
        rec.record(0, e.value)
        return rec.outcome(s, e, 0)


@pytest.mark.parametrize(
    "kwargs",
    [{"every": 0}, {"clock": "sundial"}, {"tick_ns": 0}],
)
def test_trace_config_validation(kwargs):
    with pytest.raises(InvalidArgumentError):
        TraceConfig(**kwargs).validate()


def test_recorder_model_clock_and_cut_identity(triangle):
    rec = TraceRecorder(triangle, "x", TraceConfig(clock="model", tick_ns=10))
    rec.start()
    rec.record(0, 3)
    rec.record(2, -1)
    samples = rec.trace.samples
    assert [s.elapsed_ns for s in samples] == [10, 30]
    assert [s.cut for s in samples] == [0, 2]


def test_recorder_wall_clock_strictly_increasing(triangle):
    rec = TraceRecorder(triangle, "x", TraceConfig())
    rec.start()
    for it in range(50):
        rec.record(it, 3)
    times = rec.trace.times
    assert times[0] > 0
    assert all(b > a for a, b in zip(times, times[1:]))


def test_recorder_ignores_repeated_iteration(triangle):
    rec = TraceRecorder(triangle, "x", TraceConfig(clock="model"))
    rec.record(3, 1)
    rec.record(3, 1)
    assert len(rec.trace) == 1


def test_recorder_tracks_first_hit_and_stop(triangle):
    rec = TraceRecorder(triangle, "x", TraceConfig(clock="model", target=-1, stop_on_target=True))
    assert rec.record(0, 3) is False
    assert rec.record(1, -1) is True
    rec.record(2, -1)
    assert rec.hit == (1, 2000)
    out = rec.outcome(SpinState.from_spins(triangle, [1, -1, 1]), ising_energy(triangle, [1, -1, 1]), 2)
    assert out.reached_target and out.first_hit == (1, 2000)


def test_recorder_due():
    from isingbench.problems.instance import gen_complete_pm1

    rec = TraceRecorder(gen_complete_pm1(3, 0), "x", TraceConfig(every=5))
    assert [it for it in range(12) if rec.due(it)] == [0, 5, 10]


def test_trace_to_frame_columns(triangle):
    rec = TraceRecorder(triangle, "x", TraceConfig(clock="model"))
    rec.record(0, 3)
    df = rec.trace.to_frame()
    assert list(df.columns) == TRACE_COLUMNS
    assert df.loc[0, "energy_per_spin"] == 1.0


def test_base_solver_runs_and_labels_trace(triangle):
    out = _Dummy().run(triangle, seed=5, trial=3)
    assert out.status == "ok"
    assert out.trial == 3 and out.trace.seed == 5
    assert out.solver == "dummy"
    assert out.final_energy.value == 3


def test_base_solver_converts_exceptions_to_error_outcome(triangle):
    out = _Dummy().run(triangle, _Cfg(boom=True), seed=1, trial=2)
    assert out.status == "error"
    assert out.final_state is None and out.final_energy is None
    assert "DivergenceError" in out.error and "step 7" in out.error
    assert out.trial == 2 and len(out.trace) == 0


def test_base_solver_rejects_invalid_config(triangle):
    out = _Dummy().run(triangle, _Cfg(bad=True), seed=1)
    assert out.status == "error"
    assert "bad config" in out.error


def test_base_solver_rejects_wrong_config_type(triangle):
    out = _Dummy().run(triangle, object(), seed=1)
    assert out.status == "error"
    assert "TypeError" in out.error
