"""The Rossler system and the machine that runs it.

    x' = -y - z
    y' = x + a*y
    z' = b + z*(x - c)

The system is chaotic near (a, b, c) = (0.2, 0.2, 5.7): nearby initial
states diverge exponentially while trajectories stay on a bounded attractor.

The "machine" maps (system parameters, initial state, step count, step
size) to the state after N fixed RK4 steps. Its output is reproducible
bit-for-bit, which is what the encryption and digest schemes built on top
of it require.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels, ode
from .errors import DivergenceError


@dataclass(frozen=True)
class SystemParams:
    """The parameter triple (a, b, c)."""

    a: float
    b: float
    c: float


@dataclass(frozen=True)
class StateVector:
    """One point (x, y, z) of the phase space."""

    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=np.float64)

    @classmethod
    def from_array(cls, arr) -> StateVector:
        return cls(float(arr[0]), float(arr[1]), float(arr[2]))


#: Parameters in the classic chaotic regime; the simulation default.
CANONICAL_PARAMS = SystemParams(0.2, 0.2, 5.7)


@dataclass(frozen=True)
class MachineConfig:
    """A validated machine setup: parameters, step size, step count.

    Configure once, run per initial state.
    """

    params: SystemParams
    h: float
    n_steps: int

    def __post_init__(self):
        _check_machine_args(self.params, self.n_steps, self.h)

    def run(self, init: StateVector) -> StateVector:
        return run_machine(self.params, init, self.n_steps, self.h)

    def run_trajectory(self, init: StateVector) -> ode.Trajectory:
        return run_machine_trajectory(self.params, init, self.n_steps, self.h)


def rossler_field(params: SystemParams, s: StateVector) -> StateVector:
    """Evaluate the Rossler right-hand side at s.

    Each component is computed in binary64 in exactly the written order, so
    every implementation of the protocol sees identical bits.
    """
    return StateVector(
        -s.y - s.z,
        s.x + params.a * s.y,
        params.b + s.z * (s.x - params.c),
    )


def vector_field(params: SystemParams) -> ode.VectorField:
    """The same field as a generic 3-dimensional ode.VectorField."""
    a, b, c = params.a, params.b, params.c

    def f(state: np.ndarray) -> np.ndarray:
        x, y, z = state[0], state[1], state[2]
        return np.array([-y - z, x + a * y, b + z * (x - c)])

    return ode.VectorField(dim=3, f=f)


def _check_machine_args(params: SystemParams, n_steps: int, h: float) -> None:
    for v in (params.a, params.b, params.c):
        if not math.isfinite(v):
            raise ValueError("system parameters must be finite")
    if not (math.isfinite(h) and h > 0):
        raise ValueError(f"step size must be finite and positive, got {h!r}")
    if n_steps < 1:
        raise ValueError(f"step count must be >= 1, got {n_steps}")


def run_machine(
    params: SystemParams, init: StateVector, n_steps: int, h: float
) -> StateVector:
    """State after n_steps RK4 steps of size h from init.

    Bit-identical to integrating vector_field(params) with the generic
    solver; the dedicated kernels only make it fast.
    """
    _check_machine_args(params, n_steps, h)
    be = kernels.active_backend()
    x, y, z, fail = be.run_endpoint(
        params.a, params.b, params.c, init.x, init.y, init.z, h, n_steps
    )
    if fail != 0:
        raise DivergenceError(f"machine run diverged at step {fail}", step=fail)
    return StateVector(x, y, z)


def run_machine_trajectory(
    params: SystemParams, init: StateVector, n_steps: int, h: float
) -> ode.Trajectory:
    """Full sampled trajectory; the last state equals run_machine's output."""
    _check_machine_args(params, n_steps, h)
    be = kernels.active_backend()
    states, fail = be.run_trajectory(
        params.a, params.b, params.c, init.x, init.y, init.z, h, n_steps
    )
    if fail != 0:
        raise DivergenceError(
            f"machine run diverged at step {fail}",
            step=fail,
            partial_states=states[:fail].copy(),
        )
    return ode.Trajectory(t0=0.0, h=h, states=states)


def run_machine_batch(
    params: SystemParams,
    x0_values,
    y0: float,
    z0: float,
    n_steps: int,
    h: float,
    *,
    workers: int = 1,
) -> np.ndarray:
    """Endpoints of one machine run per entry of x0_values, sharing y0, z0.

    Entries are independent, so they may be computed on any number of
    worker threads; the output bits do not depend on the split. Raises
    DivergenceError for the lowest-indexed diverging entry.
    """
    _check_machine_args(params, n_steps, h)
    x0s = np.ascontiguousarray(x0_values, dtype=np.float64)
    be = kernels.active_backend()
    n = x0s.shape[0]
    if workers <= 1 or n < 2:
        finals, fail_steps = be.run_batch(
            params.a, params.b, params.c, x0s, y0, z0, h, n_steps
        )
    else:
        finals = np.empty((n, 3), dtype=np.float64)
        fail_steps = np.zeros(n, dtype=np.int64)
        bounds = np.linspace(0, n, min(workers, n) + 1, dtype=int)

        def run_chunk(lo: int, hi: int) -> None:
            finals[lo:hi], fail_steps[lo:hi] = be.run_batch(
                params.a, params.b, params.c, x0s[lo:hi], y0, z0, h, n_steps
            )

        with ThreadPoolExecutor(max_workers=len(bounds) - 1) as pool:
            futures = [
                pool.submit(run_chunk, int(lo), int(hi))
                for lo, hi in zip(bounds[:-1], bounds[1:])
                if hi > lo
            ]
            for fut in futures:
                fut.result()
    failing = np.flatnonzero(fail_steps)
    if failing.size:
        entry = int(failing[0])
        step = int(fail_steps[entry])
        raise DivergenceError(
            f"machine run for entry {entry} diverged at step {step}",
            step=step,
            entry=entry,
        )
    return finals
