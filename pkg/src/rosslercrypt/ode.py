"""Fixed-step classical RK4 for m-dimensional autonomous first-order systems.

The integrator is deliberately rigid: binary64 arithmetic in a fixed written
order, stage vectors fully materialized, no reassociation, no extended
precision. Identical inputs give bit-identical outputs on every platform,
which is what lets two parties reproduce each other's trajectories exactly.

Only explicit fixed-step RK4 is provided. Adaptive stepping would make the
step sequence data-dependent and break reproducibility between parties.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DivergenceError


@dataclass(frozen=True)
class VectorField:
    """An autonomous vector field x' = f(x) on R^dim.

    f must be a pure, deterministic map from a length-dim float64 array to
    a length-dim array: identical input bits produce identical output bits.
    """

    dim: int
    f: Callable[[np.ndarray], np.ndarray]

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("field dimension must be >= 1")

    def __call__(self, state: np.ndarray) -> np.ndarray:
        return self.f(state)


@dataclass(frozen=True)
class RkStages:
    """The four field evaluations of one classical RK4 step."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray


@dataclass(frozen=True)
class Trajectory:
    """States sampled every h time units; states[k] is the state at t0 + k*h."""

    t0: float
    h: float
    states: np.ndarray

    @property
    def n_steps(self) -> int:
        return self.states.shape[0] - 1

    @property
    def times(self) -> np.ndarray:
        # Reporting only; time never enters the integration arithmetic.
        return np.array([self.t0 + k * self.h for k in range(self.states.shape[0])])


def _check_step_size(h: float) -> None:
    if not (isinstance(h, (int, float)) and math.isfinite(h) and h > 0):
        raise ValueError(f"step size must be finite and positive, got {h!r}")


def _as_state(state, dim: int) -> np.ndarray:
    arr = np.asarray(state, dtype=np.float64)
    if arr.shape != (dim,):
        raise ValueError(f"state has shape {arr.shape}, field expects ({dim},)")
    return arr


def _stage(field: VectorField, point: np.ndarray) -> np.ndarray:
    # Overflow is an expected outcome here (reported as DivergenceError),
    # not something numpy should warn about.
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.asarray(field.f(point), dtype=np.float64)
    if out.shape != (field.dim,):
        raise ValueError(
            f"field returned shape {out.shape}, expected ({field.dim},)"
        )
    if not np.isfinite(out).all():
        raise DivergenceError("non-finite value in RK4 stage")
    return out


def rk4_stages(field: VectorField, state, h: float) -> RkStages:
    """The stage evaluations a = f(x), b = f(x + (h/2) a),
    c = f(x + (h/2) b), d = f(x + h c), in that order.

    Raises DivergenceError as soon as a stage has a non-finite component.
    """
    _check_step_size(h)
    x = _as_state(state, field.dim)
    half_h = h / 2.0
    with np.errstate(over="ignore", invalid="ignore"):
        a = _stage(field, x)
        b = _stage(field, x + half_h * a)
        c = _stage(field, x + half_h * b)
        d = _stage(field, x + h * c)
    return RkStages(a, b, c, d)


def rk4_step(field: VectorField, state, h: float) -> np.ndarray:
    """One classical RK4 step of size h.

    Computes the four stages and returns x + (h/6)(a + 2b + 2c + d), every
    operation in binary64 in exactly that written order.

    Raises DivergenceError if any stage or the result has a non-finite
    component.
    """
    x = _as_state(state, field.dim)
    s = rk4_stages(field, x, h)
    with np.errstate(over="ignore", invalid="ignore"):
        new = x + (h / 6.0) * (s.a + 2.0 * s.b + 2.0 * s.c + s.d)
    if not np.isfinite(new).all():
        raise DivergenceError("non-finite value in RK4 step result")
    return new


def integrate(field: VectorField, state0, h: float, n_steps: int) -> np.ndarray:
    """Apply rk4_step n_steps times; n_steps = 0 returns state0 unchanged.

    Raises DivergenceError carrying the 1-based index of the first step at
    which a non-finite value appeared.
    """
    _check_step_size(h)
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    state = _as_state(state0, field.dim).copy()
    for k in range(1, n_steps + 1):
        try:
            state = rk4_step(field, state, h)
        except DivergenceError as err:
            raise DivergenceError(f"integration diverged at step {k}", step=k) from err
    return state


def integrate_trajectory(
    field: VectorField, state0, h: float, n_steps: int, t0: float = 0.0
) -> Trajectory:
    """Like integrate, but keeps every sampled state.

    On divergence the error carries the states computed before the failing
    step in partial_states.
    """
    _check_step_size(h)
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    states = np.empty((n_steps + 1, field.dim), dtype=np.float64)
    states[0] = _as_state(state0, field.dim)
    for k in range(1, n_steps + 1):
        try:
            states[k] = rk4_step(field, states[k - 1], h)
        except DivergenceError as err:
            raise DivergenceError(
                f"integration diverged at step {k}",
                step=k,
                partial_states=states[:k].copy(),
            ) from err
    return Trajectory(t0=t0, h=h, states=states)
