"""Stepping kernels for the Rossler system, in two interchangeable backends.

The hot loops (single runs, sampled trajectories, and whole batches of runs
sharing parameters) exist twice:

* ``numba``: the scalar step loops compiled with ``numba.njit``. Default
  whenever numba imports.
* ``numpy``: the identical loops left as plain Python, plus a vectorized
  batch runner that marches all entries together with numpy array ops.

Set ``ROSSLERCRYPT_BACKEND=numba`` or ``ROSSLERCRYPT_BACKEND=numpy`` to force
a backend (read once at import time). Both backends must produce
bit-identical binary64 results; the test suite enforces this, and the
protocol relies on it (sender and receiver reproduce each other's bits).

The step body below is a wire contract, not a style choice: every operation
is binary64, in exactly the written order, with h/2 and h/6 formed once per
run. Do not reassociate, fuse, or reorder.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable

import numpy as np

ENV_VAR = "ROSSLERCRYPT_BACKEND"


def _endpoint(a, b, c, x, y, z, h, n):
    """Advance (x, y, z) through n RK4 steps of the Rossler field.

    Returns (x, y, z, fail_step). fail_step is the 1-based index of the
    first step whose result contains a non-finite component, 0 if none;
    on failure the returned state is the offending one.
    """
    half_h = h / 2.0
    sixth_h = h / 6.0
    for k in range(1, n + 1):
        ax = -y - z
        ay = x + a * y
        az = b + z * (x - c)
        x1 = x + half_h * ax
        y1 = y + half_h * ay
        z1 = z + half_h * az
        bx = -y1 - z1
        by = x1 + a * y1
        bz = b + z1 * (x1 - c)
        x2 = x + half_h * bx
        y2 = y + half_h * by
        z2 = z + half_h * bz
        cx = -y2 - z2
        cy = x2 + a * y2
        cz = b + z2 * (x2 - c)
        x3 = x + h * cx
        y3 = y + h * cy
        z3 = z + h * cz
        dx = -y3 - z3
        dy = x3 + a * y3
        dz = b + z3 * (x3 - c)
        x = x + sixth_h * (ax + 2.0 * bx + 2.0 * cx + dx)
        y = y + sixth_h * (ay + 2.0 * by + 2.0 * cy + dy)
        z = z + sixth_h * (az + 2.0 * bz + 2.0 * cz + dz)
        if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(z)):
            return x, y, z, k
    return x, y, z, 0


def _trajectory(a, b, c, x, y, z, h, n, out):
    """Fill out[k] with the state after k steps, k = 0..n.

    Returns the fail step as in _endpoint; rows past a failure are left
    untouched except the failing row itself.
    """
    out[0, 0] = x
    out[0, 1] = y
    out[0, 2] = z
    for k in range(1, n + 1):
        x, y, z, fail = _endpoint(a, b, c, x, y, z, h, 1)
        out[k, 0] = x
        out[k, 1] = y
        out[k, 2] = z
        if fail != 0:
            return k
    return 0


def _batch(a, b, c, x0s, y0, z0, h, n, finals, fail_steps):
    """Run one endpoint per initial x in x0s; fill finals and fail_steps."""
    for i in range(x0s.shape[0]):
        x, y, z, fail = _endpoint(a, b, c, x0s[i], y0, z0, h, n)
        finals[i, 0] = x
        finals[i, 1] = y
        finals[i, 2] = z
        fail_steps[i] = fail


def _batch_numpy(a, b, c, x0s, y0, z0, h, n, finals, fail_steps):
    """Vectorized twin of _batch: all entries step together.

    Elementwise numpy ops apply the same binary64 operations per entry as
    the scalar loop, so results are bit-identical. Entries that diverge are
    carried along as inf/nan and tagged with their first failing step.
    """
    x = x0s.astype(np.float64, copy=True)
    y = np.full_like(x, y0)
    z = np.full_like(x, z0)
    half_h = h / 2.0
    sixth_h = h / 6.0
    with np.errstate(all="ignore"):
        for k in range(1, n + 1):
            ax = -y - z
            ay = x + a * y
            az = b + z * (x - c)
            x1 = x + half_h * ax
            y1 = y + half_h * ay
            z1 = z + half_h * az
            bx = -y1 - z1
            by = x1 + a * y1
            bz = b + z1 * (x1 - c)
            x2 = x + half_h * bx
            y2 = y + half_h * by
            z2 = z + half_h * bz
            cx = -y2 - z2
            cy = x2 + a * y2
            cz = b + z2 * (x2 - c)
            x3 = x + h * cx
            y3 = y + h * cy
            z3 = z + h * cz
            dx = -y3 - z3
            dy = x3 + a * y3
            dz = b + z3 * (x3 - c)
            x = x + sixth_h * (ax + 2.0 * bx + 2.0 * cx + dx)
            y = y + sixth_h * (ay + 2.0 * by + 2.0 * cy + dy)
            z = z + sixth_h * (az + 2.0 * bz + 2.0 * cz + dz)
            newly_bad = (fail_steps == 0) & ~(
                np.isfinite(x) & np.isfinite(y) & np.isfinite(z)
            )
            if newly_bad.any():
                fail_steps[newly_bad] = k
    finals[:, 0] = x
    finals[:, 1] = y
    finals[:, 2] = z


@dataclass(frozen=True)
class Backend:
    """One implementation of the stepping kernels."""

    name: str
    endpoint: Callable
    trajectory: Callable
    batch: Callable

    def run_endpoint(self, a, b, c, x, y, z, h, n):
        return self.endpoint(a, b, c, x, y, z, h, n)

    def run_trajectory(self, a, b, c, x, y, z, h, n) -> tuple[np.ndarray, int]:
        out = np.empty((n + 1, 3), dtype=np.float64)
        fail = self.trajectory(a, b, c, x, y, z, h, n, out)
        return out, fail

    def run_batch(self, a, b, c, x0s, y0, z0, h, n) -> tuple[np.ndarray, np.ndarray]:
        x0s = np.ascontiguousarray(x0s, dtype=np.float64)
        finals = np.empty((x0s.shape[0], 3), dtype=np.float64)
        fail_steps = np.zeros(x0s.shape[0], dtype=np.int64)
        self.batch(a, b, c, x0s, y0, z0, h, n, finals, fail_steps)
        return finals, fail_steps


_NUMPY_BACKEND = Backend("numpy", _endpoint, _trajectory, _batch_numpy)

try:
    from numba import njit

    _endpoint_nb = njit(cache=True, nogil=True)(_endpoint)

    @njit(cache=True, nogil=True)
    def _trajectory_nb(a, b, c, x, y, z, h, n, out):
        out[0, 0] = x
        out[0, 1] = y
        out[0, 2] = z
        for k in range(1, n + 1):
            x, y, z, fail = _endpoint_nb(a, b, c, x, y, z, h, 1)
            out[k, 0] = x
            out[k, 1] = y
            out[k, 2] = z
            if fail != 0:
                return k
        return 0

    @njit(cache=True, nogil=True)
    def _batch_nb(a, b, c, x0s, y0, z0, h, n, finals, fail_steps):
        for i in range(x0s.shape[0]):
            x, y, z, fail = _endpoint_nb(a, b, c, x0s[i], y0, z0, h, n)
            finals[i, 0] = x
            finals[i, 1] = y
            finals[i, 2] = z
            fail_steps[i] = fail

    _NUMBA_BACKEND: Backend | None = Backend(
        "numba", _endpoint_nb, _trajectory_nb, _batch_nb
    )
except ImportError:  # pragma: no cover - numba is a declared dependency
    _NUMBA_BACKEND = None


def available_backends() -> tuple[str, ...]:
    names = ["numpy"]
    if _NUMBA_BACKEND is not None:
        names.insert(0, "numba")
    return tuple(names)


def get_backend(name: str) -> Backend:
    name = name.strip().lower()
    if name == "numpy":
        return _NUMPY_BACKEND
    if name == "numba":
        if _NUMBA_BACKEND is None:
            raise RuntimeError(f"{ENV_VAR}=numba requested but numba is not importable")
        return _NUMBA_BACKEND
    raise RuntimeError(f"unknown backend {name!r} (expected 'numba' or 'numpy')")


def _select_active() -> Backend:
    requested = os.environ.get(ENV_VAR, "").strip().lower()
    if requested in ("", "auto"):
        return _NUMBA_BACKEND if _NUMBA_BACKEND is not None else _NUMPY_BACKEND
    return get_backend(requested)


_ACTIVE = _select_active()


def active_backend() -> Backend:
    """The backend selected at import time."""
    return _ACTIVE
