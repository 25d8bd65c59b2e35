"""Fixed-step classical Runge-Kutta integration."""
from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import InputError


def rk4(f: Callable[[float, np.ndarray], np.ndarray], y0, t0: float, t1: float, steps: int):
    """Integrate ``y' = f(t, y)`` from ``t0`` to ``t1`` in ``steps`` equal steps.

    Returns ``(times, states)`` with ``states[n]`` the value at ``times[n]``.
    """
    if steps < 1:
        raise InputError(f"steps must be >= 1, got {steps}")
    y = np.array(y0, dtype=float)
    h = (t1 - t0) / steps
    times = t0 + h * np.arange(steps + 1)
    states = np.empty((steps + 1,) + y.shape)
    states[0] = y
    for n in range(steps):
        t = times[n]
        k1 = f(t, y)
        k2 = f(t + h / 2, y + h / 2 * k1)
        k3 = f(t + h / 2, y + h / 2 * k2)
        k4 = f(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        states[n + 1] = y
    return times, states
