"""Closed-loop PID tuning objective.

Plant: G(s) = e^(-0.2 s) / ((s + 1)(s + 3)), simulated in controllable
canonical form (x1' = x2, x2' = -3 x1 - 4 x2 + u_delayed, y = x1) with a
fixed Euler step and a ring buffer for the input delay. The controller
u = Kp e + Ki int(e) + Kd de/dt tracks a unit step; fitness is the ITAE
integral of t * |e(t)| accumulated with the same first-order rectangle
rule as the state update, so the quadrature error shrinks linearly in
dt (the zero-controller closed form is T^2/2). Runs that push |y| past
y_limit return a large finite sentinel instead of blowing up.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a hard dep, but keep a path
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@njit(cache=True)
def _closed_loop_itae(kp, ki, kd, dt, n_steps, delay_steps, y_limit, sentinel):
    buf = np.zeros(delay_steps)
    head = 0
    x1 = 0.0
    x2 = 0.0
    integral = 0.0
    prev_e = 1.0  # reference steps to 1 at t=0, output starts at 0
    itae = 0.0
    for k in range(n_steps):
        y = x1
        if abs(y) > y_limit:
            return sentinel
        t = k * dt
        e = 1.0 - y
        integral += e * dt
        deriv = (e - prev_e) / dt
        prev_e = e
        u = kp * e + ki * integral + kd * deriv
        if delay_steps > 0:
            u_plant = buf[head]
            buf[head] = u
            head += 1
            if head == delay_steps:
                head = 0
        else:
            u_plant = u
        itae += t * abs(e) * dt
        dx1 = x2
        dx2 = -3.0 * x1 - 4.0 * x2 + u_plant
        x1 += dt * dx1
        x2 += dt * dx2
    return itae


@dataclass(eq=False)
class PidProblem:
    horizon: float = 10.0
    dt: float = 1e-3
    delay: float = 0.2
    y_limit: float = 1e3
    sentinel: float = 1e6
    encoding: str = field(default="real", init=False)
    direction: str = field(default="min", init=False)

    def __post_init__(self):
        if self.dt <= 0:
            raise ConfigurationError("dt must be > 0")
        if self.horizon < 5.0:
            raise ConfigurationError(
                f"horizon must be >= 5 s for the transient to settle, got {self.horizon}"
            )
        ratio = self.delay / self.dt
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
            raise ConfigurationError(
                f"delay {self.delay} must be an integer multiple of dt {self.dt}"
            )
        self.delay_steps = int(round(ratio))
        self.n_steps = int(round(self.horizon / self.dt))
        self.lower = np.array([0.0, 0.0, 0.0])
        self.upper = np.array([10.0, 10.0, 5.0])

    def evaluate(self, gains) -> float:
        g = np.asarray(gains, dtype=float)
        if g.shape != (3,):
            raise ConfigurationError(f"gains must be (Kp, Ki, Kd), got shape {g.shape}")
        if np.any(g < self.lower) or np.any(g > self.upper):
            raise ConfigurationError(f"gains {g} outside bounds")
        return float(
            _closed_loop_itae(
                g[0], g[1], g[2], self.dt, self.n_steps, self.delay_steps,
                self.y_limit, self.sentinel,
            )
        )

    def random_genome(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.lower, self.upper)
