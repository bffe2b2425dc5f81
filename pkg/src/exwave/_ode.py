"""Embedded Dormand-Prince 5(4) integrator with PI step control and dense output.

Small, dependency-free and fully deterministic: identical inputs give
bit-identical trajectories, which the golden-file tests rely on.  Supports a
single terminal event located by bisection on the dense interpolant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = ["IntegrationFailure", "DenseSolution", "OdeResult", "solve_dopri5"]

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
# quartic dense-output coefficients (Shampine's interpolant for the pair above)
_P = np.array([
    [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

_SAFETY = 0.9
_ALPHA = 0.17
_BETA = 0.04
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0


class IntegrationFailure(RuntimeError):
    """Step-size underflow or step budget exhausted; carries diagnostics."""

    def __init__(self, message, t, y, h, nsteps):
        super().__init__(f"{message} at t={t!r} (h={h!r}, steps={nsteps})")
        self.t = t
        self.y = np.asarray(y)
        self.h = h
        self.nsteps = nsteps


class DenseSolution:
    """Piecewise-quartic interpolant over the accepted steps."""

    def __init__(self, ts, ys, qs):
        self.ts = np.asarray(ts)
        self.ys = np.asarray(ys)
        self.qs = qs  # list of (dim, 4) arrays, one per step

    @property
    def t_min(self):
        return self.ts[0]

    @property
    def t_max(self):
        return self.ts[-1]

    def __call__(self, t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        if not self.qs:  # zero-length integration: constant state
            out = np.broadcast_to(self.ys[0], (t_arr.size, self.ys.shape[1])).copy()
            return out[0] if np.ndim(t) == 0 else out
        idx = np.searchsorted(self.ts, t_arr, side="right") - 1
        idx = np.clip(idx, 0, len(self.qs) - 1)
        out = np.empty((t_arr.size, self.ys.shape[1]))
        for j, (ti, i) in enumerate(zip(t_arr, idx)):
            h = self.ts[i + 1] - self.ts[i]
            x = (ti - self.ts[i]) / h
            p = np.array([x, x * x, x ** 3, x ** 4])
            out[j] = self.ys[i] + h * (self.qs[i] @ p)
        if np.isscalar(t) or np.asarray(t).ndim == 0:
            return out[0]
        return out


@dataclass
class OdeResult:
    status: str            # "finished" or "event"
    t: float
    y: np.ndarray
    t_event: float | None
    sol: DenseSolution
    nsteps: int


def _initial_step(f, t0, y0, f0, direction, rtol, atol, max_step):
    scale = atol + rtol * np.abs(y0)
    d0 = np.sqrt(np.mean((y0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + h0 * direction * f0
    f1 = f(t0 + h0 * direction, y1)
    d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, max_step)


def solve_dopri5(f: Callable, t0: float, t1: float, y0, rtol: float, atol: float,
                 max_step: float = np.inf, event: Callable | None = None,
                 max_steps: int = 1_000_000) -> OdeResult:
    """Integrate y' = f(t, y) from t0 to t1 (t1 > t0).

    ``event(t, y)`` terminates the run at its first sign change, located to
    machine precision on the dense interpolant.
    """
    y = np.asarray(y0, dtype=float).copy()
    t = float(t0)
    k1 = np.asarray(f(t, y), dtype=float)
    h = _initial_step(f, t, y, k1, 1.0, rtol, atol, max_step)
    err_old = 1e-4
    ts = [t]
    ys = [y.copy()]
    qs = []
    g_prev = float(event(t, y)) if event is not None else None
    nsteps = 0
    K = np.empty((7, y.size))
    eps = np.finfo(float).eps
    while t < t1:
        if t1 - t <= 16.0 * eps * max(abs(t1), 1.0):
            t = t1  # reached the endpoint to roundoff; the sliver is extrapolated
            break
        if nsteps >= max_steps:
            raise IntegrationFailure("step budget exhausted", t, y, h, nsteps)
        if h < 16.0 * eps * max(abs(t), 1.0):
            raise IntegrationFailure("step size underflow", t, y, h, nsteps)
        h_step = min(h, t1 - t)
        K[0] = k1
        for i in range(1, 7):
            yi = y + h_step * (_A[i] @ K[:i])
            K[i] = f(t + _C[i] * h_step, yi)
        y_new = y + h_step * (_B @ K)
        err_vec = h_step * (_E @ K)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = np.sqrt(np.mean((err_vec / scale) ** 2))
        nsteps += 1
        if err > 1.0:
            h = h_step * max(_MIN_FACTOR, _SAFETY * err ** (-0.2))
            continue
        q = K.T @ _P  # (dim, 4) dense coefficients for this step
        t_new = t + h_step
        ts.append(t_new)
        ys.append(y_new.copy())
        qs.append(q)
        if event is not None:
            g_new = float(event(t_new, y_new))
            if g_prev is not None and g_prev * g_new < 0.0:
                sol = DenseSolution(ts, ys, qs)
                lo, hi = t, t_new
                glo = g_prev
                for _ in range(128):
                    mid = 0.5 * (lo + hi)
                    gm = float(event(mid, sol(mid)))
                    if glo * gm <= 0.0:
                        hi = mid
                    else:
                        lo = mid
                        glo = gm
                    if hi - lo <= 4.0 * np.finfo(float).eps * max(abs(hi), 1.0):
                        break
                te = 0.5 * (lo + hi)
                return OdeResult("event", te, sol(te), te, sol, nsteps)
            g_prev = g_new
        t = t_new
        y = y_new
        k1 = K[6]  # FSAL
        factor = _SAFETY * err ** (-_ALPHA) * err_old ** _BETA if err > 0 else _MAX_FACTOR
        h = min(h_step * min(_MAX_FACTOR, max(_MIN_FACTOR, factor)), max_step)
        err_old = max(err, 1e-10)
    sol = DenseSolution(ts, ys, qs)
    return OdeResult("finished", t, y, None, sol, nsteps)
