"""Independent cross-checks for the path-integral engine.

Everything here is computed by routes that share no code with the engine:
mean trajectories from direct ODE integration of the damped classical
equations (exact for the means of a driven bilinear open system), stationary
spreads from the fluctuation-dissipation integral over the exact
susceptibility matrix, and a brute-force triangle double integral for the
bath phase functionals.  This module must stay importable on its own; it
deliberately does not import the mode/action/bath machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad, solve_ivp

from .config import InternalConfig


def _force_callable(f) -> Callable[[float], float]:
    """Scalar force of one internal force spec; self-contained on purpose."""
    if f.kind == "zero":
        return lambda tau: 0.0
    if f.kind == "exponential_step":
        f0, t0, dec = f.f0, f.t0, f.decay
        return lambda tau: f0 * math.exp(-dec * tau) if tau >= t0 else 0.0
    times = np.asarray(f.times)
    values = np.asarray(f.values)
    return lambda tau: float(np.interp(tau, times, values,
                                       left=0.0, right=0.0))


def _breakpoints(cfg: InternalConfig, t_end: float) -> list:
    pts = []
    for f in (cfg.force1, cfg.force2):
        if f.kind == "exponential_step" and 0.0 < f.t0 < t_end:
            pts.append(f.t0)
        elif f.kind == "sampled":
            pts.extend(x for x in (f.times[0], f.times[-1])
                       if 0.0 < x < t_end)
    return sorted(set(pts))


@dataclass(frozen=True)
class MeanTrajectory:
    """Classical mean trajectory: columns over the requested times."""
    times: np.ndarray
    x1: np.ndarray
    p1: np.ndarray
    x2: np.ndarray
    p2: np.ndarray


def mean_ode(cfg: InternalConfig, times: Sequence[float],
             rtol: float = 1e-11, atol: float = 1e-12) -> MeanTrajectory:
    """Integrate the exact mean equations of motion from rest.

        m1 x1'' + 2 m1 gamma1 x1' + m1 w01^2 x1 - lam x2 = f1(t)
        m2 x2'' + 2 m2 gamma2 x2' + m2 w02^2 x2 - lam x1 = f2(t)

    The drive onsets are integration breakpoints so the discontinuities
    never sit inside a step.
    """
    times = np.asarray(times, dtype=float)
    t_end = float(times[-1])
    f1 = _force_callable(cfg.force1)
    f2 = _force_callable(cfg.force2)

    def rhs(t, y):
        x1, v1, x2, v2 = y
        a1 = (-cfg.w01 ** 2 * x1 - 2.0 * cfg.gamma1 * v1
              + (cfg.lam * x2 + f1(t)) / cfg.m1)
        a2 = (-cfg.w02 ** 2 * x2 - 2.0 * cfg.gamma2 * v2
              + (cfg.lam * x1 + f2(t)) / cfg.m2)
        return (v1, a1, v2, a2)

    edges = [0.0] + _breakpoints(cfg, t_end) + [t_end]
    y = np.zeros(4)
    out = np.zeros((4, times.size))
    done = np.zeros(times.size, dtype=bool)
    if times[0] == 0.0:
        done[0] = True
    for a, b in zip(edges[:-1], edges[1:]):
        mask = (~done) & (times > a) & (times <= b)
        sol = solve_ivp(rhs, (a, b), y, method="DOP853",
                        rtol=rtol, atol=atol, dense_output=True)
        if np.any(mask):
            out[:, mask] = sol.sol(times[mask])
            done[mask] = True
        y = sol.y[:, -1]
    return MeanTrajectory(times=times,
                          x1=out[0], p1=cfg.m1 * out[1],
                          x2=out[2], p2=cfg.m2 * out[3])


def _coth(theta: float) -> float:
    if theta < 1e-4:
        return 1.0 / theta + theta / 3.0
    return 1.0 / math.tanh(theta)


def susceptibility(cfg: InternalConfig, omega: float) -> np.ndarray:
    """Exact 2x2 response matrix of the coupled damped pair."""
    d1 = cfg.m1 * (cfg.w01 ** 2 - omega ** 2 - 2j * cfg.gamma1 * omega)
    d2 = cfg.m2 * (cfg.w02 ** 2 - omega ** 2 - 2j * cfg.gamma2 * omega)
    A = np.array([[d1, -cfg.lam], [-cfg.lam, d2]], dtype=complex)
    return np.linalg.inv(A)


def fdt_stationary_variance(cfg: InternalConfig) -> dict:
    """Late-time spreads from the fluctuation-dissipation integral.

    Exact for equal bath temperatures.  For unequal temperatures the same
    integral taken at each bath temperature gives a soft bracket, returned
    as (low, high); the true stationary value need not sit strictly inside,
    so treat it as a sanity range, not a bound.
    """
    numax = min(cfg.numax1, cfg.numax2)
    temps = sorted({cfg.T1, cfg.T2})

    def spread(T, which, momentum):
        def integrand(w):
            chi = susceptibility(cfg, w)[which, which].imag
            th = _coth(w / (2.0 * T)) if T > 0 else 1.0
            extra = (cfg.m1 if which == 0 else cfg.m2) ** 2 * w ** 2 \
                if momentum else 1.0
            return th * chi * extra / math.pi
        pts = [w for w in (cfg.w01, cfg.w02) if w < numax]
        val, _ = quad(integrand, 0.0, numax, points=pts, limit=400)
        return val

    out = {}
    for which, name in ((0, "x1"), (1, "x2")):
        vx = [spread(T, which, False) for T in temps]
        vp = [spread(T, which, True) for T in temps]
        out[f"var_{name}"] = tuple(vx) if len(vx) > 1 else vx[0]
        out[f"var_p{name[1]}"] = tuple(vp) if len(vp) > 1 else vp[0]
    out["equal_temperatures"] = len(temps) == 1
    return out


def brute_square_form(a: Callable, b: Callable, kernel: Callable,
                      t: float, n: int = 512) -> float:
    """Square integral int_0^t dt' int_0^t dt'' a(t') K(t'-t'') b(t'')
    by nested composite Simpson on a uniform n+1 point grid (n even).

    Because the kernel is even, the triangle integral of a symmetric pair
    is exactly half of this, so it doubles as a higher-order oracle for the
    triangle functionals without giving up the O(n^2) nested structure.
    """
    if n % 2:
        raise ValueError("brute_square_form needs an even n")
    tau = np.linspace(0.0, t, n + 1)
    h = t / n
    w = np.ones(n + 1)
    w[1:-1:2], w[2:-1:2] = 4.0, 2.0
    w *= h / 3.0
    A = w * np.asarray(a(tau), dtype=float)
    B = w * np.asarray(b(tau), dtype=float)
    K = np.asarray(kernel(tau[:, None] - tau[None, :]), dtype=float)
    return float(A @ K @ B)


def brute_double_integral(a: Callable, b: Callable, kernel: Callable,
                          t: float, n: int = 512) -> float:
    """Triangle integral int_0^t dt' int_0^t' dt'' a(t') K(t'-t'') b(t'')
    by nested trapezoid on a uniform n+1 point grid.  Slow by design."""
    tau = np.linspace(0.0, t, n + 1)
    A = np.asarray(a(tau), dtype=float)
    B = np.asarray(b(tau), dtype=float)
    K = np.asarray(kernel(tau[:, None] - tau[None, :]), dtype=float)
    h = t / n
    inner = np.empty(n + 1)
    inner[0] = 0.0
    for i in range(1, n + 1):
        row = K[i, :i + 1] * B[:i + 1]
        inner[i] = h * (np.sum(row) - 0.5 * (row[0] + row[-1]))
    outer = A * inner
    return float(h * (np.sum(outer) - 0.5 * (outer[0] + outer[-1])))
