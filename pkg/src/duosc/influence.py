"""Bath-induced phase functionals on classical difference-variable paths.

Each bath contributes a real, positive phase

    phi = pref * int_0^numax dw w coth(w / 2T) *
          int_0^t dt' int_0^t' dt'' xi(t') cos[w (t'-t'')] xi(t'')

with pref = 2*m*gamma/(hbar*pi), evaluated on the classical path of the
oscillator that bath touches.  Since the cosine double integral over the
triangle is half the symmetric square integral, it collapses to
(1/2) * Re[F(w) * conj(F(w))] with F the finite-time Fourier transform of
the path, which for the trig-times-exponential boundary paths is elementary.
The endpoint quadratic form is extracted exactly from the four unit-endpoint
basis paths; the driven particular solution adds a linear term and a
constant, which are kept (their non-Hermitian residue is measured later, not
assumed away).

The time-domain kernel K(s) is also tabulated here; it is only used by the
brute-force oracle comparisons, not by the fast path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .config import InternalConfig
from .errors import ConfigError
from .modes import (NormalModes, check_caustic, component_weights,
                    xi_coefficient_matrix)
from .particular import ParticularSolution

_GL16 = np.polynomial.legendre.leggauss(16)

XI_LABELS = ("xif1", "xif2", "xii1", "xii2")


def coth_factor(theta) -> np.ndarray:
    """coth(theta), with the small-argument series 1/theta + theta/3 below
    1e-4 to avoid 0/0; theta = inf (zero temperature) maps to 1."""
    theta = np.asarray(theta, dtype=float)
    out = np.empty_like(theta)
    small = np.abs(theta) < 1e-4
    with np.errstate(divide="ignore"):
        ts = theta[small]
        out[small] = 1.0 / ts + ts / 3.0
    out[~small] = 1.0 / np.tanh(theta[~small])
    return out


def thermal_weight(omega: np.ndarray, T: float) -> np.ndarray:
    """omega * coth(omega / 2T), with T = 0 meaning coth -> 1.

    Finite everywhere: the omega -> 0 limit is 2T.
    """
    omega = np.asarray(omega, dtype=float)
    if T == 0.0:
        return np.abs(omega)
    theta = omega / (2.0 * T)
    small = np.abs(theta) < 1e-4
    out = np.empty_like(omega)
    # omega*coth(omega/2T) = 2T*(1 + theta^2/3 + ...) near zero
    out[small] = 2.0 * T * (1.0 + theta[small] ** 2 / 3.0)
    out[~small] = omega[~small] / np.tanh(theta[~small])
    return out


# ---------------------------------------------------------------------------
# time-domain kernel tabulation (oracle-facing)

def clenshaw_curtis(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Clenshaw-Curtis nodes and weights on [-1, 1] (n+1 points)."""
    if n < 2:
        raise ConfigError("clenshaw_curtis needs n >= 2")
    theta = math.pi * np.arange(n + 1) / n
    x = np.cos(theta)
    w = np.zeros(n + 1)
    ii = np.arange(1, n)
    v = np.ones(n - 1)
    if n % 2 == 0:
        w[0] = w[n] = 1.0 / (n * n - 1)
        for k in range(1, n // 2):
            v -= 2.0 * np.cos(2.0 * k * theta[ii]) / (4.0 * k * k - 1)
        v -= np.cos(n * theta[ii]) / (n * n - 1)
    else:
        w[0] = w[n] = 1.0 / (n * n)
        for k in range(1, (n - 1) // 2 + 1):
            v -= 2.0 * np.cos(2.0 * k * theta[ii]) / (4.0 * k * k - 1)
    w[ii] = 2.0 * v / n
    return x, w


@dataclass(frozen=True)
class NoiseKernel:
    """Tabulated thermal noise kernel K(s) of one bath on [0, t].

    K(s) = (2 m gamma / (hbar pi)) * int_0^numax dw w coth(w/2T) cos(w s);
    even in s, finite for finite cutoff.
    """
    s_grid: np.ndarray
    values: np.ndarray
    prefactor: float
    temperature: float
    cutoff: float

    def __call__(self, s) -> np.ndarray:
        return np.interp(np.abs(np.asarray(s, dtype=float)),
                         self.s_grid, self.values)


def noise_kernel(T: float, mass: float, gamma: float, numax: float,
                 t: float, n_omega: Optional[int] = None) -> NoiseKernel:
    """Tabulate the noise kernel on a uniform s grid over [0, t]."""
    if numax <= 0:
        raise ConfigError("cutoff must be positive")
    spacing = math.pi / (8.0 * numax)
    n_s = max(2, int(math.ceil(t / spacing)) + 1)
    s = np.linspace(0.0, t, n_s)
    if n_omega is None:
        # enough Clenshaw-Curtis points to resolve cos(w*s) at the largest s
        n_omega = max(256, 4 * int(math.ceil(numax * t / math.pi)))
    x, w = clenshaw_curtis(n_omega)
    omega = 0.5 * numax * (x + 1.0)
    w = 0.5 * numax * w
    weight = w * thermal_weight(omega, T)
    pref = 2.0 * mass * gamma / math.pi
    vals = np.empty(n_s)
    chunk = max(1, int(4e6 // max(omega.size, 1)))
    for lo in range(0, n_s, chunk):
        hi = min(lo + chunk, n_s)
        vals[lo:hi] = pref * (np.cos(np.outer(s[lo:hi], omega)) @ weight)
    return NoiseKernel(s_grid=s, values=vals, prefactor=pref,
                       temperature=T, cutoff=numax)


# ---------------------------------------------------------------------------
# frequency-domain evaluation of the endpoint form

@dataclass(frozen=True)
class InfluenceForm:
    """Endpoint structure of the total bath phase at time t.

    phi(e) = e^T quadratic e + linear . e + constant over
    e = (xi_f1, xi_f2, xi_i1, xi_i2).  The quadratic block is
    drive-independent and positive semidefinite; linear and constant exist
    only with drive (they come from the particular solution).
    """
    t: float
    quadratic: np.ndarray   # (4, 4) symmetric
    linear: np.ndarray      # (4,)
    constant: float

    # named slots of the conventional expansion
    @property
    def A1(self): return float(self.quadratic[0, 0])
    @property
    def B1(self): return float(2.0 * self.quadratic[0, 2])
    @property
    def C1(self): return float(self.quadratic[2, 2])
    @property
    def A2(self): return float(self.quadratic[1, 1])
    @property
    def B2(self): return float(2.0 * self.quadratic[1, 3])
    @property
    def C2(self): return float(self.quadratic[3, 3])
    @property
    def E1(self): return float(2.0 * self.quadratic[2, 3])
    @property
    def E2(self): return float(2.0 * self.quadratic[1, 2])
    @property
    def E3(self): return float(2.0 * self.quadratic[0, 3])
    @property
    def E4(self): return float(2.0 * self.quadratic[0, 1])

    def value(self, e: np.ndarray) -> float:
        e = np.asarray(e, dtype=float)
        return float(e @ self.quadratic @ e + self.linear @ e + self.constant)


def _omega_panels(numax: float, t: float):
    """Composite GL-16 nodes resolving the O(2 pi / t) oscillation in w."""
    panels = max(64, 4 * int(math.ceil(numax * t / (2.0 * math.pi))))
    edges = np.linspace(0.0, numax, panels + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    halfs = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mids[:, None] + halfs[:, None] * _GL16[0]).ravel()
    wts = (halfs[:, None] * _GL16[1]).ravel()
    return nodes, wts


def _elementary_transforms(modes: NormalModes, t: float,
                           omega: np.ndarray) -> np.ndarray:
    """F_c(w) = int_0^t psi_c(tau) exp(-i w tau) dtau for the four
    anti-damped elementary functions [sin1, cos1, sin2, cos2]; (4, n)."""
    out = np.empty((4, omega.size), dtype=complex)
    for k, (O, d) in enumerate(((modes.Omega1, modes.delta1),
                                (modes.Omega2, modes.delta2))):
        ap = d + 1j * (O - omega)
        am = d - 1j * (O + omega)

        def E(alpha):
            small = np.abs(alpha) < 1e-9
            res = np.empty(alpha.shape, dtype=complex)
            res[~small] = (np.exp(alpha[~small] * t) - 1.0) / alpha[~small]
            a0 = alpha[small]
            res[small] = t * (1.0 + a0 * t / 2.0 + (a0 * t) ** 2 / 6.0)
            return res

        Ep, Em = E(ap), E(am)
        out[2 * k] = (Ep - Em) / 2j
        out[2 * k + 1] = (Ep + Em) / 2.0
    return out


def influence_form(cfg: InternalConfig, modes: NormalModes,
                   partic: Optional[ParticularSolution], t: float,
                   n_tau_min: int = 1024) -> InfluenceForm:
    """Evaluate the total bath phase structure at time t."""
    if t <= 0.0:
        raise ConfigError(f"influence_form needs t > 0, got {t}")
    check_caustic(modes, t)
    V = xi_coefficient_matrix(modes, t)
    c1, c2 = component_weights(modes)
    baths = (
        (cfg.m1, cfg.gamma1, cfg.T1, cfg.numax1, c1),
        (cfg.m2, cfg.gamma2, cfg.T2, cfg.numax2, c2),
    )
    driven = partic is not None and not np.allclose(
        [np.max(np.abs(partic.xi1_grid)), np.max(np.abs(partic.xi2_grid))], 0.0)
    if driven:
        from .action import quadrature_nodes
        max_freq = max(modes.Omega2 + modes.delta2, 1.0)
        tau, tau_w = quadrature_nodes(t, n_min=n_tau_min, max_freq=max_freq)
        p1, p2 = partic.values(tau)
        p_comp = (tau_w * p1, tau_w * p2)

    quadratic = np.zeros((4, 4))
    linear = np.zeros(4)
    constant = 0.0
    for mass, gamma, T, numax, comp in baths:
        if gamma == 0.0:
            continue
        omega, wts = _omega_panels(numax, t)
        pref = 2.0 * mass * gamma / math.pi
        chunk = 65536
        for lo in range(0, omega.size, chunk):
            om = omega[lo:lo + chunk]
            wt = wts[lo:lo + chunk] * thermal_weight(om, T) * pref
            psi = _elementary_transforms(modes, t, om)
            Fb = (V * comp[:, None]).T @ psi          # (4, n) basis transforms
            Sq = np.real((Fb * wt) @ Fb.conj().T)     # symmetric square form
            quadratic += 0.5 * Sq
            if driven:
                pw = p_comp[0] if comp is c1 else p_comp[1]
                Fp = np.exp(-1j * np.outer(om, tau)) @ pw
                linear += np.real((Fb * wt) @ Fp.conj())
                constant += 0.5 * float(np.real(np.sum(wt * Fp * Fp.conj())))
    quadratic = 0.5 * (quadratic + quadratic.T)
    return InfluenceForm(t=t, quadratic=quadratic, linear=linear,
                         constant=constant)
