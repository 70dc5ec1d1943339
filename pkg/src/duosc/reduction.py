"""Contraction of the propagator exponent with the initial Gaussian state.

The full exponent of (propagator) x (initial density matrix) is an exact
complex quadratic form over eight endpoint variables.  Integrating out the
four initial ones is a Schur complement; what remains is the final-time
Gaussian state, parametrized by real coefficients of its Hermitian part.
Anti-Hermitian residue (which would vanish in exact arithmetic for a valid
open-system evolution) is measured and reported, never silently projected
away without record.

Variable order used throughout: (X_f1, X_f2, xi_f1, xi_f2,
X_i1, X_i2, xi_i1, xi_i2), where X = x + y and xi = x - y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .action import ActionForm
from .config import InternalConfig
from .errors import NonHermitianLarge, NotNormalizable
from .influence import InfluenceForm

_X_SLOTS = (0, 1, 4, 5)    # Xf1, Xf2, Xi1, Xi2 in the 8-vector
_XI_SLOTS = (2, 3, 6, 7)   # xif1, xif2, xii1, xii2


@dataclass(frozen=True)
class QuadraticExponent:
    """exponent(e) = -1/2 e^T M e + L . e + c over the eight endpoints."""
    matrix: np.ndarray      # (8, 8) complex symmetric
    linear: np.ndarray      # (8,) complex
    constant: complex

    def value(self, e: np.ndarray) -> complex:
        e = np.asarray(e, dtype=float)
        return complex(-0.5 * e @ self.matrix @ e
                       + self.linear @ e + self.constant)


def propagator_exponent(cfg: InternalConfig, action: ActionForm,
                        infl: InfluenceForm) -> QuadraticExponent:
    """Exponent of propagator times initial state, before reduction."""
    M = np.zeros((8, 8), dtype=complex)
    L = np.zeros(8, dtype=complex)
    # i * (classical action): strictly X-xi bilinear plus linear terms
    for a, xa in enumerate(_X_SLOTS):
        for b, xb in enumerate(_XI_SLOTS):
            M[xa, xb] += -1j * action.bilinear[a, b]
            M[xb, xa] += -1j * action.bilinear[a, b]
        L[xa] += 1j * action.linear_X[a]
    for b, xb in enumerate(_XI_SLOTS):
        L[xb] += 1j * action.linear_xi[b]
    # -(bath phase): real quadratic-plus-linear in xi
    for a, xa in enumerate(_XI_SLOTS):
        for b, xb in enumerate(_XI_SLOTS):
            M[xa, xb] += 2.0 * infl.quadratic[a, b]
        L[xa] += -infl.linear[a]
    # initial Gaussian wave packets: -(X_i^2 + xi_i^2) / (8 sigma0^2)
    for slot, var in ((4, cfg.sigma01_sq), (5, cfg.sigma02_sq),
                      (6, cfg.sigma01_sq), (7, cfg.sigma02_sq)):
        M[slot, slot] += 1.0 / (4.0 * var)
    c = 1j * action.constant - infl.constant
    return QuadraticExponent(matrix=M, linear=L, constant=c)


@dataclass(frozen=True)
class GaussianStateParams:
    """Hermitian parametrization of the reduced state at time t.

    log rho(X1, X2, xi1, xi2) = log_norm
        - g1 X1^2 - g2 X2^2 - g12 X1 X2
        - gp1 xi1^2 - gp2 xi2^2 - gp12 xi1 xi2
        + i (gpp11 X1 xi1 + gpp12 X1 xi2 + gpp21 X2 xi1 + gpp22 X2 xi2)
        + mx1 X1 + mx2 X2 + i (mp1 xi1 + mp2 xi2)

    The m* linear coefficients carry the means; the quadratic block is
    drive-independent.  Anti-Hermitian leftovers of the reduction are kept
    in the diagnostics fields (absolute size of the dropped coefficients).
    """
    t: float
    g1: float
    g2: float
    g12: float
    gp1: float
    gp2: float
    gp12: float
    gpp11: float
    gpp12: float
    gpp21: float
    gpp22: float
    mx1: float
    mx2: float
    mp1: float
    mp2: float
    log_norm: float
    nonherm_quadratic: float
    nonherm_linear_X: float
    nonherm_linear_xi: float

    # marginal-position quadratic coefficients (convenient combinations)
    @property
    def beta11(self) -> float:
        return 8.0 * self.g1

    @property
    def beta22(self) -> float:
        return 8.0 * self.g2

    @property
    def beta12(self) -> float:
        return 4.0 * self.g12

    @property
    def beta_det(self) -> float:
        return self.beta11 * self.beta22 - self.beta12 ** 2

    def log_rho(self, x1, x2, y1, y2):
        """Log of the normalized position-representation matrix element."""
        X1 = np.asarray(x1) + np.asarray(y1)
        X2 = np.asarray(x2) + np.asarray(y2)
        xi1 = np.asarray(x1) - np.asarray(y1)
        xi2 = np.asarray(x2) - np.asarray(y2)
        return (self.log_norm
                - self.g1 * X1 ** 2 - self.g2 * X2 ** 2 - self.g12 * X1 * X2
                - self.gp1 * xi1 ** 2 - self.gp2 * xi2 ** 2
                - self.gp12 * xi1 * xi2
                + 1j * (self.gpp11 * X1 * xi1 + self.gpp12 * X1 * xi2
                        + self.gpp21 * X2 * xi1 + self.gpp22 * X2 * xi2)
                + self.mx1 * X1 + self.mx2 * X2
                + 1j * (self.mp1 * xi1 + self.mp2 * xi2))

    def rho(self, x1, x2, y1, y2):
        return np.exp(self.log_rho(x1, x2, y1, y2))


def initial_state(cfg: InternalConfig) -> GaussianStateParams:
    """The exact t = 0 product state of the two wave packets."""
    g1 = 1.0 / (8.0 * cfg.sigma01_sq)
    g2 = 1.0 / (8.0 * cfg.sigma02_sq)
    # trace = 1 fixes the norm of the two decoupled Gaussians
    beta11, beta22 = 8.0 * g1, 8.0 * g2
    log_norm = 0.5 * math.log(beta11 * beta22) - math.log(2.0 * math.pi)
    return GaussianStateParams(
        t=0.0, g1=g1, g2=g2, g12=0.0, gp1=g1, gp2=g2, gp12=0.0,
        gpp11=0.0, gpp12=0.0, gpp21=0.0, gpp22=0.0,
        mx1=0.0, mx2=0.0, mp1=0.0, mp2=0.0, log_norm=log_norm,
        nonherm_quadratic=0.0, nonherm_linear_X=0.0, nonherm_linear_xi=0.0)


def _schur_reduce(exponent: QuadraticExponent):
    """Integrate out the four initial endpoints.

    Returns (Qp, Lp, cp) with the reduced exponent
    -1/2 f^T Qp f + Lp . f + cp over f = (X_f1, X_f2, xi_f1, xi_f2).
    The initial block spans many orders of magnitude at long times (the
    anti-damped paths grow like exp(delta t)), so it is symmetrically
    equilibrated before solving.
    """
    M, L = exponent.matrix, exponent.linear
    ff, ii = slice(0, 4), slice(4, 8)
    Mff, Mfi, Mii = M[ff, ff], M[ff, ii], M[ii, ii]
    Lf, Li = L[ff], L[ii]
    d = 1.0 / np.sqrt(np.maximum(np.abs(np.diag(Mii)), 1e-300))
    Mii_s = (d[:, None] * Mii) * d[None, :]
    rhs = np.concatenate([Mfi.T * d[:, None] * 1.0,
                          (d * Li)[:, None]], axis=1)
    sol = np.linalg.solve(Mii_s, rhs)
    inv_Mfi_T = d[:, None] * sol[:, :4]       # Mii^-1 Mfi^T
    inv_Li = d * sol[:, 4]                    # Mii^-1 Li
    Qp = Mff - Mfi @ inv_Mfi_T
    Qp = 0.5 * (Qp + Qp.T)
    Lp = Lf - Mfi @ inv_Li
    cp = exponent.constant + 0.5 * Li @ inv_Li
    return Qp, Lp, cp


def reduce_to_state(cfg: InternalConfig, action: ActionForm,
                    infl: InfluenceForm,
                    nonherm_tol: float = 1e-6) -> GaussianStateParams:
    """Full contraction: exponent -> Schur complement -> state parameters."""
    exponent = propagator_exponent(cfg, action, infl)
    Qp, Lp, cp = _schur_reduce(exponent)

    g1 = 0.5 * float(np.real(Qp[0, 0]))
    g2 = 0.5 * float(np.real(Qp[1, 1]))
    g12 = float(np.real(Qp[0, 1]))
    gp1 = 0.5 * float(np.real(Qp[2, 2]))
    gp2 = 0.5 * float(np.real(Qp[3, 3]))
    gp12 = float(np.real(Qp[2, 3]))
    gpp11 = -float(np.imag(Qp[0, 2]))
    gpp12 = -float(np.imag(Qp[0, 3]))
    gpp21 = -float(np.imag(Qp[1, 2]))
    gpp22 = -float(np.imag(Qp[1, 3]))
    mx1 = float(np.real(Lp[0]))
    mx2 = float(np.real(Lp[1]))
    mp1 = float(np.imag(Lp[2]))
    mp2 = float(np.imag(Lp[3]))

    # anti-Hermitian residue: imaginary X-X / xi-xi and real X-xi quadratic
    # couplings, imaginary X-linear and real xi-linear coefficients
    nh_quad = max(float(np.max(np.abs(np.imag(Qp[:2, :2])))),
                  float(np.max(np.abs(np.imag(Qp[2:, 2:])))),
                  float(np.max(np.abs(np.real(Qp[:2, 2:])))))
    nh_lx = float(np.max(np.abs(np.imag(Lp[:2]))))
    nh_lxi = float(np.max(np.abs(np.real(Lp[2:]))))
    quad_scale = max(abs(g1), abs(g2), abs(gp1), abs(gp2), 1e-300)
    lin_scale = max(abs(mx1), abs(mx2), abs(mp1), abs(mp2))
    if nh_quad > nonherm_tol * quad_scale:
        raise NonHermitianLarge(
            f"anti-Hermitian quadratic residue {nh_quad:.3e} exceeds "
            f"{nonherm_tol:.1e} of scale {quad_scale:.3e} at t={action.t}")
    if lin_scale > 0 and max(nh_lx, nh_lxi) > nonherm_tol * lin_scale:
        raise NonHermitianLarge(
            f"anti-Hermitian linear residue {max(nh_lx, nh_lxi):.3e} "
            f"exceeds {nonherm_tol:.1e} of scale {lin_scale:.3e} "
            f"at t={action.t}")

    beta11, beta22, beta12 = 8.0 * g1, 8.0 * g2, 4.0 * g12
    delta = beta11 * beta22 - beta12 ** 2
    if not (g1 > 0 and g2 > 0 and delta > 0):
        raise NotNormalizable(
            f"position quadratic form not positive definite at t={action.t}: "
            f"g1={g1:.3e} g2={g2:.3e} det={delta:.3e}")
    # trace = 1 on the diagonal x = y, with X = 2x there (Jacobian 1/4).
    # The raw constant cp is deliberately NOT used: the path-integral
    # prefactor of the propagator is never tracked, so the normalization
    # must be imposed here rather than inherited.
    a_lin, b_lin = -mx1, -mx2
    log_norm = (0.5 * math.log(delta) - math.log(2.0 * math.pi)
                - 2.0 * (a_lin * a_lin * beta22 - 2.0 * a_lin * b_lin * beta12
                         + b_lin * b_lin * beta11) / delta)

    return GaussianStateParams(
        t=action.t, g1=g1, g2=g2, g12=g12, gp1=gp1, gp2=gp2, gp12=gp12,
        gpp11=gpp11, gpp12=gpp12, gpp21=gpp21, gpp22=gpp22,
        mx1=mx1, mx2=mx2, mp1=mp1, mp2=mp2, log_norm=log_norm,
        nonherm_quadratic=nh_quad, nonherm_linear_X=nh_lx,
        nonherm_linear_xi=nh_lxi)
