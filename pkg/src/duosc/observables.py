"""Physical moments of the reduced two-oscillator Gaussian state.

All first and second moments follow from the Hermitian state parameters by
Gaussian algebra.  With G the 2x2 quadratic form of the diagonal (X1, X2)
distribution, h its linear term, Gamma the X-xi phase couplings and
Gp the xi-xi quadratic block,

    <x>      = G^-1 h / 2
    <p>      = hbar (Gamma^T G^-1 h + m_p)
    Cov(x,x) = G^-1 / 4
    Cov(x,p) = (hbar / 2) G^-1 Gamma          (symmetrized)
    Cov(p,p) = hbar^2 (Gp + Gamma^T G^-1 Gamma)

Derivatives with respect to the difference variables hit the density matrix
on its diagonal; total-X derivatives integrate away, which is what makes the
closed forms this short.  A slow finite-difference verifier recomputes the
same moments straight from rho(x, y) for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .reduction import GaussianStateParams

_GH_NODES, _GH_WEIGHTS = np.polynomial.hermite_e.hermegauss(48)


@dataclass(frozen=True)
class CovarianceReport:
    """First and second moments at one time, in internal units."""
    t: float
    mean_x1: float
    mean_x2: float
    mean_p1: float
    mean_p2: float
    var_x1: float
    var_x2: float
    var_p1: float
    var_p2: float
    cov_x1x2: float
    cov_p1p2: float
    cov_x1p1: float
    cov_x2p2: float
    cov_x1p2: float
    cov_x2p1: float
    rs_min_eig: float

    @property
    def covariance_matrix(self) -> np.ndarray:
        """Symmetrized covariance matrix over (x1, p1, x2, p2)."""
        return np.array([
            [self.var_x1, self.cov_x1p1, self.cov_x1x2, self.cov_x1p2],
            [self.cov_x1p1, self.var_p1, self.cov_x2p1, self.cov_p1p2],
            [self.cov_x1x2, self.cov_x2p1, self.var_x2, self.cov_x2p2],
            [self.cov_x1p2, self.cov_p1p2, self.cov_x2p2, self.var_p2],
        ])


def _blocks(state: GaussianStateParams):
    G = np.array([[2.0 * state.g1, state.g12],
                  [state.g12, 2.0 * state.g2]])
    Gp = np.array([[2.0 * state.gp1, state.gp12],
                   [state.gp12, 2.0 * state.gp2]])
    Gamma = np.array([[state.gpp11, state.gpp12],
                      [state.gpp21, state.gpp22]])
    h = np.array([state.mx1, state.mx2])
    mp = np.array([state.mp1, state.mp2])
    return G, Gp, Gamma, h, mp


def robertson_schrodinger_min_eig(cov: np.ndarray, hbar: float = 1.0) -> float:
    """Smallest eigenvalue of cov + (i hbar / 2) J; >= 0 for a valid state."""
    J = np.array([[0.0, 1.0, 0.0, 0.0],
                  [-1.0, 0.0, 0.0, 0.0],
                  [0.0, 0.0, 0.0, 1.0],
                  [0.0, 0.0, -1.0, 0.0]])
    H = cov.astype(complex) + 0.5j * hbar * J
    return float(np.min(np.linalg.eigvalsh(H)))


def report(state: GaussianStateParams, hbar: float = 1.0) -> CovarianceReport:
    """Assemble all first and second moments of the state."""
    G, Gp, Gamma, h, mp = _blocks(state)
    Ginv = np.linalg.inv(G)
    Xbar = Ginv @ h
    xbar = 0.5 * Xbar
    pbar = hbar * (Gamma.T @ Xbar + mp)
    Cxx = 0.25 * Ginv
    Cxp = 0.5 * hbar * Ginv @ Gamma
    Cpp = hbar * hbar * (Gp + Gamma.T @ Ginv @ Gamma)
    cov = np.array([
        [Cxx[0, 0], Cxp[0, 0], Cxx[0, 1], Cxp[0, 1]],
        [Cxp[0, 0], Cpp[0, 0], Cxp[1, 0], Cpp[0, 1]],
        [Cxx[0, 1], Cxp[1, 0], Cxx[1, 1], Cxp[1, 1]],
        [Cxp[0, 1], Cpp[0, 1], Cxp[1, 1], Cpp[1, 1]],
    ])
    return CovarianceReport(
        t=state.t,
        mean_x1=float(xbar[0]), mean_x2=float(xbar[1]),
        mean_p1=float(pbar[0]), mean_p2=float(pbar[1]),
        var_x1=float(Cxx[0, 0]), var_x2=float(Cxx[1, 1]),
        var_p1=float(Cpp[0, 0]), var_p2=float(Cpp[1, 1]),
        cov_x1x2=float(Cxx[0, 1]), cov_p1p2=float(Cpp[0, 1]),
        cov_x1p1=float(Cxp[0, 0]), cov_x2p2=float(Cxp[1, 1]),
        cov_x1p2=float(Cxp[0, 1]), cov_x2p1=float(Cxp[1, 0]),
        rs_min_eig=robertson_schrodinger_min_eig(cov, hbar=hbar))


# ---------------------------------------------------------------------------
# slow, independent verification straight from rho(x, y)

def numeric_trace(state: GaussianStateParams) -> float:
    """Trace by Gauss-Hermite quadrature on the diagonal distribution."""
    G, _, _, h, _ = _blocks(state)
    Ginv = np.linalg.inv(G)
    Xbar = Ginv @ h
    Lc = np.linalg.cholesky(Ginv)
    U1, U2 = np.meshgrid(_GH_NODES, _GH_NODES, indexing="ij")
    W = np.outer(_GH_WEIGHTS, _GH_WEIGHTS)
    U = np.stack([U1.ravel(), U2.ravel()])
    X = (Lc @ U) + Xbar[:, None]
    # ghe weights absorb exp(-u^2/2); undo it, add the Jacobian of X = L u
    logrho = np.real(state.log_rho(X[0] / 2, X[1] / 2, X[0] / 2, X[1] / 2))
    vals = np.exp(logrho + 0.5 * np.sum(U * U, axis=0))
    jac = abs(np.linalg.det(Lc))
    return float(0.25 * jac * np.sum(W.ravel() * vals))


def hermiticity_error(state: GaussianStateParams, n: int = 64,
                      seed: int = 7) -> float:
    """max |rho(x, y) - conj(rho(y, x))| / max |rho| on scattered points."""
    rng = np.random.default_rng(seed)
    scale = 2.0 * math.sqrt(max(1.0 / (8.0 * state.g1),
                                1.0 / (8.0 * state.g2)))
    G, _, _, h, _ = _blocks(state)
    center = 0.5 * (np.linalg.inv(G) @ h)
    pts = rng.normal(size=(4, n)) * scale
    x1, x2 = pts[0] + center[0], pts[1] + center[1]
    y1, y2 = pts[2] + center[0], pts[3] + center[1]
    a = state.rho(x1, x2, y1, y2)
    b = np.conj(state.rho(y1, y2, x1, x2))
    ref = float(np.max(np.abs(a)))
    return float(np.max(np.abs(a - b)) / max(ref, 1e-300))


def finite_difference_moments(state: GaussianStateParams,
                              hbar: float = 1.0) -> dict:
    """Momentum moments by finite differences of rho in the off-diagonal
    direction, positions by quadrature; slow, for verification only."""
    G, _, _, h, _ = _blocks(state)
    Ginv = np.linalg.inv(G)
    Xbar = Ginv @ h
    Lc = np.linalg.cholesky(Ginv)
    U1, U2 = np.meshgrid(_GH_NODES, _GH_NODES, indexing="ij")
    W = np.outer(_GH_WEIGHTS, _GH_WEIGHTS).ravel()
    U = np.stack([U1.ravel(), U2.ravel()])
    X = (Lc @ U) + Xbar[:, None]
    jac = abs(np.linalg.det(Lc))
    base_w = 0.25 * jac * W * np.exp(0.5 * np.sum(U * U, axis=0))

    def diag_rho(e1, e2):
        # rho evaluated at xi = (e1, e2) on the sampled X grid
        return state.rho((X[0] + e1) / 2, (X[1] + e2) / 2,
                         (X[0] - e1) / 2, (X[1] - e2) / 2)

    eps = 1e-5 / math.sqrt(max(state.gp1, state.gp2, 1.0))
    r0 = diag_rho(0.0, 0.0)
    trace = float(np.real(np.sum(base_w * r0)))
    mean_x1 = float(np.real(np.sum(base_w * r0 * X[0] / 2))) / trace
    mean_x2 = float(np.real(np.sum(base_w * r0 * X[1] / 2))) / trace
    # <p_j> = -i hbar int (d rho / d xi_j) at xi = 0 over the diagonal
    d1 = (diag_rho(eps, 0.0) - diag_rho(-eps, 0.0)) / (2 * eps)
    d2 = (diag_rho(0.0, eps) - diag_rho(0.0, -eps)) / (2 * eps)
    mean_p1 = float(np.real(np.sum(base_w * (-1j * hbar) * d1))) / trace
    mean_p2 = float(np.real(np.sum(base_w * (-1j * hbar) * d2))) / trace
    # <p_j^2> = -hbar^2 int (d^2 rho / d xi_j^2) at xi = 0
    dd1 = (diag_rho(eps, 0.0) - 2 * r0 + diag_rho(-eps, 0.0)) / eps ** 2
    dd2 = (diag_rho(0.0, eps) - 2 * r0 + diag_rho(0.0, -eps)) / eps ** 2
    var_p1 = float(np.real(np.sum(base_w * (-hbar ** 2) * dd1))) / trace \
        - mean_p1 ** 2
    var_p2 = float(np.real(np.sum(base_w * (-hbar ** 2) * dd2))) / trace \
        - mean_p2 ** 2
    var_x1 = float(np.real(np.sum(base_w * r0 * (X[0] / 2) ** 2))) / trace \
        - mean_x1 ** 2
    var_x2 = float(np.real(np.sum(base_w * r0 * (X[1] / 2) ** 2))) / trace \
        - mean_x2 ** 2
    return {
        "trace": trace,
        "mean_x1": mean_x1, "mean_x2": mean_x2,
        "mean_p1": mean_p1, "mean_p2": mean_p2,
        "var_x1": var_x1, "var_x2": var_x2,
        "var_p1": var_p1, "var_p2": var_p2,
    }


def verify_state(state: GaussianStateParams, hbar: float = 1.0) -> dict:
    """Internal consistency checks; returns named residuals."""
    rep = report(state, hbar=hbar)
    fd = finite_difference_moments(state, hbar=hbar)
    scale_x = math.sqrt(max(rep.var_x1, rep.var_x2))
    scale_p = math.sqrt(max(rep.var_p1, rep.var_p2))
    return {
        "trace_error": abs(fd["trace"] - 1.0),
        "hermiticity_error": hermiticity_error(state),
        "rs_min_eig": rep.rs_min_eig,
        "mean_x_error": max(abs(fd["mean_x1"] - rep.mean_x1),
                            abs(fd["mean_x2"] - rep.mean_x2)) / scale_x,
        "mean_p_error": max(abs(fd["mean_p1"] - rep.mean_p1),
                            abs(fd["mean_p2"] - rep.mean_p2)) / scale_p,
        "var_x_error": max(abs(fd["var_x1"] - rep.var_x1),
                           abs(fd["var_x2"] - rep.var_x2)) / scale_x ** 2,
        "var_p_error": max(abs(fd["var_p1"] - rep.var_p1),
                           abs(fd["var_p2"] - rep.var_p2)) / scale_p ** 2,
    }
