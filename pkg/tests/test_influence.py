import math

import numpy as np
import pytest
from scipy.integrate import quad

from duosc.config import InternalForce
from duosc.errors import ConfigError
from duosc.influence import (clenshaw_curtis, coth_factor, influence_form,
                             noise_kernel, thermal_weight)
from duosc.modes import basis_paths, solve_determinant
from duosc.oracle import brute_double_integral, brute_square_form
from duosc.particular import particular_solution

from test_modes import make_ic


def grid_kernel_table(T, mass, gamma, numax, t, n, n_cc=2048):
    """Exact kernel values on the (n+1)^2 lattice of grid differences."""
    x, w = clenshaw_curtis(n_cc)
    om = 0.5 * numax * (x + 1.0)
    wt = 0.5 * numax * w * thermal_weight(om, T)
    pref = 2.0 * mass * gamma / math.pi
    line = pref * (np.cos(np.outer(np.arange(n + 1) * (t / n), om)) @ wt)

    def kernel(s):
        idx = np.rint(np.abs(np.asarray(s)) * (n / t)).astype(int)
        return line[idx]

    return kernel


def brute_quadratic(ic, modes, t, n=512):
    """All 16 endpoint-quadratic slots from the O(n^2) square-rule oracle."""
    tau = np.linspace(0.0, t, n + 1)
    P1, P2, _, _ = basis_paths(modes, t, tau, sign=+1.0)
    Q = np.zeros((4, 4))
    for T, m, g, nm, P in ((ic.T1, ic.m1, ic.gamma1, ic.numax1, P1),
                           (ic.T2, ic.m2, ic.gamma2, ic.numax2, P2)):
        kern = grid_kernel_table(T, m, g, nm, t, n)
        for i in range(4):
            for j in range(i, 4):
                val = 0.5 * brute_square_form(
                    lambda s, i=i, P=P: P[i], lambda s, j=j, P=P: P[j],
                    kern, t, n=n)
                Q[i, j] += val
                if i != j:
                    Q[j, i] += val
    return Q


def test_coth_factor_series_continuity():
    # series branch and tanh branch agree where they hand over
    theta = 1.000001e-4
    series = 1.0 / theta + theta / 3.0
    assert math.isclose(float(coth_factor(np.array([theta]))[0]),
                        series, rel_tol=1e-12)
    assert math.isclose(series, 1.0 / math.tanh(theta), rel_tol=1e-12)
    assert math.isclose(float(coth_factor(np.array([2.0]))[0]),
                        1.0 / math.tanh(2.0), rel_tol=1e-14)


def test_thermal_weight_limits():
    w = np.array([0.0, 1e-9, 1.0, 40.0])
    T = 3.9
    out = thermal_weight(w, T)
    assert np.all(np.isfinite(out))
    assert math.isclose(out[0], 2.0 * T, rel_tol=1e-12)
    assert math.isclose(out[2], 1.0 / math.tanh(1.0 / (2 * T)), rel_tol=1e-12)
    # zero temperature: weight reduces to |omega|
    np.testing.assert_allclose(thermal_weight(w, 0.0), np.abs(w))


def test_clenshaw_curtis_integrates_polynomials():
    x, w = clenshaw_curtis(64)
    for k in range(0, 12):
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        assert math.isclose(float(np.sum(w * x ** k)), exact,
                            rel_tol=1e-12, abs_tol=1e-13)
    with pytest.raises(ConfigError):
        clenshaw_curtis(1)


def test_noise_kernel_even_and_finite(ic_fig3):
    nk = noise_kernel(ic_fig3.T1, ic_fig3.m1, ic_fig3.gamma1,
                      ic_fig3.numax1, 3.0)
    assert np.all(np.isfinite(nk.values))
    s = np.linspace(0.0, 3.0, 37)
    np.testing.assert_allclose(nk(s), nk(-s))


def test_noise_kernel_value_against_adaptive_quad(ic_fig3):
    T, m, g, numax = ic_fig3.T1, ic_fig3.m1, ic_fig3.gamma1, ic_fig3.numax1
    nk = noise_kernel(T, m, g, numax, 2.0)
    pref = 2.0 * m * g / math.pi
    for s in (0.0, 0.5, 1.7):
        ref = pref * quad(
            lambda w: float(thermal_weight(np.array([w]), T)[0])
            * math.cos(w * s), 0.0, numax, limit=400)[0]
        # tabulated grid spacing pi/(8 numax); interpolation-level agreement
        assert math.isclose(nk(s), ref, rel_tol=5e-3, abs_tol=5e-3)
    # exactly on a grid node the quadrature itself should be tight
    s_node = nk.s_grid[40]
    ref = pref * quad(
        lambda w: float(thermal_weight(np.array([w]), T)[0])
        * math.cos(w * s_node), 0.0, numax, limit=400)[0]
    assert math.isclose(float(nk.values[40]), ref, rel_tol=1e-8, abs_tol=1e-10)


def test_classical_limit_kernel_shape():
    # T >> numax: coth -> 2T/w and K(s) -> pref * 2T * sin(numax s)/s
    T, m, g, numax = 5e4, 1.0, 0.01, 50.0
    nk = noise_kernel(T, m, g, numax, 2.0)
    pref = 2.0 * m * g / math.pi
    s = nk.s_grid[1:300]
    ref = pref * 2.0 * T * np.sin(numax * s) / s
    assert np.max(np.abs(nk.values[1:300] - ref)) < 1e-3 * 2.0 * T * pref * numax


def test_quadratic_form_positive_semidefinite(ic_fig3, modes_fig3):
    for t in (1.3, 6.2, 12.3):
        inf = influence_form(ic_fig3, modes_fig3, None, t)
        eig = np.linalg.eigvalsh(inf.quadratic)
        assert eig.min() > -1e-12 * max(eig.max(), 1.0)


def test_decoupled_cross_slots_vanish():
    ic = make_ic(lam_tilde=0.0)
    modes = solve_determinant(ic)
    inf = influence_form(ic, modes, None, 4.4)
    scale = np.max(np.abs(inf.quadratic))
    for e in (inf.E1, inf.E2, inf.E3, inf.E4):
        assert abs(e) < 1e-12 * scale


def test_quadratic_block_is_drive_independent(ic_fig3, modes_fig3):
    t = 8.1
    partic = particular_solution(modes_fig3, ic_fig3.force1,
                                 ic_fig3.force2, t)
    a = influence_form(ic_fig3, modes_fig3, None, t)
    b = influence_form(ic_fig3, modes_fig3, partic, t)
    np.testing.assert_array_equal(a.quadratic, b.quadratic)
    assert np.all(a.linear == 0.0) and a.constant == 0.0
    assert np.any(b.linear != 0.0) and b.constant > 0.0


def test_named_slots_match_matrix(ic_fig3, modes_fig3):
    inf = influence_form(ic_fig3, modes_fig3, None, 3.3)
    q = inf.quadratic
    assert inf.A1 == q[0, 0] and inf.C1 == q[2, 2]
    assert inf.B1 == 2 * q[0, 2] and inf.E4 == 2 * q[0, 1]
    e = np.array([0.3, -0.7, 1.1, 0.4])
    direct = float(e @ q @ e)
    expanded = (inf.A1 * e[0] ** 2 + inf.A2 * e[1] ** 2
                + inf.C1 * e[2] ** 2 + inf.C2 * e[3] ** 2
                + inf.B1 * e[0] * e[2] + inf.B2 * e[1] * e[3]
                + inf.E1 * e[2] * e[3] + inf.E2 * e[1] * e[2]
                + inf.E3 * e[0] * e[3] + inf.E4 * e[0] * e[1])
    assert math.isclose(direct, expanded, rel_tol=1e-13)


def test_fast_route_matches_square_rule_oracle(ic_fig3, modes_fig3):
    for t in (2.0, 5.0):
        inf = influence_form(ic_fig3, modes_fig3, None, t)
        Q = brute_quadratic(ic_fig3, modes_fig3, t, n=512)
        scale = np.max(np.abs(inf.quadratic))
        rel = np.abs(Q - inf.quadratic) / np.maximum(
            np.abs(inf.quadratic), 1e-9 * scale)
        assert np.max(rel) < 1e-5


def test_triangle_trapezoid_agrees_at_its_own_order(ic_fig3, modes_fig3):
    # the first-order triangle oracle converges to the same numbers, just
    # with O(h^2) error; check one diagonal slot at two resolutions
    t = 2.0
    inf = influence_form(ic_fig3, modes_fig3, None, t)
    errs = []
    for n in (512, 1024):
        tau = np.linspace(0.0, t, n + 1)
        P1, P2, _, _ = basis_paths(modes_fig3, t, tau, sign=+1.0)
        tot = 0.0
        for T, m, g, nm, P in (
                (ic_fig3.T1, ic_fig3.m1, ic_fig3.gamma1, ic_fig3.numax1, P1),
                (ic_fig3.T2, ic_fig3.m2, ic_fig3.gamma2, ic_fig3.numax2, P2)):
            kern = grid_kernel_table(T, m, g, nm, t, n)
            tot += brute_double_integral(lambda s, P=P: P[2],
                                         lambda s, P=P: P[2], kern, t, n=n)
        errs.append(abs(tot - inf.quadratic[2, 2]))
    assert errs[0] < 1e-3 * abs(inf.quadratic[2, 2])
    assert errs[1] < 0.35 * errs[0]  # second-order shrink


def test_drive_linear_term_against_time_domain(ic_fig3, modes_fig3):
    """The drive-linear slot equals the mixed basis-path x particular-path
    triangle functional computed by the square-rule oracle."""
    t = 3.7
    partic = particular_solution(modes_fig3, ic_fig3.force1,
                                 ic_fig3.force2, t)
    inf = influence_form(ic_fig3, modes_fig3, partic, t)
    n = 1024
    tau = np.linspace(0.0, t, n + 1)
    P1, P2, _, _ = basis_paths(modes_fig3, t, tau, sign=+1.0)
    p1, p2 = partic.values(tau)
    lin = np.zeros(4)
    for T, m, g, nm, P, p in (
            (ic_fig3.T1, ic_fig3.m1, ic_fig3.gamma1, ic_fig3.numax1, P1, p1),
            (ic_fig3.T2, ic_fig3.m2, ic_fig3.gamma2, ic_fig3.numax2, P2, p2)):
        kern = grid_kernel_table(T, m, g, nm, t, n)
        for i in range(4):
            lin[i] += brute_square_form(lambda s, i=i: P[i], lambda s: p,
                                        kern, t, n=n)
    scale = max(np.max(np.abs(inf.linear)), 1e-300)
    assert np.max(np.abs(lin - inf.linear)) < 1e-5 * scale
